// Runs the acceptance suite and prints one line per criterion; an optional
// second argument also writes the summary to that file.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "jamesgeo/acceptance.hpp"

int main(int argc, char** argv) {
  jamesgeo::AcceptanceOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  const jamesgeo::AcceptanceSummary s = jamesgeo::run_acceptance(opts);
  const std::string text = s.text();
  std::fputs(text.c_str(), stdout);
  if (argc > 2) std::ofstream(argv[2], std::ios::binary) << text;
  return s.passed() ? 0 : 1;
}
