// Command line front end. Exit status: 0 ok, 1 usage or input error,
// 2 a checked property failed or could not be certified.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jamesgeo/acceptance.hpp"
#include "jamesgeo/json_io.hpp"

using namespace jamesgeo;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct RunConfig {
  std::string command;
  std::string action;
  double p = 2.0;
  double q = 0.0;
  double r = 0.0;
  double tolerance = 1e-3;
  std::uint64_t seed = 0;
  std::string input;
  std::string point;
  std::string out;
  bool oracle = false;

  // solver
  int starts = 8;
  int max_iterations = 2000;
  int max_cuts = 400;

  // norms and midpoints
  std::string side = "dual";
  std::string norm = "original";
  double delta = 0.5;
  std::size_t samples = 100;
  double slack = 0.0;
  std::size_t tail_width = 6;
  std::string split = "full";
  std::string map = "identity";
  double target_p = 2.0;
  double scale = 2.0;
  double t = 4.0;
  double eps = 0.1;
  std::size_t pairs = 200;
  std::size_t window = 8;

  // graphs
  std::string k = "2";
  std::string ground_set = "1..8";
  std::optional<double> theta;
  double c = 1.0;
  std::size_t target = 3;
  bool greedy = false;
  std::size_t guard = 100000;
  bool override_guard = false;
  double dual_tolerance = 0.0;

  void validate() const {
    auto exponent = [](const char* name, double v) {
      if (!(v > 1.0)) throw CLI::ValidationError(std::string("--") + name, "exponent must be > 1");
    };
    exponent("p", p);
    if (q != 0.0) exponent("q", q);
    if (r != 0.0) exponent("r", r);
    if (!(tolerance > 0.0)) throw CLI::ValidationError("--tol", "tolerance must be > 0");
  }

  SolverOptions solver() const {
    SolverOptions s;
    s.starts = starts;
    s.max_iterations = max_iterations;
    s.tolerance = tolerance;
    s.max_cuts = max_cuts;
    s.seed = seed;
    return s;
  }

  PairOptions pair_options() const {
    PairOptions o;
    o.norm = norm == "equivalent" ? ImageNorm::equivalent : ImageNorm::original;
    o.guard = guard;
    o.override_guard = override_guard;
    o.solver = solver();
    return o;
  }
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw CLI::ValidationError("--out", "cannot write " + cfg.out);
  f << text;
}

void emit(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

Json input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw CLI::ValidationError("--input", "an input file is required");
  return io::read_file(cfg.input);
}

std::vector<std::size_t> k_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (Index k : parse_index_range(text)) out.push_back(k);
  return out;
}

int run_norm(const RunConfig& cfg) {
  const SeqVector x = io::vector_from_json(input(cfg));
  const Exponent e(cfg.p);
  const NormResult r = james_norm(x, e);
  Json j = io::to_json(r);
  int status = kOk;
  if (cfg.oracle) {
    const NormResult b = james_norm_bruteforce(x, e);
    const double diff = std::fabs(r.value - b.value);
    j["oracle"] = io::to_json(b);
    j["discrepancy"] = diff;
    if (diff > 1e-9) status = kViolation;
  }
  emit(cfg, j);
  return status;
}

int run_subgradient(const RunConfig& cfg) {
  emit(cfg, io::to_json(norm_subgradient(io::vector_from_json(input(cfg)), Exponent(cfg.p))));
  return kOk;
}

int run_blocks(const RunConfig& cfg) {
  const Json j = input(cfg);
  if (!j.is_array()) throw io::JsonError("$", "expected an array of vectors");
  std::vector<SeqVector> blocks;
  for (std::size_t i = 0; i < j.size(); ++i) {
    blocks.push_back(io::vector_from_json(j[i], "$[" + std::to_string(i) + "]"));
  }
  const BlockRatioReport r = consecutive_blocks_check(blocks, Exponent(cfg.p));
  emit(cfg, io::to_json(r));
  return r.within_bound ? kOk : kViolation;
}

int run_dualnorm(const RunConfig& cfg) {
  const DualFunctional f = io::functional_from_json(input(cfg));
  emit(cfg, io::to_json(dual_norm(f, Exponent(cfg.p), cfg.solver())));
  return kOk;
}

int run_eqnorm(const RunConfig& cfg) {
  const Json j = input(cfg);
  if (cfg.side == "dual") {
    emit(cfg, io::to_json(equivalent_dual_norm(io::functional_from_json(j), Exponent(cfg.p),
                                               cfg.solver())));
  } else {
    emit(cfg, io::to_json(equivalent_primal_norm(io::vector_from_json(j), Exponent(cfg.p),
                                                 cfg.solver())));
  }
  return kOk;
}

int run_superadd(const RunConfig& cfg) {
  const Json j = input(cfg);
  auto part = [&j](const char* key) {
    if (!j.is_object() || !j.contains(key)) throw io::JsonError(std::string("$.") + key, "missing field");
    return io::functional_from_json(j[key], std::string("$.") + key);
  };
  const SuperadditivityReport r = superadditivity_check(part("x"), part("y"), Exponent(cfg.p), cfg.solver());
  emit(cfg, io::to_json(r));
  return r.passed ? kOk : kViolation;
}

int run_psubadd(const RunConfig& cfg) {
  const auto [x, y] = io::pair_from_json(input(cfg));
  const PSubadditivityReport r = psubadditivity_check(x, y, Exponent(cfg.p), cfg.solver());
  emit(cfg, io::to_json(r));
  return r.passed ? kOk : kViolation;
}

int run_directsum(const RunConfig& cfg) {
  emit(cfg, Json{{"value", direct_sum_norm(io::direct_sum_from_json(input(cfg)))}});
  return kOk;
}

MidpointQuery query(const RunConfig& cfg, NormKind kind) {
  const auto [x, y] = io::pair_from_json(input(cfg));
  MidpointQuery q;
  q.x = x;
  q.y = y;
  q.delta = cfg.delta;
  q.kind = kind;
  q.e = Exponent(cfg.p);
  q.validate();
  return q;
}

CertificateOptions certificate_options(const RunConfig& cfg) {
  CertificateOptions o;
  o.samples = cfg.samples;
  o.seed = cfg.seed;
  o.slack = cfg.slack;
  o.tail_width = cfg.tail_width;
  o.outer_split = cfg.split == "smallest" ? OuterSplit::smallest : OuterSplit::full_support;
  o.solver = cfg.solver();
  return o;
}

int run_midpoint(const RunConfig& cfg) {
  if (cfg.action == "check") {
    const NormKind kind = cfg.norm == "equivalent" ? NormKind::equivalent : NormKind::original;
    const MidpointQuery q = query(cfg, kind);
    if (cfg.point.empty()) throw CLI::ValidationError("--point", "a point file is required");
    const SeqVector z = io::vector_from_json(io::read_file(cfg.point));
    NormEngine engine(q.e, cfg.solver());
    Json j = io::to_json(midpoint_distances(q, z, &engine));
    j["norm"] = to_string(kind);
    emit(cfg, j);
    return kOk;
  }
  if (cfg.action == "inner" || cfg.action == "outer") {
    const bool inner = cfg.action == "inner";
    const MidpointQuery q = query(cfg, inner ? NormKind::equivalent : NormKind::original);
    const MidpointReport r = inner ? inner_ball_certificate(q, certificate_options(cfg))
                                   : outer_compact_certificate(q, certificate_options(cfg));
    Json j = io::to_json(r);
    j["certificate"] = cfg.action;
    emit(cfg, j);
    return r.passed() ? kOk : kViolation;
  }
  // probe
  ProbeMap m = cfg.map == "homothety" ? ProbeMap::homothety(Exponent(cfg.p), cfg.scale)
               : cfg.map == "formal"  ? ProbeMap::formal_identity(Exponent(cfg.p), Exponent(cfg.target_p))
                                      : ProbeMap::identity(Exponent(cfg.p));
  ProbeOptions o;
  o.pairs = cfg.pairs;
  o.samples = cfg.samples;
  o.window = cfg.window;
  o.seed = cfg.seed;
  emit(cfg, io::to_json(midpoint_image_probe(m, cfg.t, cfg.eps, cfg.delta, o)));
  return kOk;
}

GraphMap graph_map(const RunConfig& cfg) {
  if (!cfg.input.empty()) return io::graph_map_from_json(io::read_file(cfg.input));
  const std::vector<std::size_t> ks = k_list(cfg.k);
  if (ks.size() != 1) throw CLI::ValidationError("--k", "expected a single k for this subcommand");
  const Exponent e(cfg.p);
  if (!cfg.theta) return GraphMap::tabulate(ks[0], parse_index_range(cfg.ground_set), e, phi_unscaled);
  const double theta = *cfg.theta;
  const double r = cfg.r != 0.0 ? cfg.r : cfg.p;
  return GraphMap::tabulate(ks[0], parse_index_range(cfg.ground_set), e,
                            [theta, r](const GraphVertex& v) { return phi(v, SeqVector(), theta, r); });
}

int run_graph(const RunConfig& cfg) {
  if (cfg.action == "growth") {
    if (cfg.q == 0.0) throw CLI::ValidationError("--q", "required for growth");
    emit(cfg, io::growth_csv(distortion_growth_demo(cfg.p, cfg.q, k_list(cfg.k))));
    return kOk;
  }
  if (cfg.action == "sumdemo") {
    if (cfg.q == 0.0 || cfg.r == 0.0) throw CLI::ValidationError("--q/--r", "required for sumdemo");
    if (!cfg.theta) throw CLI::ValidationError("--theta", "required for sumdemo");
    emit(cfg, io::sumdemo_csv(direct_sum_obstruction_demo(cfg.p, cfg.q, cfg.r, k_list(cfg.k),
                                                          *cfg.theta, cfg.c, cfg.eps)));
    return kOk;
  }
  const GraphMap gm = graph_map(cfg);
  const PairOptions opts = cfg.pair_options();
  if (cfg.action == "lip") {
    emit(cfg, io::to_json(lipschitz_constant(gm, opts)));
  } else if (cfg.action == "mindisp") {
    const Exponent e = cfg.input.empty() ? Exponent(cfg.p) : gm.exponents().front();
    emit(cfg, io::to_json(interlaced_min_displacement(gm, e, opts)));
  } else {
    emit(cfg, io::to_json(ramsey_extract(gm, cfg.target, opts, cfg.greedy)));
  }
  return kOk;
}

int run_reproduce(const RunConfig& cfg) {
  AcceptanceOptions o;
  o.seed = cfg.seed;
  o.dual_tolerance = cfg.dual_tolerance;
  const AcceptanceSummary s = run_acceptance(o);
  emit(cfg, s.text());
  return s.passed() ? kOk : kViolation;
}

int dispatch(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "norm") return run_norm(cfg);
  if (c == "subgradient") return run_subgradient(cfg);
  if (c == "blocks") return run_blocks(cfg);
  if (c == "dualnorm") return run_dualnorm(cfg);
  if (c == "eqnorm") return run_eqnorm(cfg);
  if (c == "superadd") return run_superadd(cfg);
  if (c == "psubadd") return run_psubadd(cfg);
  if (c == "directsum") return run_directsum(cfg);
  if (c == "midpoint") return run_midpoint(cfg);
  if (c == "graph") return run_graph(cfg);
  return run_reproduce(cfg);
}

void add_solver(CLI::App* a, RunConfig& cfg) {
  a->add_option("--tol", cfg.tolerance, "relative certificate gap");
  a->add_option("--starts", cfg.starts, "ascent restarts");
  a->add_option("--max-iterations", cfg.max_iterations, "iterations per ascent start");
  a->add_option("--max-cuts", cfg.max_cuts, "cutting-plane budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, midpoints and graph distortion experiments on James spaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* a, bool with_input = true) {
    a->add_option("--p", cfg.p, "exponent p > 1");
    a->add_option("--seed", cfg.seed, "random seed");
    a->add_option("--out", cfg.out, "output file (default stdout)");
    if (with_input) a->add_option("--input", cfg.input, "input JSON file");
  };

  auto* norm = app.add_subcommand("norm", "exact ||x||_{J_p} with witness");
  common(norm);
  norm->add_flag("--oracle", cfg.oracle, "cross-check against exhaustive enumeration");

  common(app.add_subcommand("subgradient", "norming functional of a vector"));
  common(app.add_subcommand("blocks", "ratio check for consecutive blocks (array of vectors)"));

  auto* dual = app.add_subcommand("dualnorm", "certified interval for ||f||_{J_p*}");
  common(dual);
  add_solver(dual, cfg);

  auto* eq = app.add_subcommand("eqnorm", "equivalent dual or primal norm");
  common(eq);
  add_solver(eq, cfg);
  eq->add_option("--side", cfg.side)->check(CLI::IsMember({"dual", "primal"}));

  auto* sup = app.add_subcommand("superadd", "q-superadditivity of |.| on a functional pair");
  common(sup);
  add_solver(sup, cfg);
  auto* sub = app.add_subcommand("psubadd", "p-subadditivity of |.| on a vector pair");
  common(sub);
  add_solver(sub, cfg);

  common(app.add_subcommand("directsum", "norm of a direct-sum vector"));

  auto* mid = app.add_subcommand("midpoint", "approximate midpoint sets");
  common(mid);
  add_solver(mid, cfg);
  mid->add_option("action", cfg.action)->required()->check(CLI::IsMember({"check", "inner", "outer", "probe"}));
  mid->add_option("--delta", cfg.delta);
  mid->add_option("--samples", cfg.samples);
  mid->add_option("--point", cfg.point, "point z for check");
  mid->add_option("--norm", cfg.norm)->check(CLI::IsMember({"original", "equivalent"}));
  mid->add_option("--slack", cfg.slack, "λ or ν (default δ/8)");
  mid->add_option("--tail-width", cfg.tail_width);
  mid->add_option("--split", cfg.split)->check(CLI::IsMember({"full", "smallest"}));
  mid->add_option("--map", cfg.map)->check(CLI::IsMember({"identity", "homothety", "formal"}));
  mid->add_option("--target-p", cfg.target_p, "target exponent of the formal identity");
  mid->add_option("--scale", cfg.scale, "homothety factor");
  mid->add_option("--t", cfg.t, "distance threshold");
  mid->add_option("--eps", cfg.eps);
  mid->add_option("--pairs", cfg.pairs);
  mid->add_option("--window", cfg.window);

  auto* graph = app.add_subcommand("graph", "graph maps and distortion demos");
  common(graph);
  add_solver(graph, cfg);
  graph->add_option("action", cfg.action)
      ->required()
      ->check(CLI::IsMember({"lip", "mindisp", "ramsey", "growth", "sumdemo"}));
  graph->add_option("--k", cfg.k, "k, or a range a..b for growth and sumdemo");
  graph->add_option("--ground-set", cfg.ground_set, "a..b or a comma list");
  graph->add_option("--q", cfg.q);
  graph->add_option("--r", cfg.r);
  graph->add_option("--theta", cfg.theta);
  graph->add_option("--c", cfg.c, "component Lipschitz constant");
  graph->add_option("--eps", cfg.eps, "threshold (sumdemo; <= 0 selects γ/4)")->default_val(0.0);
  graph->add_option("--norm", cfg.norm)->check(CLI::IsMember({"original", "equivalent"}));
  graph->add_option("--target", cfg.target, "ramsey subset size");
  graph->add_flag("--greedy", cfg.greedy, "force greedy ramsey search");
  graph->add_option("--guard", cfg.guard, "max vertex pairs");
  graph->add_flag("--override-guard", cfg.override_guard);

  auto* rep = app.add_subcommand("reproduce", "run the acceptance suite");
  rep->alias("reproduce_all");
  rep->add_option("--seed", cfg.seed);
  rep->add_option("--out", cfg.out);
  rep->add_option("--dual-tol", cfg.dual_tolerance, "override the dual-norm gap demanded");

  try {
    app.parse(argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return dispatch(cfg);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.get_name() << " " << e.what() << "\n";
    return kUsage;
  } catch (const io::JsonError& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (lower " << e.lower() << ", upper " << e.upper() << ")\n";
    return kViolation;
  } catch (const SamplerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    // preconditions, guards, window caps
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
