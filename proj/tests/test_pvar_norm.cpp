#include <cmath>

#include "doctest.h"
#include "jamesgeo/pvar_norm.hpp"
#include "oracles.hpp"

using namespace jamesgeo;

namespace {
const double kExponents[] = {1.5, 2.0, 3.0};

double recompute(const SeqVector& x, const NormResult& r, double p) {
  return std::pow(path_power_sum(x, r.witness, Exponent(p)), 1.0 / p);
}
}  // namespace

TEST_CASE("pinned norms and witnesses") {
  Exponent two(2.0);
  auto z = james_norm(SeqVector(), two);
  CHECK(z.value == 0.0);
  CHECK(z.witness.empty());

  auto a = james_norm(SeqVector::unit(0), two);
  CHECK(a.value == doctest::Approx(oracle::norm(SeqVector::unit(0), 2.0)).epsilon(1e-12));
  CHECK(a.witness == std::vector<Index>{0, 1});

  auto b = james_norm(SeqVector::unit(3), two);
  CHECK(b.value == doctest::Approx(oracle::norm(SeqVector::unit(3), 2.0)).epsilon(1e-12));
  CHECK(b.witness == std::vector<Index>{2, 3, 4});

  SeqVector alt({{1, 1.0}, {2, -1.0}, {3, 1.0}, {4, -1.0}});
  auto c = james_norm(alt, two);
  CHECK(c.value == doctest::Approx(oracle::norm(alt, 2.0)).epsilon(1e-12));
  CHECK(c.value == doctest::Approx(oracle::interlaced_norm(2.0, 2)).epsilon(1e-12));
  CHECK(c.value >= 2.0 * std::sqrt(3.0));
}

TEST_CASE("single spikes") {
  for (double p : kExponents) {
    Exponent e(p);
    CHECK(james_norm(SeqVector::unit(0), e).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(james_norm_bruteforce(SeqVector::unit(0), e).value == doctest::Approx(1.0).epsilon(1e-12));
    for (Index n : {1u, 3u, 7u}) {
      const double expect = oracle::norm(SeqVector::unit(n, -2.5), p);
      CHECK(james_norm(SeqVector::unit(n, -2.5), e).value == doctest::Approx(expect).epsilon(1e-12));
      CHECK(james_norm_bruteforce(SeqVector::unit(n, -2.5), e).value ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("gap zero raises the norm of two equal spikes") {
  SeqVector x({{1, 1.0}, {3, 1.0}});
  const auto r = james_norm(x, Exponent(2));
  CHECK(r.value == doctest::Approx(oracle::norm(x, 2.0)).epsilon(1e-12));
  CHECK(r.witness == std::vector<Index>{0, 1, 2, 3, 4});
  // the same vector seen only through indices 0, 1, 3, 4
  const double without_gap = std::sqrt(oracle::variation_pow({0.0, 1.0, 1.0, 0.0}, 2.0));
  CHECK(r.value > without_gap + 0.5);
}

TEST_CASE("dynamic program matches independent enumeration") {
  oracle::Gen g(21);
  for (double p : kExponents) {
    Exponent e(p);
    for (int t = 0; t < 200; ++t) {
      SeqVector x = g.vector(g.below(4), 1 + g.below(7));
      const auto r = james_norm(x, e);
      CHECK(std::fabs(r.value - oracle::norm(x, p)) <= 1e-9);
      CHECK(std::fabs(r.value - james_norm_bruteforce(x, e).value) <= 1e-9);
      CHECK(recompute(x, r, p) == doctest::Approx(r.value).epsilon(1e-12));
      CHECK(std::is_sorted(r.witness.begin(), r.witness.end()));
    }
  }
}

TEST_CASE("brute force window cap") {
  CHECK_THROWS_AS(james_norm_bruteforce(SeqVector::unit(15), Exponent(2)), WindowTooLargeError);
  CHECK_NOTHROW(james_norm_bruteforce(SeqVector::unit(14), Exponent(2)));
  CHECK_THROWS_WITH(james_norm_bruteforce(SeqVector::unit(5), Exponent(2), 4),
                    doctest::Contains("cap 4"));
}

TEST_CASE("norm axioms") {
  oracle::Gen g(22);
  for (double p : kExponents) {
    Exponent e(p);
    for (int t = 0; t < 200; ++t) {
      SeqVector x = g.vector(0, 10);
      SeqVector y = g.vector(0, 10);
      const double c = g.real(-5.0, 5.0);
      const double nx = james_norm(x, e).value;
      CHECK(james_norm(c * x, e).value == doctest::Approx(std::fabs(c) * nx).epsilon(1e-12));
      CHECK(james_norm(x + y, e).value <= nx + james_norm(y, e).value + 1e-9);
      CHECK(nx > 0.0);
    }
  }
}

TEST_CASE("inserting an intermediate value never increases the norm") {
  oracle::Gen g(23);
  for (double p : kExponents) {
    Exponent e(p);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> w(8);
      for (auto& v : w) v = g.coin(0.7) ? g.real(-2.0, 2.0) : 0.0;
      w[1] = g.real(0.1, 2.0);
      const std::size_t at = 1 + g.below(w.size() - 1);
      const double lo = std::min(w[at - 1], w[at]);
      const double hi = std::max(w[at - 1], w[at]);
      std::vector<double> longer(w);
      longer.insert(longer.begin() + static_cast<std::ptrdiff_t>(at), g.real(lo, hi));
      CHECK(james_norm_dense(longer, e).value <= james_norm_dense(w, e).value + 1e-12);
    }
  }
}

TEST_CASE("norm subgradient") {
  Exponent two(2);
  DualFunctional g = norm_subgradient(SeqVector::unit(3), two);
  CHECK(pairing(g, SeqVector::unit(3)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(norm_subgradient(SeqVector(), two), PreconditionError);

  oracle::Gen gen(24);
  for (double p : kExponents) {
    Exponent e(p);
    for (int t = 0; t < 100; ++t) {
      SeqVector x = gen.vector(0, 9);
      DualFunctional s = norm_subgradient(x, e);
      CHECK(pairing(s, x) == doctest::Approx(james_norm(x, e).value).epsilon(1e-10));
      const DualFunctional s2 = norm_subgradient(2.0 * x, e);
      REQUIRE(s2.nnz() == s.nnz());
      for (std::size_t k = 0; k < s.nnz(); ++k) {
        CHECK(s2.entries()[k].first == s.entries()[k].first);
        CHECK(s2.entries()[k].second == doctest::Approx(s.entries()[k].second).epsilon(1e-12));
      }
      for (int u = 0; u < 10; ++u) {
        SeqVector y = gen.vector(0, 11);
        CHECK(pairing(s, y) <= oracle::norm(y, p) + 1e-9);
      }
    }
  }
}

TEST_CASE("consecutive blocks inequality") {
  std::vector<SeqVector> single{SeqVector({{2, 1.0}, {4, -3.0}})};
  CHECK(consecutive_blocks_check(single, Exponent(2)).ratio == doctest::Approx(1.0));

  std::vector<SeqVector> two{SeqVector::unit(1), SeqVector::unit(3)};
  auto r = consecutive_blocks_check(two, Exponent(2));
  auto sum = SeqVector::unit(1) + SeqVector::unit(3);
  CHECK(r.norm_of_sum_pow == doctest::Approx(std::pow(oracle::norm(sum, 2.0), 2.0)));
  CHECK(r.sum_of_norm_pows ==
        doctest::Approx(2.0 * std::pow(oracle::norm(SeqVector::unit(1), 2.0), 2.0)));
  CHECK(r.ratio == doctest::Approx(r.norm_of_sum_pow / r.sum_of_norm_pows));
  CHECK(r.ratio == doctest::Approx(1.0));
  CHECK(r.within_bound);

  std::vector<SeqVector> bad{SeqVector::unit(3), SeqVector::unit(1)};
  CHECK_THROWS_AS(consecutive_blocks_check(bad, Exponent(2)), PreconditionError);

  oracle::Gen g(25);
  for (double p : kExponents) {
    for (int t = 0; t < 500; ++t) {
      std::vector<SeqVector> blocks;
      Index at = g.below(3);
      const std::size_t count = 1 + g.below(4);
      for (std::size_t b = 0; b < count; ++b) {
        SeqVector x = g.vector(at, 1 + g.below(3));
        at = x.max_support() + 1 + g.below(2);
        blocks.push_back(std::move(x));
      }
      auto rep = consecutive_blocks_check(blocks, Exponent(p));
      CHECK(rep.within_bound);
      CHECK(rep.ratio <= std::pow(2.0, p) + 1.0);
    }
  }
}
