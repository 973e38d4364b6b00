#include <cmath>

#include "doctest.h"
#include "jamesgeo/dual_norms.hpp"
#include "jamesgeo/pvar_norm.hpp"
#include "oracles.hpp"

using namespace jamesgeo;

namespace {
const double kExponents[] = {1.5, 2.0, 3.0};

double l1(const DualFunctional& f) {
  double s = 0.0;
  for (const auto& [i, v] : f.entries()) s += std::fabs(v);
  return s;
}

double lp(const SeqVector& x, double p) {
  double s = 0.0;
  for (const auto& [i, v] : x.entries()) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

// Best <f, x> / ||x|| over random directions: a lower bound on the dual norm
// that shares no code with the solver.
double sampled_dual_lower(const DualFunctional& f, double p, oracle::Gen& g, int samples) {
  const Index m = f.max_support();
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    SeqVector x = g.vector(0, m + 1, 0.8);
    best = std::max(best, pairing(f, x) / oracle::norm(x, p));
  }
  return best;
}
}  // namespace

TEST_CASE("dual norm of the zero functional") {
  auto r = dual_norm(DualFunctional(), Exponent(2));
  CHECK(r.lower == 0.0);
  CHECK(r.upper == 0.0);
}

TEST_CASE("dual norm of coordinate functionals") {
  for (double p : kExponents) {
    Exponent e(p);
    for (Index n = 0; n <= 10; ++n) {
      auto r = dual_norm(DualFunctional::unit(n), e);
      CHECK(r.lower >= 1.0 - 1e-6);
      CHECK(r.upper <= 1.0 + 1e-9);
      CHECK(r.lower <= r.upper);
      CHECK(pairing(DualFunctional::unit(n), r.witness) == doctest::Approx(r.lower).epsilon(1e-10));
      CHECK(james_norm(r.witness, e).value <= 1.0 + 1e-9);
    }
    // the filled witness e_0 + ... + e_n has norm 1 and pairing 1
    SeqVector w;
    for (Index i = 0; i <= 5; ++i) w = w + SeqVector::unit(i);
    CHECK(oracle::norm(w, p) == doctest::Approx(1.0));
  }
}

TEST_CASE("dual norm homogeneity") {
  Exponent e(2);
  auto one = dual_norm(DualFunctional::unit(1), e);
  auto two = dual_norm(2.0 * DualFunctional::unit(1), e);
  CHECK(two.lower == doctest::Approx(2.0 * one.lower).epsilon(1e-12));
  CHECK(two.upper == doctest::Approx(2.0 * one.upper).epsilon(1e-3));
}

TEST_CASE("dual norm of nonnegative functionals equals the coefficient sum") {
  oracle::Gen g(31);
  for (double p : kExponents) {
    for (int t = 0; t < 30; ++t) {
      std::vector<DualFunctional::Entry> e;
      for (Index i = 0; i < 7; ++i) {
        if (g.coin()) e.emplace_back(i, g.real(0.1, 2.0));
      }
      e.emplace_back(7, 1.0);
      DualFunctional f(std::move(e));
      auto r = dual_norm(f, Exponent(p));
      CHECK(r.lower <= l1(f) + 1e-12);
      CHECK(r.upper >= l1(f) - 1e-9);
      CHECK(r.lower >= l1(f) * (1.0 - 1e-3));
    }
  }
}

TEST_CASE("dual norm certificates on random functionals") {
  oracle::Gen g(32);
  for (double p : kExponents) {
    Exponent e(p);
    for (int t = 0; t < 40; ++t) {
      DualFunctional f = g.functional(g.below(3), 1 + g.below(7));
      auto r = dual_norm(f, e);
      CHECK(r.lower <= r.upper);
      CHECK(r.gap() <= 1e-3);
      CHECK(r.upper <= l1(f) + 1e-9);
      CHECK(james_norm(r.witness, e).value <= 1.0 + 1e-9);
      CHECK(pairing(f, r.witness) == doctest::Approx(r.lower).epsilon(1e-10));
      CHECK(sampled_dual_lower(f, p, g, 200) <= r.upper + 1e-9);
    }
  }
}

TEST_CASE("tight tolerance is reported as non-convergence") {
  SolverOptions o;
  o.tolerance = 1e-15;
  o.max_cuts = 5;
  o.starts = 1;
  o.max_iterations = 50;
  DualFunctional f({{0, 1.0}, {1, -0.7}, {2, 0.4}, {3, -1.3}, {5, 0.9}});
  CHECK_THROWS_AS(dual_norm(f, Exponent(1.5), o), NonConvergenceError);
}

TEST_CASE("equivalent dual norm") {
  Exponent two(2);
  auto single = equivalent_dual_norm(DualFunctional::unit(4, -3.0), two);
  CHECK(single.value == doctest::Approx(dual_norm(DualFunctional::unit(4, -3.0), two).lower));
  CHECK(single.cuts.empty());

  auto split = equivalent_dual_norm(DualFunctional({{0, 1.0}, {2, 1.0}}), two);
  CHECK(split.value >= std::sqrt(2.0) - 1e-9);

  CHECK(equivalent_dual_norm(DualFunctional(), two).value == 0.0);

  oracle::Gen g(33);
  for (double p : kExponents) {
    Exponent e(p);
    NormEngine engine(e);
    const double k = sandwich_constant(e);
    CHECK(k == doctest::Approx(std::pow(std::pow(2.0, e.q()) * std::pow(std::pow(2.0, p) + 1.0,
                                                                         e.q() - 1.0),
                                        1.0 / e.q())));
    for (int t = 0; t < 40; ++t) {
      DualFunctional f = g.functional(g.below(3), 1 + g.below(7));
      auto pr = engine.equivalent_dual_norm(f);
      auto dn = engine.dual_norm(f);
      CHECK(dn.lower <= pr.value + 1e-12);
      CHECK(pr.value <= k * dn.upper + 1e-6);
      CHECK(pr.value <= pr.upper);
      // recombining along the cuts reproduces the value
      auto blocks = block_split(f, std::span<const Index>(pr.cuts));
      REQUIRE(blocks.size() == pr.block_values.size());
      double acc = 0.0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        CHECK(pr.block_values[b] <= engine.dual_norm(blocks[b]).upper + 1e-9);
        acc += std::pow(pr.block_values[b], e.q());
      }
      CHECK(std::pow(acc, 1.0 / e.q()) == doctest::Approx(pr.value).epsilon(1e-12));
      // homogeneity
      CHECK(engine.equivalent_dual_norm(2.5 * f).value ==
            doctest::Approx(2.5 * pr.value).epsilon(1e-3));
    }
  }
}

TEST_CASE("equivalent dual norm grows under a preceding disjoint block") {
  oracle::Gen g(34);
  for (double p : kExponents) {
    NormEngine engine{Exponent(p)};
    for (int t = 0; t < 30; ++t) {
      DualFunctional f = g.functional(0, 1 + g.below(3));
      DualFunctional h = g.functional(f.max_support() + 1 + g.below(2), 1 + g.below(3));
      CHECK(engine.equivalent_dual_norm(f + h).value >=
            engine.equivalent_dual_norm(h).value - 1e-12);
    }
  }
}

TEST_CASE("superadditivity") {
  auto r = superadditivity_check(DualFunctional::unit(0), DualFunctional::unit(2), Exponent(2));
  CHECK(r.passed);
  CHECK(r.lhs >= 2.0 - 1e-6);
  CHECK_THROWS_AS(
      superadditivity_check(DualFunctional::unit(2), DualFunctional::unit(2), Exponent(2)),
      PreconditionError);

  oracle::Gen g(35);
  for (double p : kExponents) {
    for (int t = 0; t < 30; ++t) {
      DualFunctional f = g.functional(g.below(2), 1 + g.below(4));
      DualFunctional h = g.functional(f.max_support() + 1 + g.below(2), 1 + g.below(4));
      CHECK(superadditivity_check(f, h, Exponent(p)).passed);
    }
  }
}

TEST_CASE("block partition bound and quotient norm") {
  for (double p : kExponents) {
    Exponent e(p);
    CHECK(quotient_norm(SeqVector::unit(5), e) == doctest::Approx(1.0));
    CHECK(block_partition_bound(SeqVector::unit(5, 2.0), e) == doctest::Approx(2.0));
    SeqVector x({{1, 1.0}, {2, -1.0}, {4, 0.5}});
    CHECK(block_partition_bound(x, e) <= lp(x, p) + 1e-12);
    CHECK(block_partition_bound(x, e) <= quotient_norm(x, e) + 1e-12);
    CHECK(quotient_norm(x, e) <= james_norm(x, e).value + 1e-12);
  }
}

TEST_CASE("equivalent primal norm") {
  Exponent two(2);
  auto z = equivalent_primal_norm(SeqVector(), two);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);

  auto e0 = equivalent_primal_norm(SeqVector::unit(0), two);
  CHECK(e0.lower >= 1.0 - 1e-9);
  CHECK(e0.upper <= 1.0 + 1e-9);

  oracle::Gen g(36);
  for (double p : kExponents) {
    Exponent e(p);
    NormEngine engine(e);
    const double k = sandwich_constant(e);
    for (int t = 0; t < 20; ++t) {
      SeqVector x = g.vector(g.below(3), 1 + g.below(6));
      auto r = engine.equivalent_primal_norm(x);
      CHECK(r.lower <= r.upper);
      CHECK(r.gap() <= 1e-3);
      CHECK(r.upper <= lp(x, p) + 1e-9);
      CHECK(r.upper <= james_norm(x, e).value + 1e-9);
      CHECK(r.upper >= james_norm(x, e).value / k - 1e-9);
      CHECK(pairing(r.witness, x) == doctest::Approx(r.lower).epsilon(1e-10));
      CHECK(engine.equivalent_dual_norm(r.witness).value <= 1.0 + 1e-9);
      // the decomposition sums back to x
      SeqVector sum;
      double cert = 0.0;
      for (const auto& atom : r.decomposition) {
        sum = sum + atom.weight * atom.vector;
        cert += atom.weight * atom.bound;
        CHECK(block_partition_bound(atom.vector, e) <= atom.bound + 1e-9);
      }
      const SeqVector diff = sum - x;
      for (const auto& [i, v] : diff.entries()) CHECK(std::fabs(v) <= 1e-9);
      CHECK(cert == doctest::Approx(r.upper).epsilon(1e-9));

      auto scaled = engine.equivalent_primal_norm(3.0 * x);
      CHECK(scaled.lower <= 3.0 * r.upper + 1e-9);
      CHECK(scaled.upper >= 3.0 * r.lower - 1e-9);
    }
  }
}

TEST_CASE("successive sum upper bound") {
  Exponent e(2);
  NormEngine engine(e);
  SeqVector v({{0, 1.0}, {2, -0.5}});
  auto cert = engine.equivalent_primal_norm(v);
  SeqVector z({{4, 0.3}, {6, 0.2}});
  const double ub = successive_sum_upper(cert, z, e);
  CHECK(ub >= engine.equivalent_primal_norm(v + z).lower - 1e-12);
  CHECK(ub >= engine.equivalent_primal_norm(v - z).lower - 1e-12);
  CHECK_THROWS_AS(successive_sum_upper(cert, SeqVector::unit(1), e), PreconditionError);
}

TEST_CASE("p-subadditivity") {
  Exponent two(2);
  auto r = psubadditivity_check(SeqVector::unit(0), SeqVector::unit(2), two);
  CHECK(r.passed);
  CHECK(r.first.lower <= r.first.upper);
  CHECK(r.sum.lower <= r.sum.upper);
  auto vacuous = psubadditivity_check(SeqVector({{1, 2.0}, {3, -1.0}}), SeqVector(), two);
  CHECK(vacuous.passed);
  CHECK_THROWS_AS(psubadditivity_check(SeqVector::unit(3), SeqVector::unit(1), two),
                  PreconditionError);

  oracle::Gen g(37);
  for (double p : kExponents) {
    for (int t = 0; t < 10; ++t) {
      SeqVector x = g.vector(g.below(2), 1 + g.below(3));
      SeqVector y = g.vector(x.max_support() + 1 + g.below(2), 1 + g.below(3));
      CHECK(psubadditivity_check(x, y, Exponent(p)).passed);
    }
  }
}

TEST_CASE("direct sum norm") {
  DirectSumVector zero({{Exponent(2), SeqVector()}, {Exponent(4), SeqVector()}});
  CHECK(direct_sum_norm(zero) == 0.0);
  DirectSumVector v({{Exponent(2), SeqVector::unit(3)}, {Exponent(4), SeqVector()}});
  CHECK(direct_sum_norm(v) == doctest::Approx(oracle::norm(SeqVector::unit(3), 2.0)));
  DirectSumVector w({{Exponent(4), SeqVector()}, {Exponent(2), SeqVector::unit(3)}});
  CHECK(direct_sum_norm(w) == direct_sum_norm(v));
}
