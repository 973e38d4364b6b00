#include "jamesgeo/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <stdexcept>

#include "jamesgeo/core.hpp"
#include "jamesgeo/dual_norms.hpp"
#include "jamesgeo/kr_graphs.hpp"
#include "jamesgeo/midpoint.hpp"
#include "jamesgeo/pvar_norm.hpp"

namespace jamesgeo {

namespace {

constexpr double kExponents[] = {1.5, 2.0, 3.0};

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : rng_(seed * 0x9E3779B97F4A7C15ULL + stream) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double prob) { return std::bernoulli_distribution(prob)(rng_); }

  std::vector<std::pair<Index, double>> entries(Index lo, std::size_t width, double fill = 0.6) {
    std::vector<std::pair<Index, double>> e;
    for (std::size_t i = 0; i < width; ++i) {
      if (coin(fill)) e.emplace_back(lo + i, real(-2.0, 2.0));
    }
    if (e.empty()) e.emplace_back(lo + below(width), real(0.5, 2.0));
    return e;
  }
  SeqVector vector(Index lo, std::size_t width) { return SeqVector(entries(lo, width)); }
  DualFunctional functional(Index lo, std::size_t width) { return DualFunctional(entries(lo, width)); }

 private:
  std::mt19937_64 rng_;
};

CriterionResult result(int index, const char* name, bool passed, std::string detail) {
  return {index, name, passed, std::move(detail)};
}

CriterionResult oracle_equivalence(const AcceptanceOptions& o) {
  Rng g(o.seed, 1);
  double worst = 0.0;
  std::size_t n = 0;
  for (double p : kExponents) {
    const Exponent e(p);
    for (int t = 0; t < 200; ++t) {
      const Index lo = g.below(4);
      SeqVector x = g.vector(lo, 1 + g.below(10 - lo));  // window max supp + 2 <= 12
      worst = std::max(worst, std::fabs(james_norm(x, e).value - james_norm_bruteforce(x, e).value));
      ++n;
    }
  }
  return result(1, "oracle equivalence", worst <= 1e-9,
                format("%zu vectors, max |dp - brute| = %.3e (tol 1e-9)", n, worst));
}

CriterionResult pinned_norms(const AcceptanceOptions&) {
  double worst = 0.0;
  for (double p : kExponents) {
    const Exponent e(p);
    for (Index n : {0, 1, 3, 7}) {
      const double expect = n == 0 ? 1.0 : std::pow(2.0, 1.0 / p);
      const SeqVector x = SeqVector::unit(n);
      worst = std::max(worst, std::fabs(james_norm(x, e).value - expect));
      worst = std::max(worst, std::fabs(james_norm_bruteforce(x, e).value - expect));
    }
  }
  return result(2, "pinned norm values", worst <= 1e-10,
                format("max error %.3e over both engines (tol 1e-10)", worst));
}

CriterionResult block_bound(const AcceptanceOptions& o) {
  Rng g(o.seed, 3);
  bool ok = true;
  std::string detail;
  for (double p : kExponents) {
    const Exponent e(p);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      std::vector<SeqVector> blocks;
      const std::size_t count = 2 + g.below(3);
      Index at = g.below(3);
      for (std::size_t b = 0; b < count; ++b) {
        const std::size_t width = 1 + g.below(3);
        std::vector<std::pair<Index, double>> ent;
        for (std::size_t i = 0; i < width; ++i) ent.emplace_back(at + i, g.real(-2.0, 2.0));
        blocks.emplace_back(std::move(ent));
        at += width;
      }
      const BlockRatioReport r = consecutive_blocks_check(blocks, e);
      worst = std::max(worst, r.ratio);
      ok = ok && r.within_bound;
    }
    detail += format("%sp=%g max ratio %.6f (bound %.6f)", detail.empty() ? "" : "; ", p, worst,
                     std::pow(2.0, p) + 1.0);
  }
  return result(3, "consecutive block bound", ok, detail);
}

SolverOptions dual_solver(const AcceptanceOptions& o) {
  SolverOptions s;
  if (o.dual_tolerance > 0.0) s.tolerance = o.dual_tolerance;
  return s;
}

CriterionResult dual_pins(const AcceptanceOptions& o) {
  const double tol = o.dual_tolerance > 0.0 ? o.dual_tolerance : 1e-2;
  bool ok = true;
  double worst_gap = 0.0, worst_lower = 1.0;
  for (double p : kExponents) {
    NormEngine engine{Exponent(p), dual_solver(o)};
    for (Index n = 0; n <= 10; ++n) {
      const DualNormResult r = engine.dual_norm(DualFunctional::unit(n));
      worst_lower = std::min(worst_lower, r.lower);
      ok = ok && r.lower >= 1.0 - 1e-6;
      if (n <= 3) {
        worst_gap = std::max(worst_gap, r.gap());
        ok = ok && r.lower <= 1.0 + 1e-12 && r.upper >= 1.0 - 1e-12 &&
             r.gap() <= tol;
      }
    }
  }
  return result(4, "dual norm pins", ok,
                format("max gap %.3e for n<=3 (tol %.1e), min lower %.9f for n<=10", worst_gap, tol,
                       worst_lower));
}

CriterionResult sandwich(const AcceptanceOptions& o) {
  Rng g(o.seed, 5);
  bool ok = true;
  double worst = 0.0;  // largest eq / (K dual.upper)
  for (double p : kExponents) {
    const Exponent e(p);
    const double k = sandwich_constant(e);
    NormEngine engine(e, dual_solver(o));
    for (int t = 0; t < 200; ++t) {
      const DualFunctional f = g.functional(g.below(3), 1 + g.below(5));
      const DualNormResult d = engine.dual_norm(f);
      const PartitionResult eq = engine.equivalent_dual_norm(f);
      ok = ok && d.lower <= eq.value + 1e-9 && eq.value <= k * d.upper + 1e-6;
      worst = std::max(worst, eq.value / (k * d.upper));
    }
  }
  return result(5, "sandwich", ok, format("600 functionals, max |f| / (K ||f||) = %.6f", worst));
}

CriterionResult superadditivity(const AcceptanceOptions& o) {
  Rng g(o.seed, 6);
  bool ok = true;
  double worst = INFINITY;  // min lhs - rhs
  for (int t = 0; t < 200; ++t) {
    const Exponent e(kExponents[t % 3]);
    const DualFunctional f = g.functional(g.below(2), 1 + g.below(4));
    const DualFunctional h = g.functional(f.max_support() + 1 + g.below(2), 1 + g.below(4));
    const SuperadditivityReport r = superadditivity_check(f, h, e);
    ok = ok && r.passed;
    worst = std::min(worst, r.lhs - r.rhs);
  }
  return result(6, "superadditivity", ok,
                format("200 pairs, min |f+g|^q - |f|^q - |g|^q = %.3e (tol -1e-6)", worst));
}

CriterionResult psubadditivity(const AcceptanceOptions& o) {
  Rng g(o.seed, 7);
  bool ok = true;
  double worst_tau = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Exponent e(kExponents[t % 3]);
    const SeqVector x = g.vector(g.below(2), 1 + g.below(3));
    const SeqVector y = g.vector(x.max_support() + 1 + g.below(2), 1 + g.below(3));
    const PSubadditivityReport r = psubadditivity_check(x, y, e);
    bool bounds = true;
    for (const PrimalNormResult* b : {&r.first, &r.second, &r.sum}) {
      bounds = bounds && std::isfinite(b->lower) && std::isfinite(b->upper) && b->lower <= b->upper;
    }
    ok = ok && r.passed && bounds;
    worst_tau = std::max(worst_tau, r.tau_cert);
  }
  return result(7, "p-subadditivity", ok,
                format("100 pairs, six bounds each, max certificate slack %.3e", worst_tau));
}

CriterionResult midpoint(const AcceptanceOptions& o) {
  struct Config {
    double p, delta;
  };
  std::vector<Config> configs;
  for (double p : kExponents) {
    for (double delta : {0.1, 0.5, 0.9}) configs.push_back({p, delta});
  }
  struct Tally {
    std::size_t inner = 0, outer = 0, samples = 0;
  };
  auto run = [&](const Config& c) {
    Tally t;
    NormEngine engine{Exponent(c.p)};
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng g(o.seed + s, 8);
      MidpointQuery q;
      q.e = Exponent(c.p);
      q.delta = c.delta;
      q.x = g.vector(g.below(2), 1 + g.below(3));
      do {
        q.y = g.coin(0.5) ? SeqVector() : g.vector(g.below(2), 1 + g.below(3));
      } while (q.y == q.x);
      CertificateOptions co;
      co.samples = 100;
      co.seed = o.seed + s;
      q.kind = NormKind::equivalent;
      t.inner += inner_ball_certificate(q, co, &engine).violations.size();
      q.kind = NormKind::original;
      t.outer += outer_compact_certificate(q, co).violations.size();
      t.samples += 200;
    }
    return t;
  };
  std::vector<std::future<Tally>> jobs;
  for (const Config& c : configs) jobs.push_back(std::async(std::launch::async, run, c));
  std::size_t inner = 0, outer = 0, samples = 0;
  for (auto& j : jobs) {
    const Tally t = j.get();
    inner += t.inner;
    outer += t.outer;
    samples += t.samples;
  }
  return result(8, "midpoint certificates", inner == 0 && outer == 0,
                format("9 configs x 100 seeds, %zu samples, violations inner %zu outer %zu", samples,
                       inner, outer));
}

CriterionResult graph_pins(const AcceptanceOptions&) {
  bool ok = true;
  double worst_lip = 0.0, worst_err = 0.0;
  for (double p : kExponents) {
    const Exponent e(p);
    for (auto [k, hi] : {std::pair<std::size_t, Index>{2, 8}, {3, 9}}) {
      std::vector<Index> m;
      for (Index i = 1; i <= hi; ++i) m.push_back(i);
      const GraphMap gm = GraphMap::tabulate(k, m, e, phi_unscaled);
      const LipschitzResult lip = lipschitz_constant(gm);
      ok = ok && lip.bound_side == "exact" && lip.value <= 4.0;
      worst_lip = std::max(worst_lip, lip.value);
    }
  }
  for (double q : {1.5, 2.0, 3.0, 4.0}) {
    const Exponent e(q);
    for (std::size_t k = 1; k <= 8; ++k) {
      const auto [a, b] = canonical_interlaced_pair(k);
      const SeqVector d = phi_unscaled(a) - phi_unscaled(b);
      const double expect = std::pow(2.0 + std::pow(2.0, q) * (2.0 * k - 1.0), 1.0 / q);
      double err = std::fabs(james_norm(d, e).value - expect) / expect;
      if (k <= 4) err = std::max(err, std::fabs(james_norm_bruteforce(d, e).value - expect) / expect);
      worst_err = std::max(worst_err, err);
      ok = ok && err <= 1e-12 && expect > 2.0 * std::pow(2.0 * k - 1.0, 1.0 / q);
    }
  }
  return result(9, "graph pins", ok,
                format("max Lip %.6f (bound 4), interlaced closed form rel error %.3e", worst_lip,
                       worst_err));
}

CriterionResult growth(const AcceptanceOptions&) {
  bool ok = true;
  std::string detail;
  const std::vector<std::size_t> ks{2, 3, 4, 5, 6, 7, 8};
  for (auto [p, q] : {std::pair{2.0, 4.0}, {1.5, 3.0}}) {
    const GrowthTable t = distortion_growth_demo(p, q, ks);
    ok = ok && std::fabs(t.slope - t.expected) <= 0.05;
    detail += format("%s(p,q)=(%g,%g) slope %.4f expected %.4f", detail.empty() ? "" : "; ", p, q,
                     t.slope, t.expected);
  }
  return result(10, "distortion growth", ok, detail);
}

CriterionResult sum_demo(const AcceptanceOptions&) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k <= 64; ++k) ks.push_back(k);
  const SumDemoTable t = direct_sum_obstruction_demo(2.0, 4.0, 3.0, ks, 8.0);
  bool decreasing = true;
  double min_sep = INFINITY;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) decreasing = decreasing && t.rows[i].component_bound < t.rows[i - 1].component_bound;
    min_sep = std::min(min_sep, t.rows[i].separation);
  }
  const bool ok = decreasing && min_sep > 0.0 && min_sep >= 0.5 * t.gamma;
  return result(11, "direct sum demo", ok,
                format("component bound %.6f -> %.6f %s, min separation %.6f (gamma %.6f), "
                       "crossing k %.4g",
                       t.rows.front().component_bound, t.rows.back().component_bound,
                       decreasing ? "decreasing" : "not decreasing", min_sep, t.gamma,
                       t.crossing_k));
}

CriterionResult guarded(int index, const char* name, CriterionResult (*f)(const AcceptanceOptions&),
                        const AcceptanceOptions& o) {
  try {
    return f(o);
  } catch (const std::exception& e) {
    return result(index, name, false, std::string("error: ") + e.what());
  }
}

}  // namespace

std::string CriterionResult::line() const {
  return format("[%s] %2d %s: ", passed ? "PASS" : "FAIL", index, name.c_str()) + detail;
}

bool AcceptanceSummary::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

std::string AcceptanceSummary::text() const {
  std::string out;
  for (const auto& c : criteria) out += c.line() + "\n";
  std::size_t n = std::count_if(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
  out += format("%zu/%zu criteria passed\n", n, criteria.size());
  return out;
}

CriterionResult run_criterion(int index, const AcceptanceOptions& o) {
  switch (index) {
    case 1: return guarded(1, "oracle equivalence", oracle_equivalence, o);
    case 2: return guarded(2, "pinned norm values", pinned_norms, o);
    case 3: return guarded(3, "consecutive block bound", block_bound, o);
    case 4: return guarded(4, "dual norm pins", dual_pins, o);
    case 5: return guarded(5, "sandwich", sandwich, o);
    case 6: return guarded(6, "superadditivity", superadditivity, o);
    case 7: return guarded(7, "p-subadditivity", psubadditivity, o);
    case 8: return guarded(8, "midpoint certificates", midpoint, o);
    case 9: return guarded(9, "graph pins", graph_pins, o);
    case 10: return guarded(10, "distortion growth", growth, o);
    case 11: return guarded(11, "direct sum demo", sum_demo, o);
    default: throw std::out_of_range("criterion index must be 1..11");
  }
}

AcceptanceSummary run_acceptance(const AcceptanceOptions& o) {
  auto body = [&o] {
    std::vector<std::future<CriterionResult>> jobs;
    for (int i = 1; i < kCriterionCount; ++i) {
      jobs.push_back(std::async(std::launch::async, [i, &o] { return run_criterion(i, o); }));
    }
    AcceptanceSummary s;
    for (auto& j : jobs) s.criteria.push_back(j.get());
    return s;
  };
  AcceptanceSummary s = body();
  if (o.rerun_for_determinism) {
    const bool same = body().text() == s.text();
    s.criteria.push_back(result(12, "determinism", same,
                                same ? "rerun with the same seed is byte-identical"
                                     : "rerun with the same seed differs"));
  } else {
    s.criteria.push_back(result(12, "determinism", false, "not run"));
  }
  return s;
}

}  // namespace jamesgeo
