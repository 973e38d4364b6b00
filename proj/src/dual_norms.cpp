#include "jamesgeo/dual_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cut_lp.hpp"
#include "jamesgeo/pvar_norm.hpp"

namespace jamesgeo {

namespace {

double pnorm(std::span<const double> v, double p) {
  double s = 0.0;
  for (double t : v) s += abs_pow(t, p);
  return std::pow(s, 1.0 / p);
}

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double t : v) s += std::fabs(t);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double relative_gap(double lower, double upper) {
  if (upper <= 0.0) return 0.0;
  return (upper - lower) / std::max(lower, 1e-12);
}

// Dual norm of a dense functional b on positions 0 .. n-1 (b[0] != 0 after
// shifting). Positions left of the support never help: filling them with
// the first value of x leaves the norm unchanged.
struct DenseDual {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> x;  // ||x|| <= 1 (dense norm), <b, x> = lower
  int iterations = 0;
};

DenseDual solve_dense_dual(std::span<const double> b, Exponent e, const SolverOptions& opts,
                           double tol) {
  const std::size_t n = b.size();
  DenseDual out;
  out.x.assign(n, 0.0);
  if (n == 1) {
    // ||t e_0|| = |t|
    out.lower = out.upper = std::fabs(b[0]);
    out.x[0] = b[0] >= 0.0 ? 1.0 : -1.0;
    return out;
  }

  detail::CutLp lp(std::vector<double>(b.begin(), b.end()), 1.0);

  auto certified_upper = [&] {
    // <r, x> <= ||r||_1 ||x|| since |x(i)| <= ||x|| for every index
    return lp.objective() + l1(lp.residual());
  };
  auto consider = [&](std::span<const double> y) {
    double beta = 0.0, nrm = 0.0;
    std::vector<double> g = dense_norm_subgradient(y, e, beta, nrm);
    if (nrm > 0.0) {
      const double val = dot(b, y) / nrm;
      if (val > out.lower) {
        out.lower = val;
        for (std::size_t i = 0; i < n; ++i) out.x[i] = y[i] / nrm;
      }
    }
    return std::make_pair(std::move(g), beta);
  };

  out.upper = std::numeric_limits<double>::infinity();
  double previous_upper = out.upper;
  int stagnant = 0;
  for (int it = 0; it < opts.max_cuts; ++it) {
    lp.solve();
    out.upper = std::min(out.upper, certified_upper());
    ++out.iterations;
    const std::vector<double> y = lp.multipliers();
    auto [g, beta] = consider(y);
    if (relative_gap(out.lower, out.upper) <= tol) return out;
    if (beta <= 0.0) break;
    lp.add_column(std::move(g), beta);
    if (out.upper >= previous_upper * (1.0 - 1e-13)) {
      if (++stagnant > 25) break;
    } else {
      stagnant = 0;
    }
    previous_upper = out.upper;
  }

  // Fallback: multi-start subgradient ascent on <b, x> / ||x|| with steps
  // 1/sqrt(t); improving iterates also feed cuts back into the LP.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < opts.starts && relative_gap(out.lower, out.upper) > tol; ++s) {
    std::vector<double> x(n);
    if (s == 0) {
      x = out.x;
    } else {
      for (auto& v : x) v = normal(rng);
    }
    for (int t = 1; t <= opts.max_iterations; ++t) {
      double beta = 0.0, nrm = 0.0;
      std::vector<double> g = dense_norm_subgradient(x, e, beta, nrm);
      if (nrm == 0.0) break;
      const double h = dot(b, x) / nrm;
      const double before = out.lower;
      if (h > out.lower) {
        out.lower = h;
        for (std::size_t i = 0; i < n; ++i) out.x[i] = x[i] / nrm;
      }
      std::vector<double> grad(n);
      for (std::size_t i = 0; i < n; ++i) grad[i] = (b[i] - h * g[i]) / nrm;
      const double gn = std::sqrt(dot(grad, grad));
      if (out.lower > before || t % 100 == 0) {
        lp.add_column(g, beta);
        lp.solve();
        out.upper = std::min(out.upper, certified_upper());
        ++out.iterations;
        if (relative_gap(out.lower, out.upper) <= tol) return out;
      }
      if (gn == 0.0) break;
      const double xn = std::sqrt(dot(x, x));
      const double step = 0.5 * xn / (gn * std::sqrt(static_cast<double>(t)));
      for (std::size_t i = 0; i < n; ++i) x[i] += step * grad[i];
      const double rn = james_norm_dense(x, e).value;
      if (rn == 0.0) break;
      for (auto& v : x) v /= rn;
    }
  }
  return out;
}

struct BlockSolve {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> x;  // local witness on the block's support span
};

// Partition search over support positions; block [t, u] covers the support
// points s_t .. s_u.
struct EqDualEval {
  double value = 0.0;
  double upper = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // chosen, by support position
  std::vector<const BlockSolve*> solves;
  std::vector<Index> support;
};

}  // namespace

double sandwich_constant(Exponent e) {
  const double p = e.p();
  const double q = e.q();
  return std::pow(std::pow(2.0, q) * std::pow(std::pow(2.0, p) + 1.0, q - 1.0), 1.0 / q);
}

double quotient_norm(const SeqVector& x, Exponent e) {
  if (x.is_zero()) return 0.0;
  const Index a = x.min_support();
  return james_norm_dense(x.dense(a, x.max_support() - a + 1), e).value;
}

double block_partition_bound(const SeqVector& x, Exponent e) {
  if (x.is_zero()) return 0.0;
  const std::vector<Index> s = x.support();
  const std::size_t n = s.size();
  const double p = e.p();
  std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t t = 0; t <= u; ++t) {
      const double qn = james_norm_dense(x.dense(s[t], s[u] - s[t] + 1), e).value;
      best[u + 1] = std::min(best[u + 1], best[t] + abs_pow(qn, p));
    }
  }
  return std::pow(best[n], 1.0 / p);
}

struct NormEngine::Impl {
  std::map<std::vector<double>, BlockSolve> blocks;
  std::map<std::vector<double>, BlockSolve> strict_blocks;

  const BlockSolve& block(const std::vector<double>& content, Exponent e,
                          const SolverOptions& opts, double tol, bool strict) {
    auto& memo = strict ? strict_blocks : blocks;
    auto it = memo.find(content);
    if (it != memo.end()) return it->second;
    DenseDual d = solve_dense_dual(content, e, opts, tol);
    if (relative_gap(d.lower, d.upper) > tol) {
      throw NonConvergenceError("dual norm did not reach the requested certificate gap", d.lower,
                                d.upper);
    }
    BlockSolve bs{d.lower, d.upper, std::move(d.x)};
    return memo.emplace(content, std::move(bs)).first->second;
  }

  EqDualEval eq_dual(const DualFunctional& f, Exponent e, const SolverOptions& opts, double tol,
                     bool strict) {
    EqDualEval ev;
    if (f.is_zero()) return ev;
    ev.support = f.support();
    const auto& s = ev.support;
    const std::size_t n = s.size();
    const double q = e.q();
    std::vector<double> best(n + 1, 0.0), best_up(n + 1, 0.0);
    std::vector<std::size_t> arg(n + 1, 0);
    std::vector<const BlockSolve*> arg_solve(n + 1, nullptr);
    for (std::size_t u = 0; u < n; ++u) {
      best[u + 1] = -1.0;
      best_up[u + 1] = -1.0;
      for (std::size_t t = 0; t <= u; ++t) {
        const BlockSolve& bs = block(f.dense(s[t], s[u] - s[t] + 1), e, opts, tol, strict);
        const double cand = best[t] + abs_pow(bs.lower, q);
        if (cand > best[u + 1]) {
          best[u + 1] = cand;
          arg[u + 1] = t;
          arg_solve[u + 1] = &bs;
        }
        best_up[u + 1] = std::max(best_up[u + 1], best_up[t] + abs_pow(bs.upper, q));
      }
    }
    ev.value = std::pow(best[n], 1.0 / q);
    ev.upper = std::pow(best_up[n], 1.0 / q);
    for (std::size_t u = n; u > 0;) {
      const std::size_t t = arg[u];
      ev.blocks.emplace_back(t, u - 1);
      ev.solves.push_back(arg_solve[u]);
      u = t;
    }
    std::reverse(ev.blocks.begin(), ev.blocks.end());
    std::reverse(ev.solves.begin(), ev.solves.end());
    return ev;
  }
};

NormEngine::NormEngine(Exponent e, SolverOptions opts)
    : e_(e), opts_(opts), impl_(std::make_unique<Impl>()) {
  if (!(opts_.tolerance > 0.0)) throw PreconditionError("solver tolerance must be positive");
}
NormEngine::~NormEngine() = default;
NormEngine::NormEngine(NormEngine&&) noexcept = default;
NormEngine& NormEngine::operator=(NormEngine&&) noexcept = default;

DualNormResult NormEngine::dual_norm(const DualFunctional& f) {
  DualNormResult r;
  if (f.is_zero()) return r;
  const Index a = f.min_support();
  const Index m = f.max_support();
  const std::vector<double> b = f.dense(a, m - a + 1);
  DenseDual d = solve_dense_dual(b, e_, opts_, opts_.tolerance);
  // lift: constant fill left of the support
  std::vector<double> w(m + 1);
  for (Index i = 0; i <= m; ++i) w[i] = d.x[i < a ? 0 : i - a];
  r.witness = SeqVector::from_dense(w);
  r.lower = pairing(f, r.witness);
  r.upper = std::max(d.upper, r.lower);
  r.iterations = d.iterations;
  if (r.gap() > opts_.tolerance) {
    throw NonConvergenceError("dual norm certificate gap " + std::to_string(r.gap()) +
                                  " above tolerance " + std::to_string(opts_.tolerance),
                              r.lower, r.upper);
  }
  return r;
}

PartitionResult NormEngine::equivalent_dual_norm(const DualFunctional& f) {
  PartitionResult r;
  EqDualEval ev = impl_->eq_dual(f, e_, opts_, opts_.tolerance, false);
  if (f.is_zero()) return r;
  r.value = ev.value;
  r.upper = ev.upper;
  for (std::size_t k = 0; k < ev.blocks.size(); ++k) {
    if (k > 0) r.cuts.push_back(ev.support[ev.blocks[k].first]);
    r.block_values.push_back(ev.solves[k]->lower);
  }
  return r;
}

PrimalNormResult NormEngine::equivalent_primal_norm(const SeqVector& x) {
  return primal_solve(x, std::numeric_limits<double>::quiet_NaN());
}

PrimalNormResult NormEngine::equivalent_primal_decide(const SeqVector& x, double threshold) {
  return primal_solve(x, threshold);
}

PrimalNormResult NormEngine::primal_solve(const SeqVector& x, double threshold) {
  const bool deciding = !std::isnan(threshold);
  PrimalNormResult r;
  if (x.is_zero()) return r;
  const double p = e_.p();
  const double q = e_.q();
  const Index a = x.min_support();
  const std::size_t n = x.max_support() - a + 1;
  const std::vector<double> rhs = x.dense(a, n);
  // block solves run tighter so that |f| upper bounds do not dominate the gap
  const double block_tol = opts_.tolerance * 0.25;

  detail::CutLp lp(rhs, 1.0);  // |±e_i| <= quotient_norm(e_i) = 1
  lp.add_column(rhs, block_partition_bound(x, e_));

  auto certified_upper = [&] { return lp.objective() + pnorm(lp.residual(), p); };

  r.upper = std::numeric_limits<double>::infinity();
  std::vector<double> best_f(n, 0.0);
  for (int it = 0; it < opts_.max_cuts; ++it) {
    lp.solve();
    r.upper = std::min(r.upper, certified_upper());
    ++r.iterations;
    const std::vector<double>& y = lp.multipliers();
    const DualFunctional f = DualFunctional::from_dense(y, a);
    if (f.is_zero()) break;
    EqDualEval ev = impl_->eq_dual(f, e_, opts_, block_tol, true);
    if (ev.upper > 0.0) {
      const double val = dot(rhs, y) / ev.upper;
      if (val > r.lower) {
        r.lower = val;
        for (std::size_t i = 0; i < n; ++i) best_f[i] = y[i] / ev.upper;
      }
    }
    if (relative_gap(r.lower, r.upper) <= opts_.tolerance) break;
    if (deciding && (r.upper <= threshold || r.lower > threshold)) break;
    // cut normal: Σ_B (||f_B|| / |f|)^{q-1} x_B, a subgradient of |.|* at f
    std::vector<double> cut(n, 0.0);
    for (std::size_t k = 0; k < ev.blocks.size(); ++k) {
      const BlockSolve& bs = *ev.solves[k];
      if (bs.lower <= 0.0) continue;
      const double w = std::pow(bs.lower / ev.value, q - 1.0);
      const Index start = ev.support[ev.blocks[k].first] - a;
      for (std::size_t i = 0; i < bs.x.size(); ++i) cut[start + i] += w * bs.x[i];
    }
    const double beta = block_partition_bound(SeqVector::from_dense(cut, a), e_);
    if (beta <= 0.0) break;
    lp.add_column(std::move(cut), beta);
  }

  r.witness = DualFunctional::from_dense(best_f, a);
  r.lower = pairing(r.witness, x);
  const std::vector<double> wts = lp.weights();
  for (std::size_t j = 0; j < lp.columns(); ++j) {
    if (wts[j] > 0.0) {
      r.decomposition.push_back({wts[j], SeqVector::from_dense(lp.column(j), a), lp.cost(j)});
    }
  }
  const std::vector<double> res = lp.residual();
  const double rn = pnorm(res, p);
  if (rn > 0.0) {
    // finest partition: |r| <= (Σ |r_i|^p)^{1/p}
    std::vector<double> unit(res);
    for (auto& v : unit) v /= rn;
    r.decomposition.push_back({rn, SeqVector::from_dense(unit, a), 1.0});
  }
  double certified = 0.0;
  for (const auto& atom : r.decomposition) certified += atom.weight * atom.bound;
  r.upper = std::max(std::min(r.upper, certified), r.lower);
  const bool decided = deciding && (r.upper <= threshold || r.lower > threshold);
  if (r.gap() > opts_.tolerance && !decided) {
    throw NonConvergenceError("equivalent norm certificate gap " + std::to_string(r.gap()) +
                                  " above tolerance " + std::to_string(opts_.tolerance),
                              r.lower, r.upper);
  }
  return r;
}

DualNormResult dual_norm(const DualFunctional& f, Exponent e, const SolverOptions& opts) {
  return NormEngine(e, opts).dual_norm(f);
}

PartitionResult equivalent_dual_norm(const DualFunctional& f, Exponent e,
                                     const SolverOptions& opts) {
  return NormEngine(e, opts).equivalent_dual_norm(f);
}

PrimalNormResult equivalent_primal_norm(const SeqVector& x, Exponent e,
                                        const SolverOptions& opts) {
  return NormEngine(e, opts).equivalent_primal_norm(x);
}

double successive_sum_upper(const PrimalNormResult& v, const SeqVector& z, Exponent e) {
  const double zb = block_partition_bound(z, e);
  if (z.is_zero()) return v.upper;
  double total = 0.0;
  for (const auto& atom : v.decomposition) {
    if (!atom.vector.is_zero() && atom.vector.max_support() >= z.min_support()) {
      throw PreconditionError("successive_sum_upper needs every certificate atom to precede z");
    }
    total += atom.weight * atom.bound;
  }
  const double p = e.p();
  return std::pow(abs_pow(total, p) + abs_pow(zb, p), 1.0 / p);
}

SuperadditivityReport superadditivity_check(const DualFunctional& f, const DualFunctional& g,
                                            Exponent e, const SolverOptions& opts) {
  if (!precedes(f, g)) throw PreconditionError("superadditivity_check needs f ≺ g");
  NormEngine engine(e, opts);
  SuperadditivityReport r;
  r.first = engine.equivalent_dual_norm(f);
  r.second = engine.equivalent_dual_norm(g);
  r.sum = engine.equivalent_dual_norm(f + g);
  const double q = e.q();
  r.lhs = abs_pow(r.sum.value, q);
  r.rhs = abs_pow(r.first.value, q) + abs_pow(r.second.value, q);
  r.passed = r.lhs >= r.rhs - r.tolerance;
  return r;
}

PSubadditivityReport psubadditivity_check(const SeqVector& x, const SeqVector& y, Exponent e,
                                          const SolverOptions& opts) {
  if (!x.is_zero() && !y.is_zero() && !precedes(x, y)) {
    throw PreconditionError("psubadditivity_check needs x ≺ y");
  }
  NormEngine engine(e, opts);
  PSubadditivityReport r;
  r.first = engine.equivalent_primal_norm(x);
  r.second = engine.equivalent_primal_norm(y);
  r.sum = engine.equivalent_primal_norm(x + y);
  const double p = e.p();
  auto spread = [p](const PrimalNormResult& b) { return abs_pow(b.upper, p) - abs_pow(b.lower, p); };
  r.lhs = abs_pow(r.sum.upper, p);
  r.rhs = abs_pow(r.first.lower, p) + abs_pow(r.second.lower, p);
  r.tau_cert = spread(r.first) + spread(r.second) + spread(r.sum);
  r.passed = r.lhs <= r.rhs + r.tau_cert + 1e-12 * std::max(1.0, r.lhs);
  return r;
}

double direct_sum_norm(const DirectSumVector& v) {
  double m = 0.0;
  for (const auto& c : v.components()) m = std::max(m, james_norm(c.vector, c.exponent).value);
  return m;
}

}  // namespace jamesgeo
