#include "jamesgeo/pvar_norm.hpp"

#include <cmath>
#include <string>

namespace jamesgeo {

double abs_pow(double t, double p) {
  const double a = std::fabs(t);
  if (a == 0.0) return 0.0;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  return std::exp(p * std::log(a));
}

namespace {

// B[i] = max(0, max_{j<i} B[j] + |w_i - w_j|^p). Scanning j downward with a
// strict comparison makes a fresh start win ties and otherwise prefers the
// nearest predecessor; among equal endpoints the smallest index wins.
NormResult dense_variation(std::span<const double> w, double p) {
  const std::size_t n = w.size();
  NormResult r;
  if (n < 2) return r;
  std::vector<double> best(n, 0.0);
  std::vector<std::ptrdiff_t> pred(n, -1);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double bi = 0.0;
    std::ptrdiff_t pi = -1;
    for (std::size_t j = i; j-- > 0;) {
      const double cand = best[j] + abs_pow(w[i] - w[j], p);
      if (cand > bi) {
        bi = cand;
        pi = static_cast<std::ptrdiff_t>(j);
      }
    }
    best[i] = bi;
    pred[i] = pi;
    if (bi > best[arg]) arg = i;
  }
  if (best[arg] == 0.0) return r;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(arg); i >= 0; i = pred[i]) {
    r.witness.push_back(static_cast<Index>(i));
  }
  std::reverse(r.witness.begin(), r.witness.end());
  r.value = std::pow(best[arg], 1.0 / p);
  return r;
}

std::vector<double> window_values(const SeqVector& x) {
  // every integer index in [0, max supp + 1] participates
  return x.dense(x.max_support() + 2);
}

}  // namespace

double path_power_sum(const SeqVector& x, std::span<const Index> path, Exponent e) {
  double s = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    s += abs_pow(x[path[i]] - x[path[i - 1]], e.p());
  }
  return s;
}

NormResult james_norm(const SeqVector& x, Exponent e) {
  if (x.is_zero()) return {};
  return dense_variation(window_values(x), e.p());
}

NormResult james_norm_dense(std::span<const double> values, Exponent e) {
  std::vector<double> w(values.begin(), values.end());
  w.push_back(0.0);
  return dense_variation(w, e.p());
}

NormResult james_norm_bruteforce(const SeqVector& x, Exponent e, std::size_t window_cap) {
  if (x.is_zero()) return {};
  const std::size_t n = x.max_support() + 2;
  if (n > window_cap || n >= 8 * sizeof(unsigned long long)) {
    throw WindowTooLargeError("brute-force window " + std::to_string(n) + " exceeds the cap " +
                              std::to_string(window_cap));
  }
  const std::vector<double> w = window_values(x);
  const double p = e.p();
  double best = 0.0;
  unsigned long long best_mask = 0;
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (unsigned long long mask = 1; mask < (1ULL << n); ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // single index: empty variation
    idx.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1ULL) idx.push_back(i);
    }
    double s = 0.0;
    for (std::size_t t = 1; t < idx.size(); ++t) s += abs_pow(w[idx[t]] - w[idx[t - 1]], p);
    if (s > best) {
      best = s;
      best_mask = mask;
    }
  }
  NormResult r;
  if (best == 0.0) return r;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask >> i & 1ULL) r.witness.push_back(i);
  }
  r.value = std::pow(best, 1.0 / p);
  return r;
}

std::vector<double> dense_norm_subgradient(std::span<const double> values, Exponent e,
                                           double& dual_bound, double& norm) {
  const std::size_t n = values.size();
  std::vector<double> w(values.begin(), values.end());
  w.push_back(0.0);
  const NormResult nr = dense_variation(w, e.p());
  std::vector<double> g(n + 1, 0.0);
  norm = nr.value;
  dual_bound = 0.0;
  if (nr.value == 0.0) return std::vector<double>(n, 0.0);
  const double p = e.p();
  const double q = e.q();
  const double scale = std::pow(nr.value, p - 1.0);
  // a_i = sign(d_i) |d_i|^{p-1} / ||x||^{p-1}; g = Σ a_i (e*_{w_{i+1}} - e*_{w_i})
  for (std::size_t t = 1; t < nr.witness.size(); ++t) {
    const double d = w[nr.witness[t]] - w[nr.witness[t - 1]];
    const double a = std::copysign(abs_pow(d, p - 1.0), d) / scale;
    g[nr.witness[t]] += a;
    g[nr.witness[t - 1]] -= a;
  }
  // along the witness (which ends at or before the trailing zero), prefix
  // sums of g are -a_i; the trailing zero position needs no coefficient.
  double prefix = 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t < nr.witness.size(); ++t) {
    if (nr.witness[t] >= n) break;
    prefix += g[nr.witness[t]];
    acc += abs_pow(prefix, q);
  }
  dual_bound = std::pow(acc, 1.0 / q);
  g.pop_back();
  return g;
}

DualFunctional norm_subgradient(const SeqVector& x, Exponent e) {
  if (x.is_zero()) throw PreconditionError("norm_subgradient of the zero vector");
  const std::vector<double> w = window_values(x);
  const NormResult nr = dense_variation(w, e.p());
  const double p = e.p();
  const double scale = std::pow(nr.value, p - 1.0);
  std::vector<DualFunctional::Entry> entries;
  for (std::size_t t = 1; t < nr.witness.size(); ++t) {
    const double d = w[nr.witness[t]] - w[nr.witness[t - 1]];
    const double a = std::copysign(abs_pow(d, p - 1.0), d) / scale;
    entries.emplace_back(nr.witness[t], a);
    entries.emplace_back(nr.witness[t - 1], -a);
  }
  return DualFunctional(std::move(entries));
}

BlockRatioReport consecutive_blocks_check(std::span<const SeqVector> blocks, Exponent e) {
  if (blocks.empty()) throw PreconditionError("consecutive_blocks_check needs at least one block");
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (!precedes(blocks[i - 1], blocks[i])) {
      throw PreconditionError("block " + std::to_string(i - 1) + " does not precede block " +
                              std::to_string(i));
    }
  }
  const double p = e.p();
  BlockRatioReport r;
  SeqVector sum;
  for (const auto& b : blocks) {
    sum = sum + b;
    r.sum_of_norm_pows += std::pow(james_norm(b, e).value, p);
  }
  r.norm_of_sum_pow = std::pow(james_norm(sum, e).value, p);
  r.ratio = r.norm_of_sum_pow / r.sum_of_norm_pows;
  r.bound = std::pow(2.0, p) + 1.0;
  r.within_bound = r.ratio <= r.bound;
  return r;
}

}  // namespace jamesgeo
