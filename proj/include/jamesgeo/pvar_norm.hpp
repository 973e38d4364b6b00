#pragma once

// The J_p norm: supremum over increasing index sequences p_1 < ... < p_n of
// (Σ |x(p_{i+1}) - x(p_i)|^p)^{1/p}, evaluated exactly on finite-support
// vectors.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "jamesgeo/core.hpp"

namespace jamesgeo {

struct NormResult {
  double value = 0.0;
  /// Increasing index sequence achieving the supremum.
  std::vector<Index> witness;
};

class WindowTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// |t|^p. Integer exponents 2 and 3 are multiplied out; other exponents go
/// through exp/log.
double abs_pow(double t, double p);

/// Σ |x(w_{i+1}) - x(w_i)|^p along the index sequence w (no 1/p root).
double path_power_sum(const SeqVector& x, std::span<const Index> path, Exponent e);

/// Exact norm by dynamic programming over the window [0, max supp + 1].
NormResult james_norm(const SeqVector& x, Exponent e);

/// Exhaustive maximum over every increasing subsequence of the window.
/// Throws WindowTooLargeError when max supp + 2 exceeds window_cap.
NormResult james_norm_bruteforce(const SeqVector& x, Exponent e, std::size_t window_cap = 16);

/// Norm of the vector whose coefficients at 0 .. n-1 are `values`, with an
/// implicit zero at index n. Witness indices are positions in `values`
/// (n denotes the trailing zero).
NormResult james_norm_dense(std::span<const double> values, Exponent e);

/// Norming functional built from the DP witness: g(x) = ||x|| and
/// g(y) <= ||y|| for every y.
DualFunctional norm_subgradient(const SeqVector& x, Exponent e);

/// Same construction on a dense window; returns coefficients at 0 .. n-1 and
/// writes the q-norm of the prefix sums of the result along the witness (a
/// certified bound on its dual norm, equal to 1 up to rounding) to
/// `dual_bound`.
std::vector<double> dense_norm_subgradient(std::span<const double> values, Exponent e,
                                           double& dual_bound, double& norm);

struct BlockRatioReport {
  double norm_of_sum_pow = 0.0;  // ||Σ x_i||^p
  double sum_of_norm_pows = 0.0; // Σ ||x_i||^p
  double ratio = 0.0;
  double bound = 0.0;            // 2^p + 1
  bool within_bound = false;
};

/// Compares ||Σ x_i||^p with Σ ||x_i||^p for successive blocks x_1 ≺ x_2 ≺ ...
BlockRatioReport consecutive_blocks_check(std::span<const SeqVector> blocks, Exponent e);

}  // namespace jamesgeo
