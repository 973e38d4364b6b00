#pragma once

// Dual norm of J_p, the block-decomposition norm |.|_{J_p*} built from it,
// and the induced equivalent norm |.|_{J_p} on finite-support vectors.
//
// Every dual-type value is returned as an interval [lower, upper]:
//  * lower comes from an explicit feasible point (a witness of norm <= 1);
//  * upper comes from an explicit decomposition into cuts whose dual norms
//    are bounded, solved as a small LP (outer approximation by cutting
//    planes, with the DP norm as separation oracle).

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamesgeo/core.hpp"

namespace jamesgeo {

struct SolverOptions {
  int starts = 8;             // ascent restarts, used when cutting planes stall
  int max_iterations = 2000;  // per ascent start
  double tolerance = 1e-3;    // relative certificate gap
  int max_cuts = 400;
  std::uint64_t seed = 0;
};

template <class Witness>
struct CertifiedNorm {
  double lower = 0.0;
  double upper = 0.0;
  Witness witness;
  int iterations = 0;

  /// (upper - lower) / max(lower, 1e-12); zero for the zero element.
  double gap() const {
    if (upper <= 0.0) return 0.0;
    return (upper - lower) / std::max(lower, 1e-12);
  }
};

/// Interval for ||f||_{J_p*}. The witness x has ||x||_{J_p} <= 1 and
/// <f, x> = lower.
using DualNormResult = CertifiedNorm<SeqVector>;

/// One term of an upper-bound certificate: x = Σ weight * vector, and
/// |vector|_{J_p} <= bound is certified by a block partition.
struct PrimalAtom {
  double weight = 0.0;
  SeqVector vector;
  double bound = 0.0;
};

/// Interval for |x|_{J_p}. The witness f has |f|_{J_p*} <= 1 (certified) and
/// <f, x> = lower; upper = Σ weight * bound over the decomposition.
struct PrimalNormResult : CertifiedNorm<DualFunctional> {
  std::vector<PrimalAtom> decomposition;
};

struct PartitionResult {
  double value = 0.0;  // from block lower bounds
  double upper = 0.0;  // same partition search over block upper bounds
  std::vector<Index> cuts;
  std::vector<double> block_values;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// (2^q (2^p + 1)^{q-1})^{1/q}: ||f|| <= |f| <= K ||f|| on J_p*, and
/// ||x|| / K <= |x| <= ||x|| on J_p.
double sandwich_constant(Exponent e);

/// ||x restricted to nothing left of its support||: the J_p norm of x moved
/// to start at index 0. This is the smallest norm of any vector agreeing
/// with x from min supp(x) on.
double quotient_norm(const SeqVector& x, Exponent e);

/// min over partitions of the index range into intervals B of
/// (Σ_B quotient_norm(x|_B)^p)^{1/p}; a certified upper bound on |x|_{J_p}.
double block_partition_bound(const SeqVector& x, Exponent e);

/// Solver front end with a memo of block dual norms. Results are pure
/// functions of the input and the options, so caching never changes output.
class NormEngine {
 public:
  explicit NormEngine(Exponent e, SolverOptions opts = {});
  ~NormEngine();
  NormEngine(NormEngine&&) noexcept;
  NormEngine& operator=(NormEngine&&) noexcept;

  Exponent exponent() const noexcept { return e_; }
  const SolverOptions& options() const noexcept { return opts_; }

  DualNormResult dual_norm(const DualFunctional& f);
  PartitionResult equivalent_dual_norm(const DualFunctional& f);
  PrimalNormResult equivalent_primal_norm(const SeqVector& x);

  /// Like equivalent_primal_norm, but stops as soon as the certified interval
  /// lies entirely on one side of `threshold` (upper <= threshold or
  /// lower > threshold); the gap may then exceed the tolerance.
  PrimalNormResult equivalent_primal_decide(const SeqVector& x, double threshold);

 private:
  PrimalNormResult primal_solve(const SeqVector& x, double threshold);

  struct Impl;
  Exponent e_;
  SolverOptions opts_;
  std::unique_ptr<Impl> impl_;
};

DualNormResult dual_norm(const DualFunctional& f, Exponent e, const SolverOptions& opts = {});
PartitionResult equivalent_dual_norm(const DualFunctional& f, Exponent e,
                                     const SolverOptions& opts = {});
PrimalNormResult equivalent_primal_norm(const SeqVector& x, Exponent e,
                                        const SolverOptions& opts = {});

/// Upper bound on |v ± z| when every certificate atom of v precedes z:
/// pairing each atom with z along concatenated partitions gives
/// (upper(v)^p + block_partition_bound(z)^p)^{1/p}.
double successive_sum_upper(const PrimalNormResult& v, const SeqVector& z, Exponent e);

struct SuperadditivityReport {
  PartitionResult first, second, sum;
  double lhs = 0.0;  // |f + g|^q
  double rhs = 0.0;  // |f|^q + |g|^q
  double tolerance = 1e-6;
  bool passed = false;
};

/// |f + g|^q >= |f|^q + |g|^q - tolerance for f ≺ g.
SuperadditivityReport superadditivity_check(const DualFunctional& f, const DualFunctional& g,
                                            Exponent e, const SolverOptions& opts = {});

struct PSubadditivityReport {
  PrimalNormResult first, second, sum;
  double lhs = 0.0;       // upper(x + y)^p
  double rhs = 0.0;       // lower(x)^p + lower(y)^p
  double tau_cert = 0.0;  // Σ (upper^p - lower^p) over the three solves
  bool passed = false;
};

/// |x + y|^p <= |x|^p + |y|^p for x ≺ y, checked within solver certificates.
/// A zero y is accepted as the vacuous case.
PSubadditivityReport psubadditivity_check(const SeqVector& x, const SeqVector& y, Exponent e,
                                          const SolverOptions& opts = {});

/// max over components of the component J_p norm.
double direct_sum_norm(const DirectSumVector& v);

}  // namespace jamesgeo
