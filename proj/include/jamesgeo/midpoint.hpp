#pragma once

// Approximate metric midpoint sets
//   Mid(x, y, δ) = { z : max(d(x, z), d(y, z)) <= (1 + δ) d(x, y) / 2 }
// in J_p under either the original norm or the equivalent norm, and sampled
// certificates for the two inclusions around u = (x + y) / 2, v = (x - y) / 2.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jamesgeo/core.hpp"
#include "jamesgeo/dual_norms.hpp"

namespace jamesgeo {

enum class NormKind { original, equivalent };

const char* to_string(NormKind k) noexcept;

struct MidpointQuery {
  SeqVector x;
  SeqVector y;
  double delta = 0.5;
  NormKind kind = NormKind::original;
  Exponent e{2.0};

  /// Throws PreconditionError unless x != y and 0 < delta < 1.
  void validate() const;
  SeqVector center() const;     // (x + y) / 2
  SeqVector half_diff() const;  // (x - y) / 2
};

struct MembershipResult {
  double dist_x = 0.0;  // upper bound for the equivalent norm
  double dist_y = 0.0;
  double radius = 0.0;  // (1 + δ) d(x, y) / 2, lower bound for the equivalent norm
  bool member = false;
};

/// Distances and verdict; equivalent-norm verdicts are certified (upper
/// distances against a lower radius).
MembershipResult midpoint_distances(const MidpointQuery& q, const SeqVector& z,
                                    NormEngine* engine = nullptr);

bool midpoint_membership(const MidpointQuery& q, const SeqVector& z);

struct MidpointViolation {
  SeqVector z;
  std::string check;
  double value = 0.0;
  double bound = 0.0;
};

struct MidpointReport {
  std::size_t samples_tested = 0;
  std::vector<MidpointViolation> violations;
  Index n_used = 0;
  double theta = 0.0;      // ball radius (inner) or tail bound (outer)
  double slack = 0.0;      // λ (inner) or ν (outer)
  double v_norm = 0.0;     // ||v||, or a certified lower bound on |v|
  std::uint64_t seed = 0;

  bool passed() const noexcept { return violations.empty(); }
};

/// Outer split point: the full support of v (v_N = v, admissible for every ν)
/// or the smallest admissible N.
enum class OuterSplit { full_support, smallest };

struct CertificateOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double slack = 0.0;             // λ or ν; <= 0 selects δ / 8
  std::size_t tail_width = 6;     // sampled supports reach at most this far past N
  std::size_t max_rejections = 20000;
  OuterSplit outer_split = OuterSplit::full_support;
  SolverOptions solver;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Equivalent norm: samples z beyond N with |z| <= δ^{1/p} |v| and checks
/// u + z ∈ Mid(x, y, δ).
MidpointReport inner_ball_certificate(const MidpointQuery& q, const CertificateOptions& opts = {},
                                      NormEngine* engine = nullptr);

/// Original norm: samples members u + z of Mid(x, y, δ), splits z = z' + z''
/// at N, and checks ||z'|| <= (1 + δ)||v|| and ||z''|| <= 2 δ^{1/p} ||v||.
MidpointReport outer_compact_certificate(const MidpointQuery& q,
                                         const CertificateOptions& opts = {});

/// Smallest N with ||v_N||^p >= (1 - ν^p) ||v||^p, v_N = v restricted to [0, N].
Index outer_split_index(const SeqVector& v, Exponent e, double nu);

/// Outer-split checks for one displacement z (u + z must be a member).
std::vector<MidpointViolation> outer_split_check(const MidpointQuery& q, const SeqVector& z,
                                                 Index n);

/// Hill-climbing search for a displacement z with u + z ∈ Mid(x, y, δ)
/// (original norm) maximizing ||z restricted beyond n||.
SeqVector tail_stress_search(const MidpointQuery& q, Index n, std::size_t window,
                             std::uint64_t seed, int restarts = 30, int steps = 1500);

/// A map between J-spaces for the image probe.
struct ProbeMap {
  std::string name;
  Exponent source;
  Exponent target;
  std::function<SeqVector(const SeqVector&)> apply;

  static ProbeMap identity(Exponent e);
  static ProbeMap homothety(Exponent e, double c);
  /// x ↦ x viewed in J_b.
  static ProbeMap formal_identity(Exponent a, Exponent b);
};

struct ProbeOptions {
  std::size_t pairs = 200;
  std::size_t samples = 100;
  std::size_t window = 8;
  std::uint64_t seed = 0;
  std::size_t max_rejections = 20000;
};

struct ProbeReport {
  std::string map;
  bool inconclusive = true;
  SeqVector x;
  SeqVector y;
  double distance = 0.0;     // ||x - y|| in the source
  double stretch = 0.0;      // image distance / distance for the chosen pair
  double lip_estimate = 0.0; // max stretch over pairs above the threshold
  std::size_t pairs_above_threshold = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double failure_rate = 0.0;
};

/// Finds a high-stretch pair with ||x - y|| > t and tests
/// f(Mid(x, y, δ)) ⊂ Mid(f(x), f(y), (1 + ε) δ) on sampled members.
ProbeReport midpoint_image_probe(const ProbeMap& map, double t, double eps, double delta,
                                 const ProbeOptions& opts = {});

}  // namespace jamesgeo
