#pragma once

// Graphs G_k(M) of strictly increasing k-tuples with the Hamming-type
// distance d(n, m) = |{j : n_j != m_j}|, maps from them into J-spaces, and the
// distortion experiments built on the vertex map n ↦ e_{n_1} + ... + e_{n_k}.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamesgeo/core.hpp"
#include "jamesgeo/dual_norms.hpp"

namespace jamesgeo {

std::size_t graph_distance(const GraphVertex& a, const GraphVertex& b);

/// a_1 < b_1 < a_2 < b_2 < ... < a_k < b_k.
bool is_interlaced(const GraphVertex& a, const GraphVertex& b);

/// u + θ (2k)^{-1/r} (e_{n_1} + ... + e_{n_k}).
SeqVector phi(const GraphVertex& v, const SeqVector& u, double theta, double r);

/// e_{n_1} + ... + e_{n_k}.
SeqVector phi_unscaled(const GraphVertex& v);

/// All k-subsets of the ground set in lexicographic order.
std::vector<GraphVertex> enumerate_vertices(std::size_t k, const std::vector<Index>& ground_set);

/// Parses "a..b" (inclusive) or a comma list "1,3,7".
std::vector<Index> parse_index_range(const std::string& text);

class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// True when JAMESGEO_GUARD_OVERRIDE=1 is set.
bool guard_overridden_by_env();

enum class ImageNorm { original, equivalent };

const char* to_string(ImageNorm n) noexcept;

/// Finite table G_k(M) → J_{p_1} ⊕_∞ ... ⊕_∞ J_{p_n}; plain J_p images are
/// one-component sums.
class GraphMap {
 public:
  GraphMap(std::size_t k, std::vector<Index> ground_set,
           std::map<GraphVertex, DirectSumVector> table);

  static GraphMap tabulate(std::size_t k, std::vector<Index> ground_set,
                           const std::function<DirectSumVector(const GraphVertex&)>& f);
  static GraphMap tabulate(std::size_t k, std::vector<Index> ground_set, Exponent e,
                           const std::function<SeqVector(const GraphVertex&)>& f);

  std::size_t k() const noexcept { return k_; }
  const std::vector<Index>& ground_set() const noexcept { return ground_set_; }
  const std::map<GraphVertex, DirectSumVector>& table() const noexcept { return table_; }
  const std::vector<GraphVertex>& vertices() const noexcept { return vertices_; }
  std::vector<Exponent> exponents() const;
  const DirectSumVector& operator()(const GraphVertex& v) const;

 private:
  std::size_t k_;
  std::vector<Index> ground_set_;
  std::map<GraphVertex, DirectSumVector> table_;
  std::vector<GraphVertex> vertices_;
};

struct PairOptions {
  ImageNorm norm = ImageNorm::original;
  std::size_t guard = 100000;  // max unordered vertex pairs
  bool override_guard = false;
  SolverOptions solver;
};

/// Image distance: max of component norms (original), or a certified upper
/// bound on |a - b| for one-component images (equivalent).
class ImageMetric {
 public:
  explicit ImageMetric(const GraphMap& gm, const PairOptions& opts);
  double operator()(const GraphVertex& a, const GraphVertex& b);
  const char* bound_side() const noexcept;

 private:
  const GraphMap& gm_;
  ImageNorm norm_;
  std::optional<NormEngine> engine_;
};

struct LipschitzResult {
  double value = 0.0;
  std::optional<GraphVertex> a, b;  // witness pair, absent when no pair exists
  std::size_t pairs = 0;
  std::string bound_side;  // "exact" or "upper"
};

LipschitzResult lipschitz_constant(const GraphMap& gm, const PairOptions& opts = {});

struct DisplacementResult {
  double min_value = 0.0;
  std::optional<GraphVertex> a, b;
  double lipschitz = 0.0;
  double bound = 0.0;  // 2 Lip k^{1/p}
  std::size_t interlaced_pairs = 0;
  std::string bound_side;
  bool within_bound = false;  // reported, not asserted
};

/// min over interlaced pairs of the image distance against 2 Lip(f) k^{1/p}.
DisplacementResult interlaced_min_displacement(const GraphMap& gm, Exponent e,
                                               const PairOptions& opts = {});

struct RamseyResult {
  std::vector<Index> subset;
  double diameter = 0.0;
  bool exact = false;
};

/// Subset M' of the ground set of the given size minimizing the diameter of
/// the image of G_k(M'); exhaustive when C(|M|, size) <= 10^4, otherwise
/// greedy elimination.
RamseyResult ramsey_extract(const GraphMap& gm, std::size_t target_size,
                            const PairOptions& opts = {}, bool force_greedy = false);

struct GrowthRow {
  std::size_t k = 0;
  double p_norm = 0.0;  // ||φ(n) - φ(m)||_{J_p}, interlaced, unscaled
  double q_norm = 0.0;
  double ratio = 0.0;   // p_norm / q_norm
};

struct GrowthTable {
  double p = 0.0;
  double q = 0.0;
  std::vector<GrowthRow> rows;
  double slope = 0.0;     // least squares of log ratio against log k
  double expected = 0.0;  // 1/p - 1/q
};

/// Interlaced pair n_i = 2i - 1, m_i = 2i, i = 1..k.
std::pair<GraphVertex, GraphVertex> canonical_interlaced_pair(std::size_t k);

GrowthTable distortion_growth_demo(double p, double q, const std::vector<std::size_t>& ks);

struct SumDemoRow {
  std::size_t k = 0;
  double component_bound = 0.0;  // 5 C (2k)^{-1/r} k^{1/q}, per unit θ
  double separation = 0.0;       // γ (2k)^{-1/r} ||φ(n) - φ(m)||_{J_r}, per unit θ
  double epsilon = 0.0;          // ε, per unit θ
  bool crossed = false;          // component_bound <= ε
};

struct SumDemoTable {
  double p = 0.0, q = 0.0, r = 0.0, theta = 0.0, c = 1.0;
  double gamma = 0.0;    // 1 / sandwich_constant(r): γ||x|| <= |x| on J_r
  double epsilon = 0.0;
  double crossing_k = 0.0;  // smallest real k with component_bound <= ε
  std::vector<SumDemoRow> rows;
};

/// Needs 1 < p < r < q and θ > (2k)^{1/r} for every k. ε <= 0 selects γ/4.
SumDemoTable direct_sum_obstruction_demo(double p, double q, double r,
                                         const std::vector<std::size_t>& ks, double theta,
                                         double c = 1.0, double epsilon = 0.0);

}  // namespace jamesgeo
