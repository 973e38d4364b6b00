#include "jamesgeo/kr_graphs.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "jamesgeo/pvar_norm.hpp"

namespace jamesgeo {

namespace {

void require_same_k(const GraphVertex& a, const GraphVertex& b) {
  if (a.k() != b.k()) {
    throw PreconditionError("vertices of different lengths " + std::to_string(a.k()) + " and " +
                            std::to_string(b.k()));
  }
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

void check_guard(std::size_t vertices, const PairOptions& opts) {
  const double pairs = binomial(vertices, 2);
  if (pairs > static_cast<double>(opts.guard) && !opts.override_guard && !guard_overridden_by_env()) {
    throw GuardError(std::to_string(static_cast<long long>(pairs)) + " vertex pairs exceed the guard " +
                     std::to_string(opts.guard) + " (set JAMESGEO_GUARD_OVERRIDE=1 to lift it)");
  }
}

Index parse_index(std::string_view s) {
  Index v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw PreconditionError("invalid index '" + std::string(s) + "'");
  }
  return v;
}

// Distances between all vertices, row-major in vertex order.
std::vector<double> distance_matrix(const GraphMap& gm, const PairOptions& opts) {
  const auto& vs = gm.vertices();
  check_guard(vs.size(), opts);
  ImageMetric metric(gm, opts);
  const std::size_t n = vs.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = metric(vs[i], vs[j]);
  }
  return d;
}

double subset_diameter(const std::vector<std::uint64_t>& masks, const std::vector<double>& d,
                       std::uint64_t subset) {
  const std::size_t n = masks.size();
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < n; ++i) {
    if ((masks[i] & ~subset) == 0) inside.push_back(i);
  }
  double diam = 0.0;
  for (std::size_t a = 0; a < inside.size(); ++a) {
    for (std::size_t b = a + 1; b < inside.size(); ++b) diam = std::max(diam, d[inside[a] * n + inside[b]]);
  }
  return diam;
}

}  // namespace

std::size_t graph_distance(const GraphVertex& a, const GraphVertex& b) {
  require_same_k(a, b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.k(); ++i) d += a[i] != b[i];
  return d;
}

bool is_interlaced(const GraphVertex& a, const GraphVertex& b) {
  require_same_k(a, b);
  for (std::size_t i = 0; i < a.k(); ++i) {
    if (!(a[i] < b[i])) return false;
    if (i + 1 < a.k() && !(b[i] < a[i + 1])) return false;
  }
  return true;
}

SeqVector phi_unscaled(const GraphVertex& v) {
  std::vector<SeqVector::Entry> e;
  for (Index n : v.indices()) e.emplace_back(n, 1.0);
  return SeqVector(std::move(e));
}

SeqVector phi(const GraphVertex& v, const SeqVector& u, double theta, double r) {
  if (!(theta > 0.0)) throw PreconditionError("phi needs theta > 0");
  if (!(r > 1.0)) throw PreconditionError("phi needs r > 1");
  const double scale = theta * std::pow(2.0 * static_cast<double>(v.k()), -1.0 / r);
  return u + scale * phi_unscaled(v);
}

std::vector<GraphVertex> enumerate_vertices(std::size_t k, const std::vector<Index>& ground_set) {
  if (k == 0) throw PreconditionError("graph vertices need k >= 1");
  for (std::size_t i = 1; i < ground_set.size(); ++i) {
    if (ground_set[i] <= ground_set[i - 1]) {
      throw PreconditionError("ground set must be strictly increasing");
    }
  }
  if (k > ground_set.size()) {
    throw PreconditionError("k = " + std::to_string(k) + " exceeds the ground set size " +
                            std::to_string(ground_set.size()));
  }
  std::vector<GraphVertex> out;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  const std::size_t n = ground_set.size();
  while (true) {
    std::vector<Index> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = ground_set[pos[i]];
    out.emplace_back(std::move(idx));
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

std::vector<Index> parse_index_range(const std::string& text) {
  std::vector<Index> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const Index a = parse_index(std::string_view(text).substr(0, dots));
    const Index b = parse_index(std::string_view(text).substr(dots + 2));
    if (b < a) throw PreconditionError("empty range '" + text + "'");
    for (Index i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_index(std::string_view(text).substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool guard_overridden_by_env() {
  const char* v = std::getenv("JAMESGEO_GUARD_OVERRIDE");
  return v != nullptr && std::string(v) == "1";
}

const char* to_string(ImageNorm n) noexcept {
  return n == ImageNorm::original ? "original" : "equivalent";
}

GraphMap::GraphMap(std::size_t k, std::vector<Index> ground_set,
                   std::map<GraphVertex, DirectSumVector> table)
    : k_(k), ground_set_(std::move(ground_set)), table_(std::move(table)) {
  vertices_ = enumerate_vertices(k_, ground_set_);
  if (table_.size() != vertices_.size()) {
    throw PreconditionError("graph map has " + std::to_string(table_.size()) +
                            " images but G_k(M) has " + std::to_string(vertices_.size()) +
                            " vertices");
  }
  const DirectSumVector* first = nullptr;
  for (const auto& v : vertices_) {
    auto it = table_.find(v);
    if (it == table_.end()) throw PreconditionError("graph map is missing a vertex image");
    if (first == nullptr) {
      first = &it->second;
      continue;
    }
    if (it->second.size() != first->size()) {
      throw PreconditionError("graph map images have different component counts");
    }
    for (std::size_t c = 0; c < first->size(); ++c) {
      if (!(it->second.components()[c].exponent == first->components()[c].exponent)) {
        throw PreconditionError("graph map images have different exponents");
      }
    }
  }
}

GraphMap GraphMap::tabulate(std::size_t k, std::vector<Index> ground_set,
                            const std::function<DirectSumVector(const GraphVertex&)>& f) {
  std::map<GraphVertex, DirectSumVector> table;
  for (auto& v : enumerate_vertices(k, ground_set)) {
    DirectSumVector img = f(v);
    table.emplace(std::move(v), std::move(img));
  }
  return GraphMap(k, std::move(ground_set), std::move(table));
}

GraphMap GraphMap::tabulate(std::size_t k, std::vector<Index> ground_set, Exponent e,
                            const std::function<SeqVector(const GraphVertex&)>& f) {
  return tabulate(k, std::move(ground_set), [&](const GraphVertex& v) {
    return DirectSumVector({{e, f(v)}});
  });
}

std::vector<Exponent> GraphMap::exponents() const {
  std::vector<Exponent> out;
  for (const auto& c : table_.begin()->second.components()) out.push_back(c.exponent);
  return out;
}

const DirectSumVector& GraphMap::operator()(const GraphVertex& v) const {
  auto it = table_.find(v);
  if (it == table_.end()) throw PreconditionError("vertex outside the graph map");
  return it->second;
}

ImageMetric::ImageMetric(const GraphMap& gm, const PairOptions& opts)
    : gm_(gm), norm_(opts.norm) {
  if (norm_ == ImageNorm::equivalent) {
    const auto ex = gm.exponents();
    if (ex.size() != 1) {
      throw PreconditionError("the equivalent norm needs one-component images");
    }
    engine_.emplace(ex[0], opts.solver);
  }
}

double ImageMetric::operator()(const GraphVertex& a, const GraphVertex& b) {
  const DirectSumVector d = gm_(a) - gm_(b);
  if (norm_ == ImageNorm::original) return direct_sum_norm(d);
  return engine_->equivalent_primal_norm(d.components()[0].vector).upper;
}

const char* ImageMetric::bound_side() const noexcept {
  return norm_ == ImageNorm::original ? "exact" : "upper";
}

LipschitzResult lipschitz_constant(const GraphMap& gm, const PairOptions& opts) {
  const auto& vs = gm.vertices();
  check_guard(vs.size(), opts);
  ImageMetric metric(gm, opts);
  LipschitzResult r;
  r.bound_side = metric.bound_side();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      ++r.pairs;
      const double ratio = metric(vs[i], vs[j]) / static_cast<double>(graph_distance(vs[i], vs[j]));
      if (!r.a || ratio > r.value) {
        r.value = ratio;
        r.a = vs[i];
        r.b = vs[j];
      }
    }
  }
  return r;
}

DisplacementResult interlaced_min_displacement(const GraphMap& gm, Exponent e,
                                               const PairOptions& opts) {
  if (gm.ground_set().size() < 2 * gm.k()) {
    throw PreconditionError("no interlaced pair exists when |M| < 2k");
  }
  const auto& vs = gm.vertices();
  check_guard(vs.size(), opts);
  ImageMetric metric(gm, opts);
  DisplacementResult r;
  r.bound_side = metric.bound_side();
  for (const auto& a : vs) {
    for (const auto& b : vs) {
      if (!is_interlaced(a, b)) continue;
      ++r.interlaced_pairs;
      const double d = metric(a, b);
      if (!r.a || d < r.min_value) {
        r.min_value = d;
        r.a = a;
        r.b = b;
      }
    }
  }
  r.lipschitz = lipschitz_constant(gm, opts).value;
  r.bound = 2.0 * r.lipschitz * std::pow(static_cast<double>(gm.k()), 1.0 / e.p());
  r.within_bound = r.min_value <= r.bound;
  return r;
}

RamseyResult ramsey_extract(const GraphMap& gm, std::size_t target_size, const PairOptions& opts,
                            bool force_greedy) {
  const auto& m = gm.ground_set();
  if (target_size < gm.k() || target_size > m.size()) {
    throw PreconditionError("target size " + std::to_string(target_size) + " must lie in [k, |M|] = [" +
                            std::to_string(gm.k()) + ", " + std::to_string(m.size()) + "]");
  }
  if (m.size() > 64) throw PreconditionError("ramsey_extract supports at most 64 ground elements");
  const std::vector<double> d = distance_matrix(gm, opts);
  std::vector<std::uint64_t> masks;
  for (const auto& v : gm.vertices()) {
    std::uint64_t mask = 0;
    for (Index n : v.indices()) {
      mask |= 1ULL << static_cast<std::size_t>(std::lower_bound(m.begin(), m.end(), n) - m.begin());
    }
    masks.push_back(mask);
  }
  auto to_subset = [&](std::uint64_t mask) {
    std::vector<Index> s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (mask >> i & 1ULL) s.push_back(m[i]);
    }
    return s;
  };

  RamseyResult r;
  if (!force_greedy && binomial(m.size(), target_size) <= 1e4) {
    r.exact = true;
    bool found = false;
    std::uint64_t best = 0;
    std::vector<std::size_t> pos(target_size);
    for (std::size_t i = 0; i < target_size; ++i) pos[i] = i;
    const std::size_t n = m.size();
    while (true) {
      std::uint64_t mask = 0;
      for (auto p : pos) mask |= 1ULL << p;
      const double diam = subset_diameter(masks, d, mask);
      if (!found || diam < r.diameter) {
        found = true;
        r.diameter = diam;
        best = mask;
      }
      std::size_t i = target_size;
      while (i > 0 && pos[i - 1] == n - target_size + i - 1) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < target_size; ++j) pos[j] = pos[j - 1] + 1;
    }
    r.subset = to_subset(best);
    return r;
  }

  std::uint64_t current = m.size() == 64 ? ~0ULL : (1ULL << m.size()) - 1;
  r.diameter = subset_diameter(masks, d, current);
  for (std::size_t size = m.size(); size > target_size; --size) {
    bool found = false;
    std::uint64_t best = current;
    double best_diam = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!(current >> i & 1ULL)) continue;
      const std::uint64_t cand = current & ~(1ULL << i);
      const double diam = subset_diameter(masks, d, cand);
      if (!found || diam < best_diam) {
        found = true;
        best_diam = diam;
        best = cand;
      }
    }
    current = best;
    r.diameter = best_diam;
  }
  r.subset = to_subset(current);
  return r;
}

std::pair<GraphVertex, GraphVertex> canonical_interlaced_pair(std::size_t k) {
  std::vector<Index> a, b;
  for (std::size_t i = 1; i <= k; ++i) {
    a.push_back(2 * i - 1);
    b.push_back(2 * i);
  }
  return {GraphVertex(std::move(a)), GraphVertex(std::move(b))};
}

GrowthTable distortion_growth_demo(double p, double q, const std::vector<std::size_t>& ks) {
  const Exponent ep(p), eq(q);
  if (ks.size() < 2) throw PreconditionError("the growth fit needs at least two values of k");
  GrowthTable t;
  t.p = p;
  t.q = q;
  t.expected = 1.0 / p - 1.0 / q;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k : ks) {
    const auto [a, b] = canonical_interlaced_pair(k);
    const SeqVector d = phi_unscaled(a) - phi_unscaled(b);
    GrowthRow row;
    row.k = k;
    row.p_norm = james_norm(d, ep).value;
    row.q_norm = james_norm(d, eq).value;
    row.ratio = row.p_norm / row.q_norm;
    t.rows.push_back(row);
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(row.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ks.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw PreconditionError("the growth fit needs distinct values of k");
  t.slope = (n * sxy - sx * sy) / den;
  return t;
}

SumDemoTable direct_sum_obstruction_demo(double p, double q, double r,
                                         const std::vector<std::size_t>& ks, double theta,
                                         double c, double epsilon) {
  if (!(1.0 < p && p < r && r < q)) throw PreconditionError("the demo needs 1 < p < r < q");
  if (!(c >= 1.0)) throw PreconditionError("the constant C must be >= 1");
  const Exponent er(r);
  SumDemoTable t;
  t.p = p;
  t.q = q;
  t.r = r;
  t.theta = theta;
  t.c = c;
  t.gamma = 1.0 / sandwich_constant(er);
  t.epsilon = epsilon > 0.0 ? epsilon : t.gamma / 4.0;
  t.crossing_k = std::pow(5.0 * c * std::pow(2.0, -1.0 / r) / t.epsilon, 1.0 / (1.0 / r - 1.0 / q));
  for (std::size_t k : ks) {
    if (k == 0) throw PreconditionError("k must be >= 1");
    const double scale = std::pow(2.0 * static_cast<double>(k), -1.0 / r);
    if (!(theta * scale > 1.0)) {
      throw PreconditionError("theta must exceed (2k)^{1/r} for k = " + std::to_string(k));
    }
    const auto [a, b] = canonical_interlaced_pair(k);
    SumDemoRow row;
    row.k = k;
    row.component_bound = 5.0 * c * scale * std::pow(static_cast<double>(k), 1.0 / q);
    row.separation = t.gamma * scale * james_norm(phi_unscaled(a) - phi_unscaled(b), er).value;
    row.epsilon = t.epsilon;
    row.crossed = row.component_bound <= row.epsilon;
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace jamesgeo
