#include "jamesgeo/midpoint.hpp"

#include <cmath>
#include <random>

#include "jamesgeo/pvar_norm.hpp"

namespace jamesgeo {

namespace {

// relative slack matching the 1e-12 budget on |.|^p
constexpr double kRel = 1e-12;

MembershipResult original_distances(const SeqVector& x, const SeqVector& y, const SeqVector& z,
                                    double delta, Exponent e) {
  MembershipResult r;
  r.dist_x = james_norm(x - z, e).value;
  r.dist_y = james_norm(y - z, e).value;
  r.radius = (1.0 + delta) * james_norm(x - y, e).value / 2.0;
  r.member = std::max(r.dist_x, r.dist_y) <= r.radius * (1.0 + kRel);
  return r;
}

SeqVector random_direction(std::mt19937_64& rng, Index lo, Index hi) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution keep(0.6);
  std::vector<SeqVector::Entry> e;
  for (Index i = lo; i < hi; ++i) {
    if (keep(rng)) e.emplace_back(i, normal(rng));
  }
  if (e.empty()) {
    e.emplace_back(std::uniform_int_distribution<Index>(lo, hi - 1)(rng), 1.0 + normal(rng) * 0.1);
  }
  return SeqVector(std::move(e));
}

// Members u + z with support of z inside [lo, hi): rejection from the ball of
// radius (1 + δ)||v|| around u.
SeqVector sample_member(const SeqVector& v, double delta, Exponent e, Index lo, Index hi,
                        std::mt19937_64& rng, std::size_t budget) {
  const double nv = james_norm(v, e).value;
  const double bound = (1.0 + delta) * nv * (1.0 + kRel);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    SeqVector dir = random_direction(rng, lo, hi);
    const double r = unif(rng);
    SeqVector z = dir * (r * r * (1.0 + delta) * nv / james_norm(dir, e).value);
    if (james_norm(v - z, e).value <= bound && james_norm(v + z, e).value <= bound) return z;
  }
  throw SamplerError("midpoint sampler accepted nothing after " + std::to_string(budget) +
                     " draws");
}

}  // namespace

const char* to_string(NormKind k) noexcept {
  return k == NormKind::original ? "original" : "equivalent";
}

void MidpointQuery::validate() const {
  if (x == y) throw PreconditionError("midpoint query needs x != y");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("midpoint delta must lie in (0, 1)");
}

SeqVector MidpointQuery::center() const { return 0.5 * (x + y); }
SeqVector MidpointQuery::half_diff() const { return 0.5 * (x - y); }

MembershipResult midpoint_distances(const MidpointQuery& q, const SeqVector& z,
                                    NormEngine* engine) {
  q.validate();
  if (q.kind == NormKind::original) return original_distances(q.x, q.y, z, q.delta, q.e);
  std::optional<NormEngine> local;
  if (engine == nullptr) engine = &local.emplace(q.e);
  MembershipResult r;
  r.dist_x = engine->equivalent_primal_norm(q.x - z).upper;
  r.dist_y = engine->equivalent_primal_norm(q.y - z).upper;
  r.radius = (1.0 + q.delta) * engine->equivalent_primal_norm(q.x - q.y).lower / 2.0;
  r.member = std::max(r.dist_x, r.dist_y) <= r.radius * (1.0 + kRel);
  return r;
}

bool midpoint_membership(const MidpointQuery& q, const SeqVector& z) {
  return midpoint_distances(q, z).member;
}

MidpointReport inner_ball_certificate(const MidpointQuery& q, const CertificateOptions& opts,
                                      NormEngine* engine) {
  q.validate();
  if (q.kind != NormKind::equivalent) {
    throw PreconditionError("inner_ball_certificate works in the equivalent norm");
  }
  std::optional<NormEngine> local;
  if (engine == nullptr) engine = &local.emplace(q.e, opts.solver);
  const double p = q.e.p();
  const SeqVector v = q.half_diff();
  const PrimalNormResult cv = engine->equivalent_primal_norm(v);
  const double lam = opts.slack > 0.0 ? opts.slack : q.delta / 8.0;
  const double k = sandwich_constant(q.e);

  MidpointReport rep;
  rep.slack = lam;
  rep.v_norm = cv.lower;
  rep.seed = opts.seed;
  rep.n_used = v.max_support();
  for (Index n = v.min_support(); n < v.max_support(); ++n) {
    const SeqVector head = v.restricted(0, n);
    const SeqVector tail = v - head;
    if (james_norm(tail, q.e).value / k > lam * cv.lower) continue;
    double tail_up = block_partition_bound(tail, q.e);
    if (tail_up > lam * cv.lower) tail_up = engine->equivalent_primal_norm(tail).upper;
    if (tail_up > lam * cv.lower) continue;
    const double head_low = engine->equivalent_primal_norm(head).lower;
    if (abs_pow(head_low, p) >= abs_pow(cv.upper, p) / (1.0 + abs_pow(lam, p))) {
      rep.n_used = n;
      break;
    }
  }
  const Index n = rep.n_used;
  // z beyond max supp(v) is successive to every certificate atom of v
  const bool disjoint = n >= v.max_support();
  rep.theta = std::pow(q.delta, 1.0 / p) * cv.lower;
  const double bound = (1.0 + q.delta) * cv.lower;

  SolverOptions coarse_opts = opts.solver;
  coarse_opts.tolerance = std::max(coarse_opts.tolerance, 2e-2);
  NormEngine coarse(q.e, coarse_opts);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    SeqVector z;
    bool full = !disjoint;
    if (s > 0) {
      const SeqVector dir = random_direction(rng, n + 1, n + 1 + opts.tail_width);
      const double r = (s == 1 || unif(rng) < 0.2) ? 1.0 : unif(rng);
      if (s % 10 == 9) {
        // scaled by a certified solver bound instead of the partition bound
        z = dir * (r * rep.theta / coarse.equivalent_primal_norm(dir).upper);
        full = true;
      } else {
        z = dir * (r * rep.theta / block_partition_bound(dir, q.e));
      }
    }
    double dist = 0.0;
    if (!full) dist = successive_sum_upper(cv, z, q.e);
    if (full || dist > bound) {
      dist = engine->equivalent_primal_decide(v - z, bound).upper;
      if (dist <= bound) dist = std::max(dist, engine->equivalent_primal_decide(v + z, bound).upper);
    }
    ++rep.samples_tested;
    if (dist > bound * (1.0 + kRel)) rep.violations.push_back({z, "distance", dist, bound});
  }
  return rep;
}

Index outer_split_index(const SeqVector& v, Exponent e, double nu) {
  if (v.is_zero()) throw PreconditionError("outer split of the zero vector");
  const double p = e.p();
  const double target = (1.0 - abs_pow(nu, p)) * abs_pow(james_norm(v, e).value, p);
  for (Index n = v.min_support(); n < v.max_support(); ++n) {
    if (abs_pow(james_norm(v.restricted(0, n), e).value, p) >= target) return n;
  }
  return v.max_support();
}

std::vector<MidpointViolation> outer_split_check(const MidpointQuery& q, const SeqVector& z,
                                                 Index n) {
  std::vector<MidpointViolation> out;
  const SeqVector v = q.half_diff();
  const double nv = james_norm(v, q.e).value;
  const SeqVector head = z.restricted(0, n);
  const SeqVector tail = z - head;
  const double head_bound = (1.0 + q.delta) * nv;
  const double tail_bound = 2.0 * std::pow(q.delta, 1.0 / q.e.p()) * nv;
  const double hn = james_norm(head, q.e).value;
  const double tn = james_norm(tail, q.e).value;
  if (hn > head_bound * (1.0 + kRel)) out.push_back({z, "compact part", hn, head_bound});
  if (tn > tail_bound * (1.0 + kRel)) out.push_back({z, "tail part", tn, tail_bound});
  return out;
}

MidpointReport outer_compact_certificate(const MidpointQuery& q, const CertificateOptions& opts) {
  q.validate();
  if (q.kind != NormKind::original) {
    throw PreconditionError("outer_compact_certificate works in the original norm");
  }
  const SeqVector v = q.half_diff();
  MidpointReport rep;
  rep.slack = opts.slack > 0.0 ? opts.slack : q.delta / 8.0;
  rep.v_norm = james_norm(v, q.e).value;
  rep.seed = opts.seed;
  rep.n_used = opts.outer_split == OuterSplit::smallest ? outer_split_index(v, q.e, rep.slack)
                                                        : v.max_support();
  rep.theta = 2.0 * std::pow(q.delta, 1.0 / q.e.p()) * rep.v_norm;
  const Index hi = v.max_support() + 1 + opts.tail_width;

  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution tail_only(0.5);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    SeqVector z;
    if (s > 0) {
      const Index lo = tail_only(rng) ? rep.n_used + 1 : 0;
      z = sample_member(v, q.delta, q.e, lo, hi, rng, opts.max_rejections);
    }
    ++rep.samples_tested;
    for (auto& viol : outer_split_check(q, z, rep.n_used)) rep.violations.push_back(viol);
  }
  return rep;
}

SeqVector tail_stress_search(const MidpointQuery& q, Index n, std::size_t window,
                             std::uint64_t seed, int restarts, int steps) {
  q.validate();
  const SeqVector v = q.half_diff();
  const double nv = james_norm(v, q.e).value;
  const double bound = (1.0 + q.delta) * nv;
  auto score = [&](const std::vector<double>& w) {
    const SeqVector z = SeqVector::from_dense(w);
    if (james_norm(v - z, q.e).value > bound || james_norm(v + z, q.e).value > bound) return -1.0;
    return james_norm(z - z.restricted(0, n), q.e).value;
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution touch(0.4);
  std::vector<double> best(window, 0.0);
  double best_score = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> w(window, 0.0);
    double sw = 0.0;
    double step = 0.3 * nv;
    for (int it = 0; it < steps; ++it) {
      std::vector<double> c(w);
      for (auto& t : c) {
        if (touch(rng)) t += step * normal(rng);
      }
      const double sc = score(c);
      if (sc > sw) {
        w = std::move(c);
        sw = sc;
      }
      if ((it + 1) % std::max(1, steps / 5) == 0) step *= 0.5;
    }
    if (sw > best_score) {
      best_score = sw;
      best = w;
    }
  }
  return SeqVector::from_dense(best);
}

ProbeMap ProbeMap::identity(Exponent e) {
  return {"identity", e, e, [](const SeqVector& x) { return x; }};
}

ProbeMap ProbeMap::homothety(Exponent e, double c) {
  return {"homothety", e, e, [c](const SeqVector& x) { return c * x; }};
}

ProbeMap ProbeMap::formal_identity(Exponent a, Exponent b) {
  return {"formal_identity", a, b, [](const SeqVector& x) { return x; }};
}

ProbeReport midpoint_image_probe(const ProbeMap& map, double t, double eps, double delta,
                                 const ProbeOptions& opts) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("probe delta must lie in (0, 1)");
  if (!(eps >= 0.0)) throw PreconditionError("probe eps must be nonnegative");
  if (!(t >= 0.0)) throw PreconditionError("probe threshold must be nonnegative");
  if (opts.window == 0) throw PreconditionError("probe window must be positive");
  ProbeReport rep;
  rep.map = map.name;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < opts.pairs; ++i) {
    SeqVector x = random_direction(rng, 0, opts.window);
    SeqVector y = random_direction(rng, 0, opts.window);
    const double d = james_norm(x - y, map.source).value;
    if (d == 0.0) continue;
    const double c = std::max(t, 1.0) * (1.0 + 3.0 * unif(rng)) / d;
    x = c * x;
    y = c * y;
    const double dist = james_norm(x - y, map.source).value;
    if (!(dist > t)) continue;
    ++rep.pairs_above_threshold;
    const double stretch = james_norm(map.apply(x) - map.apply(y), map.target).value / dist;
    rep.lip_estimate = std::max(rep.lip_estimate, stretch);
    if (rep.inconclusive || stretch > rep.stretch) {
      rep.inconclusive = false;
      rep.x = x;
      rep.y = y;
      rep.distance = dist;
      rep.stretch = stretch;
    }
  }
  if (rep.inconclusive) return rep;

  const SeqVector u = 0.5 * (rep.x + rep.y);
  const SeqVector v = 0.5 * (rep.x - rep.y);
  const SeqVector fx = map.apply(rep.x);
  const SeqVector fy = map.apply(rep.y);
  const Index hi = std::max(v.max_support() + 2, static_cast<Index>(opts.window));
  for (std::size_t s = 0; s < opts.samples; ++s) {
    SeqVector w;
    if (s > 0) w = sample_member(v, delta, map.source, 0, hi, rng, opts.max_rejections);
    const SeqVector fz = map.apply(u + w);
    ++rep.samples;
    if (!original_distances(fx, fy, fz, (1.0 + eps) * delta, map.target).member) ++rep.failures;
  }
  rep.failure_rate = static_cast<double>(rep.failures) / static_cast<double>(rep.samples);
  return rep;
}

}  // namespace jamesgeo
