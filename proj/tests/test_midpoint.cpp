#include <cmath>

#include "doctest.h"
#include "jamesgeo/midpoint.hpp"
#include "jamesgeo/pvar_norm.hpp"
#include "oracles.hpp"

using namespace jamesgeo;

namespace {
MidpointQuery make(SeqVector x, SeqVector y, double delta, NormKind kind, double p) {
  MidpointQuery q;
  q.x = std::move(x);
  q.y = std::move(y);
  q.delta = delta;
  q.kind = kind;
  q.e = Exponent(p);
  return q;
}
}  // namespace

TEST_CASE("query validation") {
  auto q = make(SeqVector::unit(1), SeqVector::unit(1), 0.5, NormKind::original, 2);
  CHECK_THROWS_AS(q.validate(), PreconditionError);
  q.y = SeqVector::unit(2);
  q.delta = 1.0;
  CHECK_THROWS_AS(q.validate(), PreconditionError);
  q.delta = 0.0;
  CHECK_THROWS_AS(q.validate(), PreconditionError);
}

TEST_CASE("membership basics") {
  oracle::Gen g(41);
  for (auto kind : {NormKind::original, NormKind::equivalent}) {
    for (double p : {1.5, 2.0, 3.0}) {
      for (int t = 0; t < 10; ++t) {
        SeqVector x = g.vector(0, 5);
        SeqVector y = g.vector(0, 5);
        if (x == y) continue;
        for (double delta : {0.1, 0.5, 0.9}) {
          auto q = make(x, y, delta, kind, p);
          CHECK(midpoint_membership(q, q.center()));
          CHECK_FALSE(midpoint_membership(q, x));
          CHECK_FALSE(midpoint_membership(q, q.center() + 10.0 * (x - y)));
        }
      }
    }
  }
}

TEST_CASE("original membership agrees with direct distances and scales") {
  oracle::Gen g(42);
  for (int t = 0; t < 200; ++t) {
    const double p = 1.5 + g.below(3) * 0.75;
    SeqVector x = g.vector(0, 5);
    SeqVector y = g.vector(0, 5);
    if (x == y) continue;
    SeqVector z = 0.5 * (x + y) + 0.3 * g.vector(0, 7);
    auto q = make(x, y, 0.5, NormKind::original, p);
    const double dx = oracle::norm(x - z, p);
    const double dy = oracle::norm(y - z, p);
    const double r = 1.5 * oracle::norm(x - y, p) / 2.0;
    const bool expect = std::max(dx, dy) <= r;
    if (std::fabs(std::max(dx, dy) - r) > 1e-9) CHECK(midpoint_membership(q, z) == expect);
    const double c = g.real(0.1, 10.0);
    auto qs = make(c * x, c * y, 0.5, NormKind::original, p);
    if (std::fabs(std::max(dx, dy) - r) > 1e-9) CHECK(midpoint_membership(qs, c * z) == expect);
  }
}

TEST_CASE("inner ball certificate") {
  auto q = make(SeqVector::unit(2), -SeqVector::unit(2), 0.5, NormKind::equivalent, 2);
  CertificateOptions o;
  o.samples = 100;
  auto rep = inner_ball_certificate(q, o);
  CHECK(rep.passed());
  CHECK(rep.samples_tested == 100);
  CHECK(rep.theta == doctest::Approx(std::sqrt(0.5) * rep.v_norm));
  CHECK(rep.n_used == 2);

  auto wrong = make(SeqVector::unit(2), SeqVector(), 0.5, NormKind::original, 2);
  CHECK_THROWS_AS(inner_ball_certificate(wrong, o), PreconditionError);

  oracle::Gen g(43);
  for (double p : {1.5, 3.0}) {
    for (double delta : {0.1, 0.9}) {
      SeqVector x = g.vector(0, 4);
      auto qq = make(x, SeqVector(), delta, NormKind::equivalent, p);
      o.seed = 7;
      o.samples = 30;
      CHECK(inner_ball_certificate(qq, o).passed());
    }
  }
}

TEST_CASE("outer compact certificate") {
  auto q = make(SeqVector::unit(2), -SeqVector::unit(2), 0.5, NormKind::original, 2);
  CertificateOptions o;
  auto rep = outer_compact_certificate(q, o);
  CHECK(rep.passed());
  CHECK(rep.samples_tested == 100);
  CHECK(outer_split_check(q, SeqVector(), rep.n_used).empty());

  auto wrong = make(SeqVector::unit(2), SeqVector(), 0.5, NormKind::equivalent, 2);
  CHECK_THROWS_AS(outer_compact_certificate(wrong, o), PreconditionError);

  // an impossible budget is reported instead of looping
  CertificateOptions tight;
  tight.max_rejections = 0;
  CHECK_THROWS_AS(outer_compact_certificate(q, tight), SamplerError);
}

TEST_CASE("adversarial tail member") {
  auto q = make(SeqVector::unit(2), -SeqVector::unit(2), 0.9, NormKind::original, 3);
  const double nv = james_norm(q.half_diff(), q.e).value;
  const double unit = std::cbrt(0.9) * nv;
  const Index n = outer_split_index(q.half_diff(), q.e, q.delta / 8.0);
  CHECK(n == 2);
  SeqVector z = tail_stress_search(q, n, 9, 3);
  CHECK(midpoint_membership(q, q.center() + z));
  const double tail = james_norm(z - z.restricted(0, n), q.e).value;
  REQUIRE(tail >= 1.9 * unit);
  // along the segment from u the points stay members; scale down to 1.9
  const SeqVector z19 = (1.9 * unit / tail) * z;
  CHECK(midpoint_membership(q, q.center() + z19));
  CHECK(james_norm(z19 - z19.restricted(0, n), q.e).value == doctest::Approx(1.9 * unit));
  CHECK(outer_split_check(q, z19, n).empty());
}

TEST_CASE("tail bound fails for a member with a large head") {
  // found by tail_stress_search; distances checked by enumeration
  const SeqVector z = SeqVector::from_dense(std::vector<double>{
      -0.52444402412388991, -0.43676606909250043, -1.0869415866329701, -1.7364960791090265,
      -1.9375815194756085, -0.9365863683798864, -1.6284253227474732, -1.2594592413028824,
      -0.22821790911615358});
  const SeqVector v = SeqVector::unit(2);
  const double nv = oracle::norm(v, 3.0);
  CHECK(oracle::norm(v - z, 3.0) <= 1.9 * nv);
  CHECK(oracle::norm(v + z, 3.0) <= 1.9 * nv);
  const double tail = oracle::norm(z - z.restricted(0, 2), 3.0);
  CHECK(tail > 2.0 * std::cbrt(0.9) * nv);

  auto q = make(v, -v, 0.9, NormKind::original, 3);
  CHECK(midpoint_membership(q, q.center() + z));
  auto viol = outer_split_check(q, z, 2);
  REQUIRE(viol.size() == 1);
  CHECK(viol[0].check == "tail part");
}

TEST_CASE("image probe") {
  ProbeOptions o;
  o.samples = 50;
  o.pairs = 50;
  auto id = midpoint_image_probe(ProbeMap::identity(Exponent(2)), 1.0, 0.0, 0.25, o);
  CHECK_FALSE(id.inconclusive);
  CHECK(id.failures == 0);
  CHECK(id.stretch == doctest::Approx(1.0));
  auto h = midpoint_image_probe(ProbeMap::homothety(Exponent(2), 2.0), 1.0, 0.0, 0.25, o);
  CHECK(h.failures == 0);
  CHECK(h.stretch == doctest::Approx(2.0));
  auto f = midpoint_image_probe(ProbeMap::formal_identity(Exponent(4), Exponent(2)), 4.0, 0.1,
                                0.25, o);
  CHECK_FALSE(f.inconclusive);
  CHECK(f.distance > 4.0);
  CHECK(f.stretch >= 1.0);
  CHECK(f.failure_rate >= 0.0);
  CHECK(f.failure_rate <= 1.0);
}

TEST_CASE("smallest admissible split misses a random member") {
  // sampled member at p = 1.5, δ = 0.1; v has mass past the smallest N
  const SeqVector v({{1, -0.39382916762719766}, {2, -0.14240963178863941}});
  auto q = make(v, -v, 0.1, NormKind::original, 1.5);
  const SeqVector z({{2, 0.17328357143522241}, {6, 0.0029366957436599947}});
  const double nv = oracle::norm(v, 1.5);
  CHECK(oracle::norm(v - z, 1.5) <= 1.1 * nv);
  CHECK(oracle::norm(v + z, 1.5) <= 1.1 * nv);
  CHECK(midpoint_membership(q, q.center() + z));

  const Index smallest = outer_split_index(v, q.e, q.delta / 8.0);
  CHECK(smallest == 1);
  const double tail = oracle::norm(z.restricted(2, 6), 1.5);
  CHECK(tail > 2.0 * std::pow(0.1, 1.0 / 1.5) * nv);
  auto viol = outer_split_check(q, z, smallest);
  REQUIRE(viol.size() == 1);
  CHECK(viol[0].check == "tail part");
  CHECK(outer_split_check(q, z, v.max_support()).empty());

  CertificateOptions o;
  o.outer_split = OuterSplit::smallest;
  CHECK(outer_compact_certificate(q, o).n_used == 1);
  o.outer_split = OuterSplit::full_support;
  CHECK(outer_compact_certificate(q, o).n_used == 2);
}
