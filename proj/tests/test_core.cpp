#include <array>

#include "doctest.h"
#include "jamesgeo/core.hpp"
#include "oracles.hpp"

using namespace jamesgeo;

TEST_CASE("exponent conjugate") {
  for (double p : {1.5, 2.0, 3.0, 1.01, 17.0}) {
    Exponent e(p);
    CHECK(1.0 / e.p() + 1.0 / e.q() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.conjugate().q() == doctest::Approx(p).epsilon(1e-14));
  }
  CHECK_THROWS_AS(Exponent(1.0), PreconditionError);
  CHECK_THROWS_AS(Exponent(0.5), PreconditionError);
  CHECK_THROWS_AS(Exponent(std::nan("")), PreconditionError);
}

TEST_CASE("sparse form purges zeros and merges duplicates") {
  SeqVector x({{3, 1.0}, {1, 2.0}, {3, -1.0}, {5, 0.0}});
  REQUIRE(x.nnz() == 1);
  CHECK(x.min_support() == 1);
  CHECK(x[1] == 2.0);
  CHECK(x[3] == 0.0);
  CHECK((x - x).is_zero());
  CHECK_THROWS_AS(SeqVector({{0, std::numeric_limits<double>::infinity()}}), PreconditionError);
  CHECK_THROWS_AS(SeqVector().max_support(), PreconditionError);
}

TEST_CASE("precedes") {
  CHECK(precedes(SeqVector::unit(1), SeqVector::unit(2)));
  CHECK_FALSE(precedes(SeqVector::unit(1) + SeqVector::unit(5), SeqVector::unit(3)));
  CHECK_FALSE(precedes(SeqVector::unit(0), SeqVector::unit(0)));
  CHECK_THROWS_AS(precedes(SeqVector(), SeqVector::unit(0)), PreconditionError);
}

TEST_CASE("precedes is irreflexive and transitive on random vectors") {
  oracle::Gen g(11);
  for (int t = 0; t < 300; ++t) {
    SeqVector a = g.vector(g.below(6), 1 + g.below(4));
    SeqVector b = g.vector(g.below(6), 1 + g.below(4));
    SeqVector c = g.vector(g.below(6), 1 + g.below(4));
    CHECK_FALSE(precedes(a, a));
    if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
  }
}

TEST_CASE("block_split") {
  DualFunctional f({{0, 1.0}, {3, 1.0}});
  const std::array<Index, 1> cut{2};
  auto blocks = block_split(f, std::span<const Index>(cut));
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == DualFunctional::unit(0));
  CHECK(blocks[1] == DualFunctional::unit(3));

  auto one = block_split(DualFunctional::unit(1), std::span<const Index>());
  REQUIRE(one.size() == 1);
  CHECK(one[0] == DualFunctional::unit(1));

  const std::array<Index, 2> bad{3, 3};
  CHECK_THROWS_AS(block_split(f, std::span<const Index>(bad)), PreconditionError);
}

TEST_CASE("block_split partitions into successive blocks") {
  oracle::Gen g(12);
  for (int t = 0; t < 200; ++t) {
    DualFunctional f = g.functional(0, 12);
    std::vector<Index> cuts;
    for (Index i = 0; i < 14; ++i) {
      if (g.coin(0.3)) cuts.push_back(i);
    }
    auto blocks = block_split(f, std::span<const Index>(cuts));
    DualFunctional sum;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      sum = sum + blocks[i];
      if (i > 0) CHECK(precedes(blocks[i - 1], blocks[i]));
    }
    CHECK(sum == f);
  }
}

TEST_CASE("direct sum and graph vertex validation") {
  CHECK_THROWS_AS(DirectSumVector({}), PreconditionError);
  DirectSumVector a({{Exponent(2), SeqVector::unit(1)}, {Exponent(4), SeqVector()}});
  DirectSumVector b({{Exponent(2), SeqVector::unit(1)}, {Exponent(4), SeqVector::unit(2)}});
  DirectSumVector d = a - b;
  CHECK(d.components()[0].vector.is_zero());
  CHECK(d.components()[1].vector == -SeqVector::unit(2));
  DirectSumVector c({{Exponent(3), SeqVector()}, {Exponent(4), SeqVector()}});
  CHECK_THROWS_AS(a - c, PreconditionError);

  CHECK_NOTHROW(GraphVertex({1, 3, 7}));
  CHECK_THROWS_AS(GraphVertex({}), PreconditionError);
  CHECK_THROWS_AS(GraphVertex({2, 2}), PreconditionError);
  CHECK(GraphVertex({1, 2}) < GraphVertex({1, 3}));
}

TEST_CASE("pairing") {
  DualFunctional f({{0, 2.0}, {4, -1.0}});
  SeqVector x({{0, 3.0}, {2, 5.0}, {4, 1.0}});
  CHECK(pairing(f, x) == 5.0);
}
