#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "memf/instance_io.hpp"
#include "testutil.hpp"

using namespace memf;

TEST_CASE("minimal instance") {
  EnergyModel model = parse_instance("mrf 1 0 2\nunary 0 0 0\n");
  CHECK(model.num_vertices == 1);
  CHECK(model.num_labels == 2);
  CHECK(model.edges.empty());
  CHECK(model.unary[0] == std::vector<Value>{0, 0});
}

TEST_CASE("functional pairwise specs stay symbolic") {
  EnergyModel model = parse_instance(
      "mrf 2 1 3\n"
      "unary 0 1 2 3\n"
      "unary 1 4 5 6\n"
      "edge 0 1 fn 3 quadratic\n");
  REQUIRE(model.pairwise.size() == 1);
  CHECK_FALSE(model.pairwise[0].is_table);
  CHECK(model.pairwise_at(0, 0, 2) == 12);  // 3 * (0-2)^2
  CHECK(model.pairwise_at(0, 2, 1) == 3);
}

TEST_CASE("explicit tables and comments") {
  EnergyModel model = parse_instance(
      "# a comment line\n"
      "mrf 2 1 2   # trailing comment\n"
      "unary 1 7 8\n"
      "unary 0 1 2\n"
      "edge 0 1 table 0 1 1 0\n");
  CHECK(model.unary[0] == std::vector<Value>{1, 2});
  CHECK(model.unary[1] == std::vector<Value>{7, 8});
  CHECK(model.pairwise_at(0, 0, 1) == 1);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("bad header") {
    CHECK_THROWS_WITH_AS(parse_instance("mrx 1 0 2\n"), doctest::Contains("line 1"),
                         InvalidArgumentError);
  }
  SUBCASE("too few labels") {
    CHECK_THROWS_AS(parse_instance("mrf 1 0 1\nunary 0 0\n"), InvalidArgumentError);
  }
  SUBCASE("non-integer value") {
    CHECK_THROWS_WITH_AS(parse_instance("mrf 1 0 2\nunary 0 0 x\n"),
                         doctest::Contains("line 2"), InvalidArgumentError);
  }
  SUBCASE("duplicate edge") {
    CHECK_THROWS_AS(parse_instance("mrf 2 2 2\n"
                                   "unary 0 0 0\n"
                                   "unary 1 0 0\n"
                                   "edge 0 1 fn 1 linear\n"
                                   "edge 1 0 fn 1 linear\n"),
                    InvalidArgumentError);
  }
  SUBCASE("duplicate unary") {
    CHECK_THROWS_WITH_AS(parse_instance("mrf 2 0 2\nunary 0 0 0\nunary 0 1 1\n"),
                         doctest::Contains("line 3"), InvalidArgumentError);
  }
  SUBCASE("huber without delta") {
    CHECK_THROWS_AS(parse_instance("mrf 2 1 2\n"
                                   "unary 0 0 0\n"
                                   "unary 1 0 0\n"
                                   "edge 0 1 fn 1 huber\n"),
                    InvalidArgumentError);
  }
  SUBCASE("trailing junk") {
    CHECK_THROWS_AS(parse_instance("mrf 1 0 2\nunary 0 0 0\nextra\n"), InvalidArgumentError);
  }
}

TEST_CASE("serialization round-trips and is canonical") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    int ell = 2 + static_cast<int>(rng.below(4));
    EnergyModel model = testutil::random_submodular_model(rng, 4, ell, {{0, 1}, {1, 2}, {2, 3}});
    if (trial % 2 == 0) {
      model.pairwise[1] = PairwiseSpec::fn(3, Regularizer::kHuber, 2);
    }
    std::string text = serialize_instance(model);
    EnergyModel parsed = parse_instance(text);
    CHECK(serialize_instance(parsed) == text);
    testutil::for_each_labeling(4, ell, [&](const Labeling& x) {
      CHECK(evaluate_energy(parsed, x) == evaluate_energy(model, x));
    });
  }
}

TEST_CASE("grid generation serializes reproducibly") {
  EnergyModel a = generate_grid_instance(3, 2, 3, Regularizer::kLinear, 2, 9, 5);
  EnergyModel b = generate_grid_instance(3, 2, 3, Regularizer::kLinear, 2, 9, 5);
  CHECK(serialize_instance(a) == serialize_instance(b));
}
