#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "memf/energy.hpp"
#include "memf/instance_io.hpp"
#include "testutil.hpp"

using namespace memf;

namespace {

EnergyModel two_vertex_model() {
  // theta_1 = (0,3), theta_2 = (2,0), theta_12 = 2|lam - mu|, ell = 2.
  EnergyModel model;
  model.num_vertices = 2;
  model.num_labels = 2;
  model.unary = {{0, 3}, {2, 0}};
  model.edges = {{0, 1}};
  model.pairwise = {PairwiseSpec::fn(2, Regularizer::kLinear)};
  return model;
}

// Full quadruple submodularity condition, the oracle the consecutive check is
// validated against.
bool submodular_all_quadruples(const PairwiseSpec& spec, int ell) {
  for (int lam = 0; lam < ell; ++lam) {
    for (int lamp = lam + 1; lamp < ell; ++lamp) {
      for (int mu = 0; mu < ell; ++mu) {
        for (int mup = mu + 1; mup < ell; ++mup) {
          Value q = spec.eval(lamp, mu, ell) + spec.eval(lam, mup, ell) -
                    spec.eval(lam, mu, ell) - spec.eval(lamp, mup, ell);
          if (q < 0) return false;
        }
      }
    }
  }
  return true;
}

PairwiseSpec potts_table(int ell, Value w = 1) {
  std::vector<Value> t(static_cast<std::size_t>(ell) * ell, w);
  for (int lam = 0; lam < ell; ++lam) t[static_cast<std::size_t>(lam) * ell + lam] = 0;
  return PairwiseSpec::table(std::move(t));
}

}  // namespace

TEST_CASE("energy of the all-zero model is zero") {
  EnergyModel model;
  model.num_vertices = 3;
  model.num_labels = 3;
  model.unary = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  model.edges = {{0, 1}, {1, 2}};
  model.pairwise = {PairwiseSpec::table(std::vector<Value>(9, 0)),
                    PairwiseSpec::fn(0, Regularizer::kQuadratic)};
  testutil::for_each_labeling(3, 3, [&](const Labeling& x) {
    CHECK(evaluate_energy(model, x) == 0);
  });
}

TEST_CASE("energy by direct substitution") {
  EnergyModel model = two_vertex_model();
  CHECK(evaluate_energy(model, {0, 1}) == 2);
  CHECK(evaluate_energy(model, {1, 0}) == 7);
}

TEST_CASE("energy rejects malformed labelings") {
  EnergyModel model = two_vertex_model();
  CHECK_THROWS_AS(evaluate_energy(model, {0}), InvalidArgumentError);
  CHECK_THROWS_AS(evaluate_energy(model, {0, 2}), InvalidArgumentError);
}

TEST_CASE("unary constant shift moves every energy by the same amount") {
  SplitMix64 rng(11);
  EnergyModel model = testutil::random_submodular_model(rng, 3, 3, {{0, 1}, {1, 2}});
  EnergyModel shifted = model;
  const Value c = 17;
  for (int lam = 0; lam < 3; ++lam) shifted.unary[1][lam] += c;
  testutil::for_each_labeling(3, 3, [&](const Labeling& x) {
    CHECK(evaluate_energy(shifted, x) == evaluate_energy(model, x) + c);
  });
}

TEST_CASE("regularizers are submodular for every label count up to 32") {
  for (int ell = 2; ell <= 32; ++ell) {
    CHECK(check_submodular(PairwiseSpec::fn(3, Regularizer::kLinear), ell));
    CHECK(check_submodular(PairwiseSpec::fn(2, Regularizer::kQuadratic), ell));
    for (Value delta : {1, 2, 5}) {
      CHECK(check_submodular(PairwiseSpec::fn(1, Regularizer::kHuber, delta), ell));
    }
  }
}

TEST_CASE("consecutive second differences match the full quadruple condition") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int ell = 2 + static_cast<int>(rng.below(5));
    PairwiseSpec spec = PairwiseSpec::table(testutil::random_submodular_table(rng, ell));
    CHECK(check_submodular(spec, ell));
    CHECK(submodular_all_quadruples(spec, ell));
    // Perturb one entry downward until the consecutive check fails; the full
    // condition must fail with it.
    PairwiseSpec broken = spec;
    broken.values[rng.below(broken.values.size())] += 50;
    CHECK(check_submodular(broken, ell) == submodular_all_quadruples(broken, ell));
  }
}

TEST_CASE("potts is submodular only for two labels") {
  CHECK(check_submodular(potts_table(2), 2));
  CHECK_FALSE(check_submodular(potts_table(3), 3));
  // The violated quadruple at lam=0, lam'=1, mu=1, mu'=2: 0 + 1 - 1 - 1 = -1.
  PairwiseSpec p3 = potts_table(3);
  Value q = p3.eval(1, 1, 3) + p3.eval(0, 2, 3) - p3.eval(0, 1, 3) - p3.eval(1, 2, 3);
  CHECK(q == -1);
}

TEST_CASE("brute force minimizer") {
  SUBCASE("single vertex argmin") {
    EnergyModel model;
    model.num_vertices = 1;
    model.num_labels = 3;
    model.unary = {{5, 2, 7}};
    auto [x, energy] = brute_force_minimize(model);
    CHECK(x == Labeling{1});
    CHECK(energy == 2);
  }
  SUBCASE("two vertex model enumerates all four labelings") {
    // Energies: (0,0)=2, (0,1)=2, (1,0)=7, (1,1)=3. Two minimizers tie at 2;
    // the lexicographic rule picks (0,0).
    auto [x, energy] = brute_force_minimize(two_vertex_model());
    CHECK(x == Labeling{0, 0});
    CHECK(energy == 2);
  }
  SUBCASE("ties break to the lexicographically smallest labeling") {
    EnergyModel model;
    model.num_vertices = 2;
    model.num_labels = 3;
    model.unary = {{0, 0, 0}, {0, 0, 0}};
    auto [x, energy] = brute_force_minimize(model);
    CHECK(x == Labeling{0, 0});
    CHECK(energy == 0);
  }
  SUBCASE("oversized instances raise a capacity error") {
    EnergyModel model;
    model.num_vertices = 30;
    model.num_labels = 4;
    model.unary.assign(30, std::vector<Value>(4, 0));
    CHECK_THROWS_AS(brute_force_minimize(model), CapacityError);
  }
}

TEST_CASE("grid generator shapes") {
  EnergyModel g1 = generate_grid_instance(1, 1, 3, Regularizer::kQuadratic, 1, 10, 7);
  CHECK(g1.num_vertices == 1);
  CHECK(g1.edges.empty());

  EnergyModel g33 = generate_grid_instance(3, 3, 3, Regularizer::kQuadratic, 1, 10, 7);
  CHECK(g33.num_vertices == 9);
  CHECK(g33.edges.size() == 12);

  EnergyModel g21 = generate_grid_instance(2, 1, 3, Regularizer::kQuadratic, 1, 10, 7);
  CHECK(g21.num_vertices == 2);
  CHECK(g21.edges.size() == 1);
}

TEST_CASE("grid generator is reproducible and seed-sensitive") {
  EnergyModel a = generate_grid_instance(4, 3, 5, Regularizer::kHuber, 2, 20, 42, 2);
  EnergyModel b = generate_grid_instance(4, 3, 5, Regularizer::kHuber, 2, 20, 42, 2);
  CHECK(serialize_instance(a) == serialize_instance(b));
  EnergyModel c = generate_grid_instance(4, 3, 5, Regularizer::kHuber, 2, 20, 43, 2);
  CHECK(serialize_instance(a) != serialize_instance(c));
}

TEST_CASE("doubled huber values") {
  PairwiseSpec h = PairwiseSpec::fn(1, Regularizer::kHuber, 2);
  int ell = 6;
  CHECK(h.eval(0, 0, ell) == 0);
  CHECK(h.eval(0, 1, ell) == 1);   // d=1 <= delta: d^2
  CHECK(h.eval(0, 2, ell) == 4);   // d=2 == delta: d^2
  CHECK(h.eval(0, 3, ell) == 8);   // d=3: 2*2*3 - 4
  CHECK(h.eval(5, 0, ell) == 16);  // d=5: 2*2*5 - 4
}

TEST_CASE("model validation catches structural errors") {
  EnergyModel model = two_vertex_model();
  SUBCASE("duplicate edge") {
    model.edges.push_back({1, 0});
    model.pairwise.push_back(PairwiseSpec::fn(1, Regularizer::kLinear));
    CHECK_THROWS_AS(validate_model(model), InvalidArgumentError);
  }
  SUBCASE("endpoint out of range") {
    model.edges[0].j = 9;
    CHECK_THROWS_AS(validate_model(model), InvalidArgumentError);
  }
  SUBCASE("wrong unary width") {
    model.unary[0] = {1, 2, 3};
    CHECK_THROWS_AS(validate_model(model), InvalidArgumentError);
  }
  SUBCASE("bad table dimensions") {
    model.pairwise[0] = PairwiseSpec::table({0, 1, 1});
    CHECK_THROWS_AS(validate_model(model), InvalidArgumentError);
  }
  SUBCASE("huber delta below one") {
    model.pairwise[0] = PairwiseSpec::fn(1, Regularizer::kHuber, 0);
    CHECK_THROWS_AS(validate_model(model), InvalidArgumentError);
  }
}
