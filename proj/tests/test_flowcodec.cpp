#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "memf/flowcodec.hpp"
#include "testutil.hpp"

using namespace memf;

namespace {

// Two-vertex capacities with one edge; columns tall enough never to block
// loops in the driver tests.
IshikawaCapacities two_vertex_caps(int ell, const LevelMatrix& fwd, const LevelMatrix& bwd,
                                   Value column_fill = 50) {
  IshikawaCapacities caps;
  caps.num_vertices = 2;
  caps.num_labels = ell;
  caps.edges = {{0, 1}};
  caps.column = {std::vector<Value>(ell, column_fill), std::vector<Value>(ell, column_fill)};
  caps.cross = {{fwd, bwd}};
  return caps;
}

LevelMatrix random_matrix(SplitMix64& rng, int ell, Value max_cap) {
  LevelMatrix m(ell);
  for (int a = 1; a <= ell - 1; ++a) {
    for (int b = 1; b <= ell - 1; ++b) {
      m.at(a, b) = static_cast<Value>(rng.below(max_cap + 1));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("column flows recursion") {
  SUBCASE("no neighbors: the source flow rides down the whole column") {
    Adjacency adj(1, {});
    FlowStore store = FlowStore::zero(1, 0, 4);
    store.source_flow[0] = 7;
    CHECK(column_flows(store, adj, 0, 4) == std::vector<Value>{7, 7, 7, 7});
  }
  SUBCASE("exit flows peel off level by level") {
    Adjacency adj(2, {{0, 1}});
    FlowStore store = FlowStore::zero(2, 1, 4);
    store.source_flow[0] = 5;
    store.exit[0] = {0, -1, 2};  // Sigma at levels 1..3
    CHECK(column_flows(store, adj, 0, 4) == std::vector<Value>{4, 4, 3, 5});
  }
  SUBCASE("zero store gives zero flows") {
    Adjacency adj(2, {{0, 1}});
    FlowStore store = FlowStore::zero(2, 1, 4);
    CHECK(column_flows(store, adj, 0, 4) == std::vector<Value>(4, 0));
  }
}

TEST_CASE("recording cross flow touches exactly two entries") {
  Adjacency adj(2, {{0, 1}});
  FlowStore store = FlowStore::zero(2, 1, 5);
  record_cross_flow(store, 0, true, 3, 1, 4);
  CHECK(store.exit_at(0, 3) == 4);
  CHECK(store.exit_at(1, 1) == -4);
  CHECK(store.exit_at(0, 1) == 0);
  CHECK(store.exit_at(0, 2) == 0);

  SUBCASE("zero amount is a no-op") {
    FlowStore copy = store;
    record_cross_flow(store, 0, true, 2, 2, 0);
    CHECK(store.exit == copy.exit);
  }
  SUBCASE("inverse pushes cancel") {
    FlowStore copy = store;
    record_cross_flow(store, 0, false, 2, 3, 9);
    record_cross_flow(store, 0, false, 2, 3, -9);
    CHECK(store.exit == copy.exit);
  }
  SUBCASE("levels out of range are rejected") {
    CHECK_THROWS_AS(record_cross_flow(store, 0, true, 0, 1, 1), InvalidArgumentError);
    CHECK_THROWS_AS(record_cross_flow(store, 0, true, 1, 5, 1), InvalidArgumentError);
  }
}

TEST_CASE("reconstruction with zero exit-flows returns the initial capacities") {
  SplitMix64 rng(2);
  LevelMatrix fwd = random_matrix(rng, 4, 6);
  LevelMatrix bwd = random_matrix(rng, 4, 6);
  std::vector<Value> zero(3, 0);
  EdgeResidual er = reconstruct_edge(fwd, bwd, zero, zero);
  CHECK(er.forward == fwd);
  CHECK(er.backward == bwd);
  CHECK_FALSE(er.used_fallback);
}

TEST_CASE("reconstruction of a uniquely routable store") {
  // Initial: forward (1,1)=3 and (2,2)=5, everything else zero.
  LevelMatrix fwd(3), bwd(3);
  fwd.at(1, 1) = 3;
  fwd.at(2, 2) = 5;
  std::vector<Value> sigma_fwd = {2, 1};
  std::vector<Value> sigma_bwd = {-2, -1};

  // Oracle: enumeration of compatible flows finds exactly one routing.
  auto flows = testutil::enumerate_compatible_flows(fwd, bwd, sigma_fwd, sigma_bwd);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0].at(1, 1) == 2);
  CHECK(flows[0].at(2, 2) == 1);

  EdgeResidual er = reconstruct_edge(fwd, bwd, sigma_fwd, sigma_bwd);
  CHECK(er.flow.net == flows[0]);
  CHECK(er.forward.at(1, 1) == 1);
  CHECK(er.forward.at(2, 2) == 4);
  CHECK(er.backward.at(1, 1) == 2);
  CHECK(er.backward.at(2, 2) == 1);
}

TEST_CASE("ambiguous routings are all energy-equivalent") {
  // All four forward caps 3; two units must cross. Two distinct routings
  // exist; whichever is returned, the cut costs agree on all label pairs.
  LevelMatrix fwd(3), bwd(3);
  for (int a = 1; a <= 2; ++a) {
    for (int b = 1; b <= 2; ++b) fwd.at(a, b) = 3;
  }
  std::vector<Value> sigma_fwd = {1, 1};
  std::vector<Value> sigma_bwd = {-1, -1};
  auto flows = testutil::enumerate_compatible_flows(fwd, bwd, sigma_fwd, sigma_bwd);
  CHECK(flows.size() >= 2);

  EdgeResidual er = reconstruct_edge(fwd, bwd, sigma_fwd, sigma_bwd);
  bool matched = false;
  for (const LevelMatrix& f : flows) matched = matched || f == er.flow.net;
  CHECK(matched);

  IshikawaCapacities start = two_vertex_caps(3, fwd, bwd);
  Adjacency adj(2, start.edges);
  FlowStore store = FlowStore::zero(2, 1, 3);
  store.exit[0] = sigma_fwd;
  store.exit[1] = sigma_bwd;
  testutil::for_each_labeling(2, 3, [&](const Labeling& x) {
    Value cost0 =
        cut_cost(testutil::residual_under_flow(start, store, adj, flows[0]), x);
    for (const LevelMatrix& f : flows) {
      CHECK(cut_cost(testutil::residual_under_flow(start, store, adj, f), x) == cost0);
    }
  });
}

TEST_CASE("flow-encoding equivalence on randomized legal stores") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    int ell = 2 + static_cast<int>(rng.below(4));  // up to 5 labels
    LevelMatrix fwd = random_matrix(rng, ell, 3);
    LevelMatrix bwd(ell);  // one-directional initial capacities
    testutil::TwoVertexDriver driver(two_vertex_caps(ell, fwd, bwd, 8));
    int ops = 1 + static_cast<int>(rng.below(6));
    for (int k = 0; k < ops; ++k) {
      if (!driver.random_loop(rng)) break;
      if (rng.below(3) == 0) driver.flush();
    }
    driver.flush();

    auto flows = testutil::enumerate_compatible_flows(fwd, bwd, driver.store.exit[0],
                                                      driver.store.exit[1]);
    REQUIRE(!flows.empty());

    // Our reconstruction must be one of them, and every pair of compatible
    // reconstructions must produce identical cut costs on all labelings.
    EdgeResidual er = reconstruct_edge(fwd, bwd, driver.store.exit[0], driver.store.exit[1]);
    bool matched = false;
    for (const LevelMatrix& f : flows) matched = matched || f == er.flow.net;
    CHECK(matched);

    testutil::for_each_labeling(2, ell, [&](const Labeling& x) {
      Value cost0 = cut_cost(
          testutil::residual_under_flow(driver.start, driver.store, driver.adj, flows[0]), x);
      for (const LevelMatrix& f : flows) {
        CHECK(cut_cost(testutil::residual_under_flow(driver.start, driver.store, driver.adj, f),
                       x) == cost0);
      }
      // The driver's true residual is equivalent too.
      CHECK(cut_cost(driver.caps, x) == cost0);
    });

    // The difference of two compatible flows is a null flow: conservation at
    // every node including source and terminal. With identical column flows
    // that reduces to zero row and column sums of the difference.
    for (std::size_t fi = 1; fi < flows.size(); ++fi) {
      for (int a = 1; a <= ell - 1; ++a) {
        Value row = 0, col = 0;
        for (int b = 1; b <= ell - 1; ++b) {
          row += flows[fi].at(a, b) - flows[0].at(a, b);
          col += flows[fi].at(b, a) - flows[0].at(b, a);
        }
        CHECK(row == 0);
        CHECK(col == 0);
      }
    }

    // Conservation at internal nodes: column flows and the reconstructed
    // cross flows balance at every level.
    for (int v = 0; v < 2; ++v) {
      std::vector<Value> psi = column_flows(driver.store, driver.adj, v, ell);
      for (int lam = 1; lam <= ell - 1; ++lam) {
        Value outgoing = 0;
        for (int b = 1; b <= ell - 1; ++b) {
          outgoing += v == 0 ? er.flow.net.at(lam, b) : -er.flow.net.at(b, lam);
        }
        CHECK(psi[lam] - psi[lam - 1] - outgoing == 0);
      }
      CHECK(psi[0] >= 0);
    }

    // Exit-flow storage stays at 2(ell-1) values per undirected edge.
    CHECK(driver.store.exit[0].size() + driver.store.exit[1].size() ==
          2 * static_cast<std::size_t>(ell - 1));
  }
}

TEST_CASE("whole-graph residual from a store") {
  SUBCASE("zero store reproduces the initial graph") {
    SplitMix64 rng(4);
    LevelMatrix fwd = random_matrix(rng, 3, 4);
    IshikawaCapacities start = two_vertex_caps(3, fwd, LevelMatrix(3), 5);
    Adjacency adj(2, start.edges);
    FlowStore store = FlowStore::zero(2, 1, 3);
    IshikawaCapacities residual = residual_from_store(start, store, adj);
    CHECK(residual.column == start.column);
    CHECK(residual.cross[0].forward == start.cross[0].forward);
  }
  SUBCASE("pure column flow drops every cut cost by the flow amount") {
    IshikawaCapacities start = two_vertex_caps(3, LevelMatrix(3), LevelMatrix(3), 5);
    Adjacency adj(2, start.edges);
    FlowStore store = FlowStore::zero(2, 1, 3);
    store.source_flow[0] = 2;
    store.total_flow = 2;
    IshikawaCapacities residual = residual_from_store(start, store, adj);
    CHECK(residual.column[0] == std::vector<Value>{3, 3, 3});
    testutil::for_each_labeling(2, 3, [&](const Labeling& x) {
      CHECK(cut_cost(residual, x) == cut_cost(start, x) - store.total_flow);
    });
  }
  SUBCASE("legal stores yield residuals whose cut costs drop by total_flow") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      int ell = 2 + static_cast<int>(rng.below(3));
      LevelMatrix fwd = random_matrix(rng, ell, 3);
      testutil::TwoVertexDriver driver(two_vertex_caps(ell, fwd, LevelMatrix(ell), 7));
      for (int k = 0; k < 4; ++k) driver.random_loop(rng);
      driver.flush();
      IshikawaCapacities residual =
          residual_from_store(driver.start, driver.store, driver.adj);
      testutil::for_each_labeling(2, ell, [&](const Labeling& x) {
        CHECK(cut_cost(residual, x) ==
              cut_cost(driver.start, x) - driver.store.total_flow);
      });
    }
  }
}

TEST_CASE("corrupted stores are detected") {
  LevelMatrix fwd(3), bwd(3);
  fwd.at(1, 1) = 1;
  SUBCASE("unbalanced exit-flows") {
    CHECK_THROWS_AS(reconstruct_edge(fwd, bwd, {1, 0}, {0, 0}), CorruptedStoreError);
  }
  SUBCASE("supply that no arc can carry") {
    CHECK_THROWS_AS(reconstruct_edge(fwd, bwd, {0, 2}, {-2, 0}), CorruptedStoreError);
  }
}
