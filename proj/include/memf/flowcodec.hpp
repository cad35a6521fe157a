#ifndef MEMF_FLOWCODEC_HPP
#define MEMF_FLOWCODEC_HPP

#include <vector>

#include "memf/adjacency.hpp"
#include "memf/common.hpp"
#include "memf/ishikawa.hpp"

namespace memf {

// The O(ell)-per-edge flow record: per-vertex source-flows (flow out of the
// source into the top of each column) and per-directed-edge exit-flows
// Sigma_{ij:lam} = sum over mu of the cross flow leaving U_{i:lam} toward
// column j. Together with the initial capacities these determine the residual
// graph up to a null flow; per-cross-edge flow values are never stored.
struct FlowStore {
  std::vector<Value> source_flow;        // per vertex
  std::vector<std::vector<Value>> exit;  // [directed edge id][level-1], ell-1 entries
  Value total_flow = 0;

  static FlowStore zero(int num_vertices, int num_edges, int ell) {
    FlowStore s;
    s.source_flow.assign(num_vertices, 0);
    s.exit.assign(static_cast<std::size_t>(2) * num_edges, std::vector<Value>(ell - 1, 0));
    return s;
  }

  Value exit_at(int directed_id, int lam) const { return exit[directed_id][lam - 1]; }

  std::size_t value_count() const {
    std::size_t n = source_flow.size() + 1;
    for (const auto& e : exit) n += e.size();
    return n;
  }
};

// Anti-symmetric per-cross-edge flow amounts of one undirected edge, oriented
// with the stored endpoints: net.at(lam, mu) is the flow from U_{i:lam} to
// U_{j:mu}; the reverse direction carries its negation.
struct FlowDelta {
  LevelMatrix net;
};

// Records a push of `alpha` across one cross edge: the exit-flow at the from
// side level gains alpha, the one at the to side level loses alpha. Nothing
// else is touched; alpha may be negative for reverse pushes.
void record_cross_flow(FlowStore& store, int edge, bool from_forward_side, int lam, int mu,
                       Value alpha);

// Top-down recovery of the column flows of vertex v from its source-flow:
// psi[ell-1] = source_flow[v], psi[lam-1] = psi[lam] - sum of outgoing
// exit-flows at level lam. Returns ell entries, levels 0..ell-1.
std::vector<Value> column_flows(const FlowStore& store, const Adjacency& adj, int v, int ell);

struct EdgeResidual {
  LevelMatrix forward;   // residual caps from side i (stored orientation)
  LevelMatrix backward;  // residual caps from side j
  FlowDelta flow;        // the reconstructed net flow
  bool used_fallback = false;
  std::size_t transient_values = 0;
};

// Recovers nonnegative residual cross capacities of one edge from its initial
// capacities and exit-flows by routing every positive exit-flow (supply) to a
// negative one (demand) through the initial arcs. A greedy pass pairs
// supplies with demands in descending level order through direct arcs; any
// remaining supply falls back to BFS augmenting paths on the small network.
// Unsaturated supply after the fallback signals corrupted bookkeeping.
EdgeResidual reconstruct_edge(const LevelMatrix& initial_forward,
                              const LevelMatrix& initial_backward,
                              const std::vector<Value>& exit_forward,
                              const std::vector<Value>& exit_backward);

// Whole-graph residual: columns from column_flows, cross capacities from
// per-edge reconstruction. Cut costs of the result differ from the initial
// graph's by exactly total_flow for every labeling.
IshikawaCapacities residual_from_store(const IshikawaCapacities& initial, const FlowStore& store,
                                       const Adjacency& adj);

}  // namespace memf

#endif
