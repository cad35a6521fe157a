#ifndef MEMF_ISHIKAWA_HPP
#define MEMF_ISHIKAWA_HPP

#include <vector>

#include "memf/adjacency.hpp"
#include "memf/common.hpp"
#include "memf/energy.hpp"
#include "memf/repar.hpp"

namespace memf {

// Cross capacities of one MRF edge (i, j) in its stored orientation.
// forward.at(lam, mu)  = capacity of the edge from U_{i:lam} to U_{j:mu},
// backward.at(mu, lam) = capacity of the edge from U_{j:mu} to U_{i:lam},
// with levels in [1, ell-1].
struct EdgeCapacities {
  LevelMatrix forward;
  LevelMatrix backward;
};

// Ishikawa-graph parameterization of a multi-label energy. Each vertex is a
// column of ell-1 internal nodes; column[v][lam] is the capacity of the
// downward edge below level lam+1 (the edge whose presence in a cut assigns
// label lam). Upward edges have infinite capacity and are implicit — they are
// never stored. `constant` accumulates the additive offset produced by
// normalizations, so that for every labeling
//   evaluate_energy(model, x) == cut_cost(caps, x) + constant.
struct IshikawaCapacities {
  int num_vertices = 0;
  int num_labels = 0;
  std::vector<GridEdge> edges;
  std::vector<std::vector<Value>> column;  // [vertex][level 0..ell-1]
  std::vector<EdgeCapacities> cross;       // parallel to edges
  Value constant = 0;

  std::size_t value_count() const {
    std::size_t n = 0;
    for (const auto& c : column) n += c.size();
    for (const auto& e : cross) n += e.forward.value_count() + e.backward.value_count();
    return n;
  }
};

// Canonical construction from a submodular model. Cross capacities are the
// consecutive second differences, placed entirely in the stored orientation
// (the reverse orientation starts at zero and is populated only by residuals
// of pushed flow). Row/column residues of each pairwise table are absorbed
// into the unaries, and each column is shifted so its minimum is zero, with
// all shifts accumulated into `constant`.
// Throws SubmodularityError naming (i, j, lam, mu) on a negative second
// difference.
IshikawaCapacities build_capacities(const EnergyModel& model);

// Inverse direction: node weights are the column capacities and each edge
// weight is the double sum of cross capacities strictly above-left /
// below-right of the label pair. The result satisfies
// evaluate_params(result, x) == cut_cost(caps, x) for every labeling.
MultiLabelParams recover_params(const IshikawaCapacities& caps);

// Total capacity crossing the cut induced by x. Infinite upward edges never
// cross (they point from the sink side toward the source side).
Value cut_cost(const IshikawaCapacities& caps, const Labeling& x);

// Residual graph state of the full-graph reference solver.
struct ResidualState {
  IshikawaCapacities caps;
  long augmentations = 0;
  Value total_flow = 0;
};

struct ReferenceResult {
  ResidualState state;
  Labeling labeling;
  Value flow_total = 0;
  long augmentations = 0;
  std::size_t stored_values = 0;  // persistent residual storage incl. search arrays
};

// Edmonds-Karp on the full residual Ishikawa graph: BFS shortest augmenting
// paths with unit distance per hop, infinite upward edges implicit and never
// saturable. Terminates because all capacities are integral. The mid-scale
// oracle: flow_total + caps.constant equals the minimal energy.
ReferenceResult reference_maxflow(const IshikawaCapacities& caps);

// Persistent storage of the reference solver for these capacities: the dense
// residual graph plus its search arrays. The peak is reached at construction,
// so it can be measured without running the solve.
std::size_t reference_stored_values(const IshikawaCapacities& caps);

// Labels from source reachability on a residual state with no augmenting
// path: x_i is the unique level whose downward edge separates the reachable
// part of column i from the unreachable part. Throws InternalInvariantError
// if reachability is not upward-closed per column or the terminal is
// reachable.
Labeling labeling_from_reachability(const ResidualState& residual);

// Existence of a source-to-terminal path through positive residual edges
// (used to cross-check the reduced search structures on reconstructed
// residuals).
bool augmenting_path_exists(const IshikawaCapacities& residual);

}  // namespace memf

#endif
