#ifndef MEMF_MEMF_POLY_HPP
#define MEMF_MEMF_POLY_HPP

#include <optional>
#include <set>
#include <vector>

#include "memf/adjacency.hpp"
#include "memf/common.hpp"
#include "memf/flowcodec.hpp"
#include "memf/ishikawa.hpp"
#include "memf/report.hpp"

namespace memf {

// Lowest positive cross edge out of one node toward one neighbor column:
// the target level and its exact residual capacity. target == 0 means absent
// (cross levels are 1-based).
struct CrossRecord {
  int target = 0;
  Value cap = 0;

  bool present() const { return target != 0; }
};

// Residual view kept by the polynomial solver: mutable column capacities plus
// one lowest-cross-edge record per (node, directed neighbor). Everything else
// about the cross edges lives implicitly in the flow store.
class LowerGraph {
 public:
  LowerGraph(const IshikawaCapacities& caps, const Adjacency& adj);

  // Re-derives both directions' records of one edge from reconstructed
  // residual capacities.
  void rebuild_edge_records(int edge, const LevelMatrix& res_forward,
                            const LevelMatrix& res_backward);

  // Reverse-residual bookkeeping after a push of alpha landed at `target` in
  // the opposite direction: inserts or extends the record at (directed_id,
  // row_level) when the new edge is at or below the current lowest.
  void note_reverse_residual(int directed_id, int row_level, int target, Value alpha);

  const CrossRecord& record(int directed_id, int row_level) const {
    return records_[directed_id][row_level - 1];
  }
  CrossRecord& record(int directed_id, int row_level) {
    return records_[directed_id][row_level - 1];
  }

  std::vector<std::vector<Value>> column;

  long present_records() const { return present_records_; }
  std::size_t stored_value_count() const;

 private:
  std::vector<std::vector<CrossRecord>> records_;  // [directed id][row level - 1]
  long present_records_ = 0;
};

struct PathHop {
  enum class Kind { kSource, kDown, kUp, kCross, kSink };
  Kind kind;
  int vertex;             // column of the node this hop arrives at (or exits, for kSink)
  int level;              // arrival level (unused for kSink)
  int directed_edge = -1; // kCross only
  int from_level = 0;     // kCross only
};

// Augmenting path from node 0 to node 1. `length` counts finite edges only;
// infinite upward hops contribute zero.
struct AugPath {
  std::vector<PathHop> hops;
  int length = 0;
};

// Shortest-augmenting-path max-flow over the lower-graph, with exit-flow
// bookkeeping instead of a stored residual graph. Distances treat infinite
// upward edges as zero cost and every finite edge as cost one (0-1 BFS).
class PolySolver {
 public:
  explicit PolySolver(const EnergyModel& model, bool diagnostics = false);
  explicit PolySolver(const IshikawaCapacities& caps, bool diagnostics = false);

  // One augmentation; false when no augmenting path remains.
  bool step();

  std::optional<AugPath> find_shortest_path();
  Value augment(const AugPath& path);

  // Existence-only search; does not touch solver state.
  bool has_augmenting_path() const;

  Labeling read_labeling() const;
  SolveReport report(bool want_labeling = true) const;

  const IshikawaCapacities& initial() const { return initial_; }
  const Adjacency& adjacency() const { return adj_; }
  const LowerGraph& lower() const { return lower_; }
  const FlowStore& store() const { return store_; }
  long augmentations() const { return augmentations_; }
  long reconstructions() const { return reconstructions_; }

  // Diagnostics: post-search distances d(0, v) per internal node, recorded by
  // the most recent find_shortest_path, with kUnreachableDistance for nodes
  // the search never settled.
  static constexpr Value kUnreachableDistance = std::numeric_limits<Value>::max();
  const std::vector<Value>& last_distances() const { return last_distances_; }

 private:
  int node_id(int v, int lam) const { return v * (initial_.num_labels - 1) + (lam - 1); }
  void note_stored();

  IshikawaCapacities initial_;
  Adjacency adj_;
  LowerGraph lower_;
  FlowStore store_;
  bool diagnostics_;
  long augmentations_ = 0;
  long reconstructions_ = 0;
  long reconstruction_fallbacks_ = 0;
  std::size_t stored_peak_ = 0;
  std::size_t transient_peak_ = 0;
  std::vector<Value> last_distances_;
};

SolveReport solve_poly(const EnergyModel& model, bool diagnostics = false,
                       bool want_labeling = true);

}  // namespace memf

#endif
