#ifndef MEMF_MEMF_BLOCK_HPP
#define MEMF_MEMF_BLOCK_HPP

#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "memf/adjacency.hpp"
#include "memf/common.hpp"
#include "memf/flowcodec.hpp"
#include "memf/ishikawa.hpp"
#include "memf/report.hpp"

namespace memf {

// Maximal run of internal column nodes connected by positive downward
// capacities; levels lo..hi inclusive, both in [1, ell-1].
struct Block {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// Decomposes one column into blocks, bottom-up. Requires the column minimum
// (over all ell entries) to be zero — trivial augmenting paths must be
// flushed first. Throws ContractError otherwise.
std::vector<Block> build_blocks(const std::vector<Value>& column);

// Per-block arc targets toward the neighbor column: for block g, the smallest
// neighbor block index reachable through a positive cross edge leaving any
// level >= from_blocks[g].lo (upward infinite edges make every such level
// reachable from inside the block), or -1 when none. Computed as a
// suffix-minimum sweep, which makes the targets nondecreasing in g.
std::vector<int> build_block_edges(const LevelMatrix& cross, const std::vector<Block>& from_blocks,
                                   const std::vector<Block>& to_blocks);

// Subtracts a positive column minimum (a trivial augmenting path) and returns
// the amount, zero when the column already touches zero.
Value flush_trivial_column(std::vector<Value>& column);

// One atomic move between two columns: push alpha down the from column to
// level lam, across the cross edge (lam, mu), and back up the to column.
struct FlowLoop {
  int lam = 0;
  int mu = 0;
  Value alpha = 0;
};

// Applies the loop to the residual columns and cross matrices and records it
// in the store (exit-flows plus the +alpha/-alpha source-flow pair). Throws
// ContractError when the loop is not permissible.
void apply_flow_loop(std::vector<Value>& col_from, std::vector<Value>& col_to,
                     LevelMatrix& cross_from, LevelMatrix& cross_to, FlowStore& store,
                     int from_vertex, int to_vertex, int edge, bool from_forward_side,
                     const FlowLoop& loop);

// Block-graph max-flow with a recycled source tree: finds augmenting paths
// over blocks, pushes flow as a sequence of flow-loops plus a final column
// flush, then repairs blocks, arcs and tree for the columns the augmentation
// touched.
class BlockSolver {
 public:
  explicit BlockSolver(const EnergyModel& model, bool diagnostics = false);
  explicit BlockSolver(const IshikawaCapacities& caps, bool diagnostics = false);

  // One search/augment/repair round; false when no augmenting path remains.
  bool step();

  // Existence-only BFS over the current block arcs; ignores the tree.
  bool has_augmenting_path() const;

  Labeling read_labeling() const;
  SolveReport report(bool want_labeling = true) const;

  const IshikawaCapacities& initial() const { return initial_; }
  const Adjacency& adjacency() const { return adj_; }
  const FlowStore& store() const { return store_; }
  const std::vector<std::vector<Value>>& columns() const { return cols_; }
  const std::vector<std::vector<Block>>& blocks() const { return blocks_; }
  const std::vector<std::vector<int>>& arcs() const { return arcs_; }

  // Debug snapshot: per column, per block: 0 not in tree, 1 in tree, 2 orphan, 3 root.
  std::vector<std::vector<int>> debug_tree() const;
  long augmentations() const { return augmentations_; }
  long aborted_augmentations() const { return aborted_; }
  const std::vector<int>& path_lengths() const { return path_lengths_; }

 private:
  struct TreeNode {
    bool in_tree = false;
    bool orphan = false;
    bool root = false;
    int parent_col = -1;
    int parent_lo = -1;   // parent block identified by its column and a contained level
    int parent_dir = -1;  // directed edge id of the arc into this block
  };

  struct PathStep {
    int col;
    int block;
    int in_dir;  // directed edge into this block; -1 for the root step
  };

  void init_from_caps();
  int block_index_of(int col, int level) const;
  std::optional<std::vector<PathStep>> find_path();
  bool augment_path(const std::vector<PathStep>& path);
  void repair();
  bool rooted(int col, int block) const;
  void note_stored();

  IshikawaCapacities initial_;
  Adjacency adj_;
  bool diagnostics_ = false;

  std::vector<std::vector<Value>> cols_;
  FlowStore store_;
  std::vector<std::vector<Block>> blocks_;
  std::vector<std::vector<int>> arcs_;  // [directed id][from-block idx] -> to-block idx or -1
  std::vector<std::vector<TreeNode>> tree_;
  std::deque<std::pair<int, int>> frontier_;  // (column, level identifying the block)
  std::set<int> dirty_cols_;

  long augmentations_ = 0;
  long aborted_ = 0;
  long zero_progress_streak_ = 0;
  long reconstructions_ = 0;
  long reconstruction_fallbacks_ = 0;
  std::size_t stored_peak_ = 0;
  std::size_t transient_peak_ = 0;
  std::vector<int> path_lengths_;
};

SolveReport solve_block(const EnergyModel& model, bool diagnostics = false,
                        bool want_labeling = true);

}  // namespace memf

#endif
