#include "memf/memf_block.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace memf {

std::vector<Block> build_blocks(const std::vector<Value>& column) {
  int ell = static_cast<int>(column.size());
  if (*std::min_element(column.begin(), column.end()) != 0) {
    throw ContractError("column has a trivial augmenting path: flush before building blocks");
  }
  std::vector<Block> blocks;
  int lo = 1;
  for (int lam = 1; lam <= ell - 1; ++lam) {
    // Levels lam and lam+1 are connected iff the downward capacity between
    // them (column[lam]) is positive.
    bool run_ends = lam == ell - 1 || column[lam] == 0;
    if (run_ends) {
      blocks.push_back({lo, lam});
      lo = lam + 1;
    }
  }
  return blocks;
}

std::vector<int> build_block_edges(const LevelMatrix& cross, const std::vector<Block>& from_blocks,
                                   const std::vector<Block>& to_blocks) {
  int ell = cross.ell();
  // Map each to-side level to its block index.
  std::vector<int> to_block_of(ell, -1);
  for (std::size_t b = 0; b < to_blocks.size(); ++b) {
    for (int mu = to_blocks[b].lo; mu <= to_blocks[b].hi; ++mu) {
      to_block_of[mu] = static_cast<int>(b);
    }
  }
  // Best (smallest) target block per from-side row, then suffix minima so a
  // block sees every row at or above its bottom level.
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<int> best_from_row(ell, kNone);
  for (int lam = 1; lam <= ell - 1; ++lam) {
    int best = kNone;
    for (int mu = 1; mu <= ell - 1; ++mu) {
      if (cross.at(lam, mu) > 0) {
        best = std::min(best, to_block_of[mu]);
      }
    }
    best_from_row[lam] = best;
  }
  for (int lam = ell - 2; lam >= 1; --lam) {
    best_from_row[lam] = std::min(best_from_row[lam], best_from_row[lam + 1]);
  }
  std::vector<int> targets(from_blocks.size(), -1);
  for (std::size_t g = 0; g < from_blocks.size(); ++g) {
    int best = best_from_row[from_blocks[g].lo];
    targets[g] = best == kNone ? -1 : best;
  }
  return targets;
}

Value flush_trivial_column(std::vector<Value>& column) {
  Value m = *std::min_element(column.begin(), column.end());
  if (m <= 0) return 0;
  for (Value& c : column) c -= m;
  return m;
}

void apply_flow_loop(std::vector<Value>& col_from, std::vector<Value>& col_to,
                     LevelMatrix& cross_from, LevelMatrix& cross_to, FlowStore& store,
                     int from_vertex, int to_vertex, int edge, bool from_forward_side,
                     const FlowLoop& loop) {
  int ell = static_cast<int>(col_from.size());
  if (loop.lam < 1 || loop.lam > ell - 1 || loop.mu < 1 || loop.mu > ell - 1) {
    throw ContractError("flow-loop levels out of range");
  }
  if (loop.alpha < 1) {
    throw ContractError("flow-loop amount must be >= 1");
  }
  Value limit = cross_from.at(loop.lam, loop.mu);
  for (int lam = loop.lam; lam <= ell - 1; ++lam) {
    limit = std::min(limit, col_from[lam]);
  }
  if (loop.alpha > limit) {
    throw ContractError("flow-loop not permissible: amount " + std::to_string(loop.alpha) +
                        " exceeds limit " + std::to_string(limit));
  }
  for (int lam = loop.lam; lam <= ell - 1; ++lam) col_from[lam] -= loop.alpha;
  for (int mu = loop.mu; mu <= ell - 1; ++mu) col_to[mu] += loop.alpha;
  cross_from.at(loop.lam, loop.mu) -= loop.alpha;
  cross_to.at(loop.mu, loop.lam) += loop.alpha;
  record_cross_flow(store, edge, from_forward_side, loop.lam, loop.mu, loop.alpha);
  store.source_flow[from_vertex] += loop.alpha;
  store.source_flow[to_vertex] -= loop.alpha;
}

BlockSolver::BlockSolver(const EnergyModel& model, bool diagnostics)
    : BlockSolver(build_capacities(model), diagnostics) {}

BlockSolver::BlockSolver(const IshikawaCapacities& caps, bool diagnostics)
    : initial_(caps),
      adj_(caps.num_vertices, caps.edges),
      diagnostics_(diagnostics),
      cols_(caps.column),
      store_(FlowStore::zero(caps.num_vertices, static_cast<int>(caps.edges.size()),
                             caps.num_labels)) {
  init_from_caps();
}

void BlockSolver::init_from_caps() {
  int ell = initial_.num_labels;
  for (int v = 0; v < initial_.num_vertices; ++v) {
    Value m = flush_trivial_column(cols_[v]);
    if (m > 0) {
      store_.source_flow[v] += m;
      store_.total_flow += m;
      ++augmentations_;
    }
  }
  blocks_.resize(initial_.num_vertices);
  tree_.resize(initial_.num_vertices);
  for (int v = 0; v < initial_.num_vertices; ++v) {
    blocks_[v] = build_blocks(cols_[v]);
    tree_[v].assign(blocks_[v].size(), TreeNode{});
  }
  arcs_.assign(static_cast<std::size_t>(2) * adj_.num_edges(), {});
  for (int e = 0; e < adj_.num_edges(); ++e) {
    int i = initial_.edges[e].i;
    int j = initial_.edges[e].j;
    arcs_[2 * e] = build_block_edges(initial_.cross[e].forward, blocks_[i], blocks_[j]);
    arcs_[2 * e + 1] = build_block_edges(initial_.cross[e].backward, blocks_[j], blocks_[i]);
  }
  for (int v = 0; v < initial_.num_vertices; ++v) {
    if (cols_[v][ell - 1] > 0) {
      int top = static_cast<int>(blocks_[v].size()) - 1;
      tree_[v][top].in_tree = true;
      tree_[v][top].root = true;
      frontier_.emplace_back(v, blocks_[v][top].lo);
    }
  }
  note_stored();
}

int BlockSolver::block_index_of(int col, int level) const {
  const std::vector<Block>& bs = blocks_[col];
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (bs[b].lo <= level && level <= bs[b].hi) return static_cast<int>(b);
  }
  return -1;
}

std::optional<std::vector<BlockSolver::PathStep>> BlockSolver::find_path() {
  while (!frontier_.empty()) {
    auto [v, level] = frontier_.front();
    frontier_.pop_front();
    int g = block_index_of(v, level);
    if (g < 0 || !tree_[v][g].in_tree || tree_[v][g].orphan) continue;

    if (g == 0 && cols_[v][0] > 0) {
      // Terminal contact: walk parents back to the root.
      std::vector<PathStep> reversed;
      int cc = v;
      int cb = g;
      std::size_t guard = 0;
      while (true) {
        const TreeNode& node = tree_[cc][cb];
        reversed.push_back({cc, cb, node.parent_dir});
        if (node.root) break;
        int pc = node.parent_col;
        int pb = block_index_of(pc, node.parent_lo);
        if (pb < 0 || !tree_[pc][pb].in_tree ||
            ++guard > static_cast<std::size_t>(initial_.num_vertices) *
                          initial_.num_labels) {
          throw InternalInvariantError("broken parent chain in search tree");
        }
        cc = pc;
        cb = pb;
      }
      std::vector<PathStep> path(reversed.rbegin(), reversed.rend());
      // Re-enqueue the terminal block: it may support further paths.
      frontier_.emplace_front(v, level);
      return path;
    }

    for (const DirectedEdge& de : adj_.out(v)) {
      int target = arcs_[de.directed_id()][g];
      if (target >= 0 && !tree_[de.neighbor][target].in_tree) {
        TreeNode& child = tree_[de.neighbor][target];
        child.in_tree = true;
        child.orphan = false;
        child.root = false;
        child.parent_col = v;
        child.parent_lo = blocks_[v][g].lo;
        child.parent_dir = de.directed_id();
        frontier_.emplace_back(de.neighbor, blocks_[de.neighbor][target].lo);
      }
    }
  }
  return std::nullopt;
}

bool BlockSolver::augment_path(const std::vector<PathStep>& path) {
  int ell = initial_.num_labels;
  dirty_cols_.insert(path[0].col);
  for (std::size_t t = 1; t < path.size(); ++t) {
    const PathStep& from = path[t - 1];
    const PathStep& to = path[t];
    int d = to.in_dir;
    int e = d / 2;
    bool from_forward = d % 2 == 0;
    EdgeResidual er = reconstruct_edge(initial_.cross[e].forward, initial_.cross[e].backward,
                                       store_.exit[2 * e], store_.exit[2 * e + 1]);
    ++reconstructions_;
    if (er.used_fallback) ++reconstruction_fallbacks_;
    transient_peak_ = std::max(transient_peak_, er.transient_values);
    LevelMatrix& cross_from = from_forward ? er.forward : er.backward;
    LevelMatrix& cross_to = from_forward ? er.backward : er.forward;

    int lam_floor = blocks_[from.col][from.block].lo;
    int mu_floor = blocks_[to.col][to.block].lo;
    Value pushed = 0;
    // Lowest landing level first: the first loop of the arc then lands inside
    // the target block, which keeps the receiving column connected up to the
    // top for the next arc.
    for (int mu = mu_floor; mu <= ell - 1; ++mu) {
      for (int lam = lam_floor; lam <= ell - 1; ++lam) {
        Value cap = cross_from.at(lam, mu);
        if (cap <= 0) continue;
        Value colmin = cols_[from.col][lam];
        for (int l = lam + 1; l <= ell - 1; ++l) colmin = std::min(colmin, cols_[from.col][l]);
        Value alpha = std::min(cap, colmin);
        if (alpha < 1) continue;
        apply_flow_loop(cols_[from.col], cols_[to.col], cross_from, cross_to, store_,
                        from.col, to.col, e, from_forward, {lam, mu, alpha});
        pushed += alpha;
      }
    }
    dirty_cols_.insert(to.col);
    if (pushed == 0) {
      // Stale arc (its defining edge was consumed earlier on this same path);
      // abandon the path, let repair resynchronize, and search again.
      ++aborted_;
      return false;
    }
  }

  int k = path.back().col;
  Value m = flush_trivial_column(cols_[k]);
  if (m == 0) {
    ++aborted_;
    return false;
  }
  store_.source_flow[k] += m;
  store_.total_flow += m;
  ++augmentations_;
  if (diagnostics_) {
    path_lengths_.push_back(static_cast<int>(path.size()) + 1);  // arcs incl. source+terminal
  }
  return true;
}

void BlockSolver::repair() {
  int ell = initial_.num_labels;

  std::set<int> dirty_pairs;
  for (int v : dirty_cols_) {
    for (const DirectedEdge& de : adj_.out(v)) dirty_pairs.insert(de.edge);
  }

  // Trivial paths first: loops may have lifted a whole column above zero.
  for (int v : dirty_cols_) {
    Value m = flush_trivial_column(cols_[v]);
    if (m > 0) {
      store_.source_flow[v] += m;
      store_.total_flow += m;
      ++augmentations_;
      zero_progress_streak_ = 0;
    }
  }

  // Rebuild blocks of dirty columns, carrying tree membership over to the new
  // block containing each old block's identifying level.
  for (int v : dirty_cols_) {
    std::vector<Block> old_blocks = std::move(blocks_[v]);
    std::vector<TreeNode> old_tree = std::move(tree_[v]);
    blocks_[v] = build_blocks(cols_[v]);
    tree_[v].assign(blocks_[v].size(), TreeNode{});
    for (std::size_t b = 0; b < blocks_[v].size(); ++b) {
      int lo = blocks_[v][b].lo;
      for (std::size_t ob = 0; ob < old_blocks.size(); ++ob) {
        if (old_blocks[ob].lo <= lo && lo <= old_blocks[ob].hi) {
          if (old_tree[ob].in_tree && !old_tree[ob].orphan) tree_[v][b] = old_tree[ob];
          break;
        }
      }
    }
  }

  // Rebuild arcs of every edge incident to a dirty column from reconstructed
  // residuals.
  for (int e : dirty_pairs) {
    int i = initial_.edges[e].i;
    int j = initial_.edges[e].j;
    EdgeResidual er = reconstruct_edge(initial_.cross[e].forward, initial_.cross[e].backward,
                                       store_.exit[2 * e], store_.exit[2 * e + 1]);
    ++reconstructions_;
    if (er.used_fallback) ++reconstruction_fallbacks_;
    transient_peak_ = std::max(transient_peak_, er.transient_values);
    arcs_[2 * e] = build_block_edges(er.forward, blocks_[i], blocks_[j]);
    arcs_[2 * e + 1] = build_block_edges(er.backward, blocks_[j], blocks_[i]);
  }

  // Validation sweep: roots need their source arc, everything else needs its
  // parent arc to exist in the rebuilt graph.
  std::deque<std::pair<int, int>> orphans;
  for (int v = 0; v < initial_.num_vertices; ++v) {
    for (std::size_t b = 0; b < tree_[v].size(); ++b) {
      TreeNode& node = tree_[v][b];
      if (!node.in_tree) continue;
      bool valid;
      if (node.root) {
        valid = b + 1 == tree_[v].size() && cols_[v][ell - 1] > 0;
      } else {
        int pb = block_index_of(node.parent_col, node.parent_lo);
        valid = pb >= 0 && tree_[node.parent_col][pb].in_tree &&
                arcs_[node.parent_dir][pb] == static_cast<int>(b);
      }
      if (!valid && !node.orphan) {
        node.orphan = true;
        orphans.emplace_back(v, static_cast<int>(b));
      }
    }
  }

  // New roots on raised columns.
  for (int v : dirty_cols_) {
    if (cols_[v][ell - 1] > 0) {
      int top = static_cast<int>(blocks_[v].size()) - 1;
      TreeNode& node = tree_[v][top];
      if (!node.in_tree || node.orphan) {
        node = TreeNode{};
        node.in_tree = true;
        node.root = true;
        frontier_.emplace_back(v, blocks_[v][top].lo);
      } else if (!node.root && !node.orphan) {
        // Keep its current parent; a root link is not required.
      }
    }
  }

  // Parent chains must terminate at a root (or at a queued orphan, whose
  // subtree is resolved below). Rebuilt blocks and arcs can leave chains that
  // are pairwise valid but cyclic; anything not reachable from a root or an
  // orphan along parent links is dangling and gets orphaned as well.
  {
    std::vector<int> base(initial_.num_vertices + 1, 0);
    for (int v = 0; v < initial_.num_vertices; ++v) {
      base[v + 1] = base[v] + static_cast<int>(tree_[v].size());
    }
    int total = base[initial_.num_vertices];
    std::vector<std::vector<int>> children(total);
    std::vector<int> queue;
    queue.reserve(total);
    std::vector<char> reached(total, 0);
    for (int v = 0; v < initial_.num_vertices; ++v) {
      for (std::size_t b = 0; b < tree_[v].size(); ++b) {
        const TreeNode& node = tree_[v][b];
        if (!node.in_tree) continue;
        int id = base[v] + static_cast<int>(b);
        if (node.root || node.orphan) {
          reached[id] = 1;
          queue.push_back(id);
        } else {
          int pb = block_index_of(node.parent_col, node.parent_lo);
          children[base[node.parent_col] + pb].push_back(id);
        }
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int child : children[queue[head]]) {
        if (!reached[child]) {
          reached[child] = 1;
          queue.push_back(child);
        }
      }
    }
    for (int v = 0; v < initial_.num_vertices; ++v) {
      for (std::size_t b = 0; b < tree_[v].size(); ++b) {
        TreeNode& node = tree_[v][b];
        int id = base[v] + static_cast<int>(b);
        if (node.in_tree && !node.orphan && !reached[id]) {
          node.orphan = true;
          orphans.emplace_back(v, static_cast<int>(b));
        }
      }
    }
  }

  // Adoption: each orphan looks for any rooted block with an arc onto it;
  // otherwise its children become orphans and it leaves the tree.
  while (!orphans.empty()) {
    auto [v, b] = orphans.front();
    orphans.pop_front();
    TreeNode& node = tree_[v][b];
    if (!node.in_tree || !node.orphan) continue;
    bool adopted = false;
    // The source adopts any orphaned top block whose source edge is positive.
    if (b + 1 == static_cast<int>(tree_[v].size()) && cols_[v][ell - 1] > 0) {
      node = TreeNode{};
      node.in_tree = true;
      node.root = true;
      frontier_.emplace_back(v, blocks_[v][b].lo);
      adopted = true;
    }
    for (const DirectedEdge& de : adj_.out(v)) {
      if (adopted) break;
      int w = de.neighbor;
      int into_me = de.reverse_id();  // direction w -> v
      for (std::size_t g = 0; g < tree_[w].size() && !adopted; ++g) {
        if (!tree_[w][g].in_tree || tree_[w][g].orphan) continue;
        if (arcs_[into_me][g] != b) continue;
        if (!rooted(w, static_cast<int>(g))) continue;
        node.orphan = false;
        node.root = false;
        node.parent_col = w;
        node.parent_lo = blocks_[w][g].lo;
        node.parent_dir = into_me;
        frontier_.emplace_back(v, blocks_[v][b].lo);
        adopted = true;
      }
      if (adopted) break;
    }
    if (!adopted) {
      node = TreeNode{};
      for (const DirectedEdge& de : adj_.out(v)) {
        int w = de.neighbor;
        for (std::size_t g = 0; g < tree_[w].size(); ++g) {
          TreeNode& child = tree_[w][g];
          if (child.in_tree && !child.orphan && !child.root && child.parent_col == v &&
              block_index_of(v, child.parent_lo) == b) {
            child.orphan = true;
            orphans.emplace_back(w, static_cast<int>(g));
          }
          // Freed blocks rejoin through normal growth, so every tree block
          // that could become its parent must get another expansion pass.
          if (child.in_tree && !child.orphan) {
            frontier_.emplace_back(w, blocks_[w][g].lo);
          }
        }
      }
    }
  }

#ifdef MEMF_TREE_VALIDATE
  for (int v = 0; v < initial_.num_vertices; ++v) {
    for (std::size_t b = 0; b < tree_[v].size(); ++b) {
      const TreeNode& n = tree_[v][b];
      if (!n.in_tree) continue;
      if (n.orphan) {
        std::fprintf(stderr, "[validate] surviving orphan (%d,%zu)\n", v, b);
        std::abort();
      }
      if (n.root) continue;
      int pb = block_index_of(n.parent_col, n.parent_lo);
      if (pb < 0 || !tree_[n.parent_col][pb].in_tree || tree_[n.parent_col][pb].orphan ||
          arcs_[n.parent_dir][pb] != static_cast<int>(b)) {
        std::fprintf(stderr,
                     "[validate] dangling (%d,%zu): parent_col=%d parent_lo=%d parent_dir=%d "
                     "resolved pb=%d in_tree=%d orphan=%d arc=%d\n",
                     v, b, n.parent_col, n.parent_lo, n.parent_dir, pb,
                     pb >= 0 ? tree_[n.parent_col][pb].in_tree : -1,
                     pb >= 0 ? tree_[n.parent_col][pb].orphan : -1,
                     pb >= 0 ? arcs_[n.parent_dir][pb] : -99);
        std::abort();
      }
    }
  }
#endif

  // Re-activate everything whose arcs were rebuilt.
  for (int e : dirty_pairs) {
    for (int v : {initial_.edges[e].i, initial_.edges[e].j}) {
      for (std::size_t b = 0; b < tree_[v].size(); ++b) {
        if (tree_[v][b].in_tree && !tree_[v][b].orphan) {
          frontier_.emplace_back(v, blocks_[v][b].lo);
        }
      }
    }
  }

  dirty_cols_.clear();
}

bool BlockSolver::rooted(int col, int block) const {
  std::size_t guard = 0;
  int c = col;
  int b = block;
  while (true) {
    const TreeNode& node = tree_[c][b];
    if (!node.in_tree || node.orphan) return false;
    if (node.root) return true;
    int pc = node.parent_col;
    int pb = block_index_of(pc, node.parent_lo);
    if (pb < 0) return false;
    if (++guard > static_cast<std::size_t>(initial_.num_vertices) * initial_.num_labels) {
      return false;
    }
    c = pc;
    b = pb;
  }
}

bool BlockSolver::step() {
  std::optional<std::vector<PathStep>> path = find_path();
  if (!path) {
    if (has_augmenting_path()) {
      throw InternalInvariantError(
          "search tree terminated although the block-graph still has an augmenting path");
    }
    return false;
  }
  Value flow_before = store_.total_flow;
  augment_path(*path);
  repair();
  note_stored();
  if (store_.total_flow == flow_before) {
    if (++zero_progress_streak_ >
        static_cast<long>(initial_.num_vertices) * initial_.num_labels + 64) {
      throw InternalInvariantError("block solver is not making progress");
    }
  } else {
    zero_progress_streak_ = 0;
  }
  return true;
}

bool BlockSolver::has_augmenting_path() const {
  int ell = initial_.num_labels;
  std::vector<std::vector<char>> seen(initial_.num_vertices);
  for (int v = 0; v < initial_.num_vertices; ++v) seen[v].assign(blocks_[v].size(), 0);
  std::vector<std::pair<int, int>> queue;
  for (int v = 0; v < initial_.num_vertices; ++v) {
    if (cols_[v][ell - 1] > 0) {
      int top = static_cast<int>(blocks_[v].size()) - 1;
      seen[v][top] = 1;
      queue.emplace_back(v, top);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [v, g] = queue[head];
    if (g == 0 && cols_[v][0] > 0) return true;
    for (const DirectedEdge& de : adj_.out(v)) {
      int target = arcs_[de.directed_id()][g];
      if (target >= 0 && !seen[de.neighbor][target]) {
        seen[de.neighbor][target] = 1;
        queue.emplace_back(de.neighbor, target);
      }
    }
  }
  return false;
}

Labeling BlockSolver::read_labeling() const {
  int ell = initial_.num_labels;
  Labeling x(initial_.num_vertices);
  for (int v = 0; v < initial_.num_vertices; ++v) {
    int lowest = ell;
    for (std::size_t b = 0; b < tree_[v].size(); ++b) {
      if (tree_[v][b].in_tree && !tree_[v][b].orphan) {
        lowest = std::min(lowest, blocks_[v][b].lo);
      }
    }
    x[v] = lowest - 1;
  }
  return x;
}

void BlockSolver::note_stored() {
  std::size_t n = store_.value_count();
  for (const auto& c : cols_) n += c.size();
  for (const auto& bs : blocks_) n += 2 * bs.size();
  for (const auto& a : arcs_) n += a.size();
  for (const auto& t : tree_) n += 4 * t.size();
  stored_peak_ = std::max(stored_peak_, n);
}

SolveReport BlockSolver::report(bool want_labeling) const {
  SolveReport r;
  r.solver = "block";
  r.flow_total = store_.total_flow;
  r.constant = initial_.constant;
  r.energy = r.flow_total + r.constant;
  r.augmentations = augmentations_;
  r.reconstructions = reconstructions_;
  r.reconstruction_fallbacks = reconstruction_fallbacks_;
  r.stored_values_peak = stored_peak_;
  r.transient_values_peak = transient_peak_;
  if (want_labeling) r.labeling = read_labeling();
  return r;
}

SolveReport solve_block(const EnergyModel& model, bool diagnostics, bool want_labeling) {
  BlockSolver solver(model, diagnostics);
  while (solver.step()) {
  }
  return solver.report(want_labeling);
}

std::vector<std::vector<int>> BlockSolver::debug_tree() const {
  std::vector<std::vector<int>> out(initial_.num_vertices);
  for (int v = 0; v < initial_.num_vertices; ++v) {
    out[v].resize(tree_[v].size());
    for (std::size_t b = 0; b < tree_[v].size(); ++b) {
      const TreeNode& n = tree_[v][b];
      out[v][b] = !n.in_tree ? 0 : n.orphan ? 2 : n.root ? 3 : 1;
    }
  }
  return out;
}

}  // namespace memf
