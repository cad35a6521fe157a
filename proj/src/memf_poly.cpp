#include "memf/memf_poly.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace memf {

LowerGraph::LowerGraph(const IshikawaCapacities& caps, const Adjacency& adj) {
  int ell = caps.num_labels;
  column = caps.column;
  records_.assign(static_cast<std::size_t>(2) * adj.num_edges(),
                  std::vector<CrossRecord>(ell - 1));
  for (int e = 0; e < adj.num_edges(); ++e) {
    rebuild_edge_records(e, caps.cross[e].forward, caps.cross[e].backward);
  }
}

void LowerGraph::rebuild_edge_records(int edge, const LevelMatrix& res_forward,
                                      const LevelMatrix& res_backward) {
  int ell = res_forward.ell();
  for (int dir = 0; dir < 2; ++dir) {
    const LevelMatrix& mat = dir == 0 ? res_forward : res_backward;
    std::vector<CrossRecord>& recs = records_[2 * edge + dir];
    for (int row = 1; row <= ell - 1; ++row) {
      CrossRecord& rec = recs[row - 1];
      if (rec.present()) --present_records_;
      rec = CrossRecord{};
      for (int target = 1; target <= ell - 1; ++target) {
        if (mat.at(row, target) > 0) {
          rec.target = target;
          rec.cap = mat.at(row, target);
          ++present_records_;
          break;
        }
      }
    }
  }
}

void LowerGraph::note_reverse_residual(int directed_id, int row_level, int target,
                                       Value alpha) {
  CrossRecord& rec = records_[directed_id][row_level - 1];
  if (!rec.present()) {
    rec = {target, alpha};
    ++present_records_;
  } else if (rec.target > target) {
    // Everything below the old lowest had zero residual, so the new edge
    // carries exactly alpha.
    rec = {target, alpha};
  } else if (rec.target == target) {
    rec.cap += alpha;
  }
  // rec.target < target: the increase sits above the lowest edge; it will be
  // rediscovered by reconstruction if ever needed.
}

std::size_t LowerGraph::stored_value_count() const {
  std::size_t n = 0;
  for (const auto& c : column) n += c.size();
  return n + 2 * static_cast<std::size_t>(present_records_);
}

PolySolver::PolySolver(const EnergyModel& model, bool diagnostics)
    : PolySolver(build_capacities(model), diagnostics) {}

PolySolver::PolySolver(const IshikawaCapacities& caps, bool diagnostics)
    : initial_(caps),
      adj_(caps.num_vertices, caps.edges),
      lower_(caps, adj_),
      store_(FlowStore::zero(caps.num_vertices, static_cast<int>(caps.edges.size()),
                             caps.num_labels)),
      diagnostics_(diagnostics) {
  note_stored();
}

namespace {

struct SearchParent {
  int node = -2;  // -2 unvisited, -1 source
  PathHop::Kind kind = PathHop::Kind::kSource;
  int directed_edge = -1;
};

}  // namespace

std::optional<AugPath> PolySolver::find_shortest_path() {
  int ell = initial_.num_labels;
  int num_nodes = initial_.num_vertices * (ell - 1);
  std::vector<Value> dist(num_nodes, kUnreachableDistance);
  std::vector<SearchParent> parent(num_nodes);
  Value sink_dist = kUnreachableDistance;
  int sink_parent = -2;
  std::deque<int> frontier;

  for (int v = 0; v < initial_.num_vertices; ++v) {
    if (lower_.column[v][ell - 1] > 0) {
      int id = node_id(v, ell - 1);
      dist[id] = 1;
      parent[id] = {-1, PathHop::Kind::kSource, -1};
      frontier.push_back(id);
    }
  }

  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    Value d = dist[id];
    if (sink_dist <= d && !diagnostics_) break;  // sink distance settled
    int v = id / (ell - 1);
    int lam = id % (ell - 1) + 1;

    auto relax = [&](int wid, Value nd, PathHop::Kind kind, int dir) {
      if (nd < dist[wid]) {
        dist[wid] = nd;
        parent[wid] = {id, kind, dir};
        if (nd == d) {
          frontier.push_front(wid);
        } else {
          frontier.push_back(wid);
        }
      }
    };

    if (lam + 1 <= ell - 1) relax(node_id(v, lam + 1), d, PathHop::Kind::kUp, -1);
    if (lam >= 2 && lower_.column[v][lam - 1] > 0) {
      relax(node_id(v, lam - 1), d + 1, PathHop::Kind::kDown, -1);
    }
    if (lam == 1 && lower_.column[v][0] > 0 && d + 1 < sink_dist) {
      sink_dist = d + 1;
      sink_parent = id;
    }
    for (const DirectedEdge& de : adj_.out(v)) {
      const CrossRecord& rec = lower_.record(de.directed_id(), lam);
      if (rec.present()) {
        relax(node_id(de.neighbor, rec.target), d + 1, PathHop::Kind::kCross,
              de.directed_id());
      }
    }
  }

  if (diagnostics_) last_distances_ = dist;

  if (sink_parent == -2) return std::nullopt;

  AugPath path;
  std::vector<PathHop> reversed;
  reversed.push_back({PathHop::Kind::kSink, sink_parent / (ell - 1), 0, -1, 0});
  int id = sink_parent;
  while (id != -1) {
    const SearchParent& p = parent[id];
    int v = id / (ell - 1);
    int lam = id % (ell - 1) + 1;
    PathHop hop;
    hop.kind = p.kind;
    hop.vertex = v;
    hop.level = lam;
    if (p.kind == PathHop::Kind::kCross) {
      hop.directed_edge = p.directed_edge;
      hop.from_level = p.node % (ell - 1) + 1;
    }
    reversed.push_back(hop);
    id = p.node;
  }
  path.hops.assign(reversed.rbegin(), reversed.rend());
  for (const PathHop& hop : path.hops) {
    if (hop.kind != PathHop::Kind::kUp) ++path.length;
  }
  return path;
}

Value PolySolver::augment(const AugPath& path) {
  int ell = initial_.num_labels;
  Value alpha = kInfiniteCapacity;
  for (const PathHop& hop : path.hops) {
    switch (hop.kind) {
      case PathHop::Kind::kSource:
        alpha = std::min(alpha, lower_.column[hop.vertex][ell - 1]);
        break;
      case PathHop::Kind::kDown:
        alpha = std::min(alpha, lower_.column[hop.vertex][hop.level]);
        break;
      case PathHop::Kind::kCross:
        alpha = std::min(alpha, lower_.record(hop.directed_edge, hop.from_level).cap);
        break;
      case PathHop::Kind::kSink:
        alpha = std::min(alpha, lower_.column[hop.vertex][0]);
        break;
      case PathHop::Kind::kUp:
        break;
    }
  }
  if (alpha < 1 || alpha == kInfiniteCapacity) {
    throw InternalInvariantError("nonpositive bottleneck on augmenting path");
  }

  std::set<int> saturated;
  for (const PathHop& hop : path.hops) {
    switch (hop.kind) {
      case PathHop::Kind::kSource:
        lower_.column[hop.vertex][ell - 1] -= alpha;
        store_.source_flow[hop.vertex] += alpha;
        break;
      case PathHop::Kind::kDown:
        lower_.column[hop.vertex][hop.level] -= alpha;
        break;
      case PathHop::Kind::kUp:
        lower_.column[hop.vertex][hop.level - 1] += alpha;
        break;
      case PathHop::Kind::kSink:
        lower_.column[hop.vertex][0] -= alpha;
        break;
      case PathHop::Kind::kCross: {
        int e = hop.directed_edge / 2;
        bool from_forward = hop.directed_edge % 2 == 0;
        CrossRecord& rec = lower_.record(hop.directed_edge, hop.from_level);
        rec.cap -= alpha;
        record_cross_flow(store_, e, from_forward, hop.from_level, hop.level, alpha);
        int reverse_id = 2 * e + (from_forward ? 1 : 0);
        lower_.note_reverse_residual(reverse_id, hop.level, hop.from_level, alpha);
        if (rec.cap == 0) saturated.insert(e);
        break;
      }
    }
  }
  store_.total_flow += alpha;
  ++augmentations_;

  for (int e : saturated) {
    EdgeResidual er = reconstruct_edge(initial_.cross[e].forward, initial_.cross[e].backward,
                                       store_.exit[2 * e], store_.exit[2 * e + 1]);
    lower_.rebuild_edge_records(e, er.forward, er.backward);
    ++reconstructions_;
    if (er.used_fallback) ++reconstruction_fallbacks_;
    transient_peak_ = std::max(transient_peak_, er.transient_values);
  }
  return alpha;
}

bool PolySolver::step() {
  std::optional<AugPath> path = find_shortest_path();
  std::size_t search_scratch =
      4 * static_cast<std::size_t>(initial_.num_vertices) * (initial_.num_labels - 1);
  transient_peak_ = std::max(transient_peak_, search_scratch);
  if (!path) return false;
  augment(*path);
  note_stored();
  return true;
}

bool PolySolver::has_augmenting_path() const {
  // Existence-only BFS; cost classes do not matter here.
  int ell = initial_.num_labels;
  int num_nodes = initial_.num_vertices * (ell - 1);
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> queue;
  for (int v = 0; v < initial_.num_vertices; ++v) {
    if (lower_.column[v][ell - 1] > 0) {
      int id = node_id(v, ell - 1);
      if (!seen[id]) {
        seen[id] = 1;
        queue.push_back(id);
      }
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int id = queue[head];
    int v = id / (ell - 1);
    int lam = id % (ell - 1) + 1;
    auto visit = [&](int wid) {
      if (!seen[wid]) {
        seen[wid] = 1;
        queue.push_back(wid);
      }
    };
    if (lam == 1 && lower_.column[v][0] > 0) return true;
    if (lam + 1 <= ell - 1) visit(node_id(v, lam + 1));
    if (lam >= 2 && lower_.column[v][lam - 1] > 0) visit(node_id(v, lam - 1));
    for (const DirectedEdge& de : adj_.out(v)) {
      const CrossRecord& rec = lower_.record(de.directed_id(), lam);
      if (rec.present()) visit(node_id(de.neighbor, rec.target));
    }
  }
  return false;
}

Labeling PolySolver::read_labeling() const {
  int ell = initial_.num_labels;
  int num_nodes = initial_.num_vertices * (ell - 1);
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> queue;
  for (int v = 0; v < initial_.num_vertices; ++v) {
    if (lower_.column[v][ell - 1] > 0) {
      int id = node_id(v, ell - 1);
      if (!seen[id]) {
        seen[id] = 1;
        queue.push_back(id);
      }
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int id = queue[head];
    int v = id / (ell - 1);
    int lam = id % (ell - 1) + 1;
    auto visit = [&](int wid) {
      if (!seen[wid]) {
        seen[wid] = 1;
        queue.push_back(wid);
      }
    };
    if (lam == 1 && lower_.column[v][0] > 0) {
      throw InternalInvariantError("terminal reachable while reading labels");
    }
    if (lam + 1 <= ell - 1) visit(node_id(v, lam + 1));
    if (lam >= 2 && lower_.column[v][lam - 1] > 0) visit(node_id(v, lam - 1));
    for (const DirectedEdge& de : adj_.out(v)) {
      const CrossRecord& rec = lower_.record(de.directed_id(), lam);
      if (rec.present()) visit(node_id(de.neighbor, rec.target));
    }
  }
  Labeling x(initial_.num_vertices);
  for (int v = 0; v < initial_.num_vertices; ++v) {
    int lowest = ell;
    for (int lam = ell - 1; lam >= 1; --lam) {
      if (seen[node_id(v, lam)]) {
        lowest = lam;
      } else {
        break;
      }
    }
    for (int lam = 1; lam < lowest; ++lam) {
      if (seen[node_id(v, lam)]) {
        throw InternalInvariantError("source-reachable set not upward-closed in column " +
                                     std::to_string(v));
      }
    }
    x[v] = lowest - 1;
  }
  return x;
}

void PolySolver::note_stored() {
  stored_peak_ =
      std::max(stored_peak_, lower_.stored_value_count() + store_.value_count());
}

SolveReport PolySolver::report(bool want_labeling) const {
  SolveReport r;
  r.solver = "poly";
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

SolveReport solve_poly(const EnergyModel& model, bool diagnostics, bool want_labeling) {
  PolySolver solver(model, diagnostics);
  while (solver.step()) {
  }
  return solver.report(want_labeling);
}

}  // namespace memf
