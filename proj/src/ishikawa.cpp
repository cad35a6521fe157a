#include "memf/ishikawa.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace memf {

namespace {

// Internal node id for vertex v at level lam (lam in [1, ell-1]).
inline int node_id(int v, int lam, int ell) { return v * (ell - 1) + (lam - 1); }

struct Reachability {
  std::vector<char> node;  // per internal node id
  bool sink = false;
};

// BFS over positive residual edges from the source, infinite upward edges
// included. Neighbor order: same-column up, then down, then cross edges by
// ascending (neighbor vertex, level).
Reachability reachable_from_source(const IshikawaCapacities& caps, const Adjacency& adj) {
  int ell = caps.num_labels;
  Reachability reach;
  reach.node.assign(static_cast<std::size_t>(caps.num_vertices) * (ell - 1), 0);
  std::queue<int> queue;
  for (int v = 0; v < caps.num_vertices; ++v) {
    if (caps.column[v][ell - 1] > 0) {
      int id = node_id(v, ell - 1, ell);
      if (!reach.node[id]) {
        reach.node[id] = 1;
        queue.push(id);
      }
    }
  }
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop();
    int v = id / (ell - 1);
    int lam = id % (ell - 1) + 1;
    auto visit = [&](int w, int m) {
      int wid = node_id(w, m, ell);
      if (!reach.node[wid]) {
        reach.node[wid] = 1;
        queue.push(wid);
      }
    };
    if (lam + 1 <= ell - 1) visit(v, lam + 1);
    if (lam >= 2 && caps.column[v][lam - 1] > 0) visit(v, lam - 1);
    if (lam == 1 && caps.column[v][0] > 0) reach.sink = true;
    for (const DirectedEdge& de : adj.out(v)) {
      const LevelMatrix& mat =
          de.forward ? caps.cross[de.edge].forward : caps.cross[de.edge].backward;
      for (int mu = 1; mu <= ell - 1; ++mu) {
        if (mat.at(lam, mu) > 0) visit(de.neighbor, mu);
      }
    }
  }
  return reach;
}

}  // namespace

IshikawaCapacities build_capacities(const EnergyModel& model) {
  validate_model(model);
  int ell = model.num_labels;
  IshikawaCapacities caps;
  caps.num_vertices = model.num_vertices;
  caps.num_labels = ell;
  caps.edges = model.edges;
  caps.constant = 0;

  std::vector<std::vector<Value>> adjusted = model.unary;
  caps.cross.reserve(model.edges.size());
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    int i = model.edges[e].i;
    int j = model.edges[e].j;
    EdgeCapacities ec{LevelMatrix(ell), LevelMatrix(ell)};
    for (int lam = 1; lam <= ell - 1; ++lam) {
      for (int mu = 1; mu <= ell - 1; ++mu) {
        Value cap = model.pairwise_at(e, lam - 1, mu) + model.pairwise_at(e, lam, mu - 1) -
                    model.pairwise_at(e, lam, mu) - model.pairwise_at(e, lam - 1, mu - 1);
        if (cap < 0) {
          throw SubmodularityError("pairwise term on edge (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") violates submodularity at levels (" +
                                   std::to_string(lam) + "," + std::to_string(mu) + ")");
        }
        ec.forward.at(lam, mu) = cap;
      }
    }
    caps.cross.push_back(std::move(ec));
    // Row/column residues of the pairwise table move into the unaries:
    // theta_ij(lam,mu) = cross part + theta_ij(lam,0) + [theta_ij(L-1,mu) - theta_ij(L-1,0)].
    for (int lam = 0; lam < ell; ++lam) {
      adjusted[i][lam] += model.pairwise_at(e, lam, 0);
    }
    for (int mu = 0; mu < ell; ++mu) {
      adjusted[j][mu] += model.pairwise_at(e, ell - 1, mu) - model.pairwise_at(e, ell - 1, 0);
    }
  }

  caps.column.resize(model.num_vertices);
  for (int v = 0; v < model.num_vertices; ++v) {
    Value shift = *std::min_element(adjusted[v].begin(), adjusted[v].end());
    caps.column[v].resize(ell);
    for (int lam = 0; lam < ell; ++lam) {
      caps.column[v][lam] = adjusted[v][lam] - shift;
    }
    caps.constant += shift;
  }
  return caps;
}

MultiLabelParams recover_params(const IshikawaCapacities& caps) {
  int ell = caps.num_labels;
  MultiLabelParams params;
  params.num_vertices = caps.num_vertices;
  params.num_labels = ell;
  params.edges = caps.edges;
  params.unary = caps.column;
  params.pairwise.resize(caps.edges.size());
  for (std::size_t e = 0; e < caps.edges.size(); ++e) {
    const EdgeCapacities& ec = caps.cross[e];
    std::vector<Value>& table = params.pairwise[e];
    table.assign(static_cast<std::size_t>(ell) * ell, 0);
    // above(lam, mu) = sum of forward caps with from-level > lam, to-level <= mu;
    // below(lam, mu) = sum of backward caps with from-level > mu, to-level <= lam.
    for (int lam = 0; lam < ell; ++lam) {
      for (int mu = 0; mu < ell; ++mu) {
        Value sum = 0;
        for (int a = lam + 1; a <= ell - 1; ++a) {
          for (int b = 1; b <= std::min(mu, ell - 1); ++b) {
            sum += ec.forward.at(a, b);
          }
        }
        for (int b = mu + 1; b <= ell - 1; ++b) {
          for (int a = 1; a <= std::min(lam, ell - 1); ++a) {
            sum += ec.backward.at(b, a);
          }
        }
        table[static_cast<std::size_t>(lam) * ell + mu] = sum;
      }
    }
  }
  return params;
}

Value cut_cost(const IshikawaCapacities& caps, const Labeling& x) {
  if (x.size() != static_cast<std::size_t>(caps.num_vertices)) {
    throw InvalidArgumentError("labeling length does not match vertex count");
  }
  int ell = caps.num_labels;
  Value total = 0;
  for (int v = 0; v < caps.num_vertices; ++v) {
    total += caps.column[v][x[v]];
  }
  for (std::size_t e = 0; e < caps.edges.size(); ++e) {
    int xi = x[caps.edges[e].i];
    int xj = x[caps.edges[e].j];
    const EdgeCapacities& ec = caps.cross[e];
    for (int lam = xi + 1; lam <= ell - 1; ++lam) {
      for (int mu = 1; mu <= std::min(xj, ell - 1); ++mu) {
        total += ec.forward.at(lam, mu);
      }
    }
    for (int mu = xj + 1; mu <= ell - 1; ++mu) {
      for (int lam = 1; lam <= std::min(xi, ell - 1); ++lam) {
        total += ec.backward.at(mu, lam);
      }
    }
  }
  return total;
}

ReferenceResult reference_maxflow(const IshikawaCapacities& caps) {
  int ell = caps.num_labels;
  int num_nodes = caps.num_vertices * (ell - 1);
  Adjacency adj(caps.num_vertices, caps.edges);

  ResidualState state;
  state.caps = caps;

  // Parent bookkeeping: -2 unvisited, -1 reached from source, otherwise the
  // predecessor internal node. parent_dir holds the directed MRF edge id for
  // cross hops, -1 for column hops.
  std::vector<int> parent(num_nodes);
  std::vector<int> parent_dir(num_nodes);
  std::vector<int> bfs_queue;
  bfs_queue.reserve(num_nodes);

  auto& cols = state.caps.column;
  auto& cross = state.caps.cross;

  while (true) {
    std::fill(parent.begin(), parent.end(), -2);
    bfs_queue.clear();
    int sink_parent = -2;

    for (int v = 0; v < caps.num_vertices && sink_parent == -2; ++v) {
      if (cols[v][ell - 1] > 0) {
        int id = node_id(v, ell - 1, ell);
        if (parent[id] == -2) {
          parent[id] = -1;
          parent_dir[id] = -1;
          bfs_queue.push_back(id);
        }
      }
    }

    for (std::size_t head = 0; head < bfs_queue.size() && sink_parent == -2; ++head) {
      int id = bfs_queue[head];
      int v = id / (ell - 1);
      int lam = id % (ell - 1) + 1;
      auto visit = [&](int w, int m, int dir) {
        int wid = node_id(w, m, ell);
        if (parent[wid] == -2) {
          parent[wid] = id;
          parent_dir[wid] = dir;
          bfs_queue.push_back(wid);
        }
      };
      if (lam + 1 <= ell - 1) visit(v, lam + 1, -1);
      if (lam >= 2 && cols[v][lam - 1] > 0) visit(v, lam - 1, -1);
      if (lam == 1 && cols[v][0] > 0) {
        sink_parent = id;
        break;
      }
      for (const DirectedEdge& de : adj.out(v)) {
        const LevelMatrix& mat = de.forward ? cross[de.edge].forward : cross[de.edge].backward;
        for (int mu = 1; mu <= ell - 1; ++mu) {
          if (mat.at(lam, mu) > 0) visit(de.neighbor, mu, de.directed_id());
        }
      }
    }

    if (sink_parent == -2) break;

    // Bottleneck over the finite edges of the path.
    Value alpha = cols[sink_parent / (ell - 1)][0];
    for (int id = sink_parent; parent[id] != -1; id = parent[id]) {
      int pid = parent[id];
      int lam = id % (ell - 1) + 1;
      int plam = pid % (ell - 1) + 1;
      if (parent_dir[id] >= 0) {
        int e = parent_dir[id] / 2;
        const LevelMatrix& mat = parent_dir[id] % 2 == 0 ? cross[e].forward : cross[e].backward;
        alpha = std::min(alpha, mat.at(plam, lam));
      } else if (plam == lam + 1) {
        alpha = std::min(alpha, cols[id / (ell - 1)][lam]);
      }
      // Upward hops (plam == lam - 1) are infinite.
    }
    {
      int top = sink_parent;
      while (parent[top] != -1) top = parent[top];
      alpha = std::min(alpha, cols[top / (ell - 1)][ell - 1]);
    }
    if (alpha < 1) {
      throw InternalInvariantError("nonpositive bottleneck on augmenting path");
    }

    // Apply the augmentation.
    cols[sink_parent / (ell - 1)][0] -= alpha;
    for (int id = sink_parent; parent[id] != -1; id = parent[id]) {
      int pid = parent[id];
      int v = id / (ell - 1);
      int lam = id % (ell - 1) + 1;
      int plam = pid % (ell - 1) + 1;
      if (parent_dir[id] >= 0) {
        int e = parent_dir[id] / 2;
        bool fwd = parent_dir[id] % 2 == 0;
        LevelMatrix& used = fwd ? cross[e].forward : cross[e].backward;
        LevelMatrix& rev = fwd ? cross[e].backward : cross[e].forward;
        used.at(plam, lam) -= alpha;
        rev.at(lam, plam) += alpha;
      } else if (plam == lam + 1) {
        cols[v][lam] -= alpha;  // pushed down; reverse is the infinite up edge
      } else {
        cols[v][lam - 1] += alpha;  // pushed up; reverse residual is the downward edge
      }
    }
    {
      int top = sink_parent;
      while (parent[top] != -1) top = parent[top];
      cols[top / (ell - 1)][ell - 1] -= alpha;
    }

    state.total_flow += alpha;
    ++state.augmentations;
  }

  ReferenceResult result;
  result.labeling = labeling_from_reachability(state);
  result.flow_total = state.total_flow;
  result.augmentations = state.augmentations;
  result.stored_values = reference_stored_values(state.caps);
  result.state = std::move(state);
  return result;
}

std::size_t reference_stored_values(const IshikawaCapacities& caps) {
  std::size_t num_nodes =
      static_cast<std::size_t>(caps.num_vertices) * (caps.num_labels - 1);
  return caps.value_count() + 3 * num_nodes;
}

Labeling labeling_from_reachability(const ResidualState& residual) {
  const IshikawaCapacities& caps = residual.caps;
  int ell = caps.num_labels;
  Adjacency adj(caps.num_vertices, caps.edges);
  Reachability reach = reachable_from_source(caps, adj);
  if (reach.sink) {
    throw InternalInvariantError("terminal reachable: residual still has an augmenting path");
  }
  Labeling x(caps.num_vertices);
  for (int v = 0; v < caps.num_vertices; ++v) {
    int lowest = ell;  // level of the lowest reachable node, ell if none
    for (int lam = ell - 1; lam >= 1; --lam) {
      if (reach.node[node_id(v, lam, ell)]) {
        lowest = lam;
      } else {
        break;
      }
    }
    // Upward closure: nothing below `lowest` may be reachable.
    for (int lam = 1; lam < lowest; ++lam) {
      if (reach.node[node_id(v, lam, ell)]) {
        throw InternalInvariantError("source-reachable set not upward-closed in column " +
                                     std::to_string(v));
      }
    }
    x[v] = lowest - 1;
  }
  return x;
}

bool augmenting_path_exists(const IshikawaCapacities& residual) {
  Adjacency adj(residual.num_vertices, residual.edges);
  return reachable_from_source(residual, adj).sink;
}

}  // namespace memf
