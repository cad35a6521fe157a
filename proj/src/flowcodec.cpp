#include "memf/flowcodec.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace memf {

void record_cross_flow(FlowStore& store, int edge, bool from_forward_side, int lam, int mu,
                       Value alpha) {
  int from_id = 2 * edge + (from_forward_side ? 0 : 1);
  int to_id = 2 * edge + (from_forward_side ? 1 : 0);
  if (from_id >= static_cast<int>(store.exit.size())) {
    throw InvalidArgumentError("edge index out of range");
  }
  int ell_minus_1 = static_cast<int>(store.exit[from_id].size());
  if (lam < 1 || lam > ell_minus_1 || mu < 1 || mu > ell_minus_1) {
    throw InvalidArgumentError("cross-flow level out of range");
  }
  store.exit[from_id][lam - 1] += alpha;
  store.exit[to_id][mu - 1] -= alpha;
}

std::vector<Value> column_flows(const FlowStore& store, const Adjacency& adj, int v, int ell) {
  std::vector<Value> psi(ell);
  psi[ell - 1] = store.source_flow[v];
  for (int lam = ell - 1; lam >= 1; --lam) {
    Value outgoing = 0;
    for (const DirectedEdge& de : adj.out(v)) {
      outgoing += store.exit[de.directed_id()][lam - 1];
    }
    psi[lam - 1] = psi[lam] - outgoing;
  }
  return psi;
}

namespace {

// Greedy pass: route supplies on one side to demands on the other through the
// direct arcs between them, both scanned in descending level order.
void greedy_pair(const LevelMatrix& arcs, LevelMatrix& net, bool from_is_forward_side,
                 std::vector<Value>& supply, std::vector<Value>& demand) {
  int ell = arcs.ell();
  for (int a = ell - 1; a >= 1; --a) {
    if (supply[a - 1] == 0) continue;
    for (int b = ell - 1; b >= 1 && supply[a - 1] > 0; --b) {
      if (demand[b - 1] == 0) continue;
      // Residual of the direct arc a -> b given the net flow so far.
      Value used = from_is_forward_side ? net.at(a, b) : -net.at(b, a);
      Value cap = arcs.at(a, b) - used;
      Value push = std::min({supply[a - 1], demand[b - 1], cap});
      if (push <= 0) continue;
      if (from_is_forward_side) {
        net.at(a, b) += push;
      } else {
        net.at(b, a) -= push;
      }
      supply[a - 1] -= push;
      demand[b - 1] -= push;
    }
  }
}

}  // namespace

EdgeResidual reconstruct_edge(const LevelMatrix& initial_forward,
                              const LevelMatrix& initial_backward,
                              const std::vector<Value>& exit_forward,
                              const std::vector<Value>& exit_backward) {
  int ell = initial_forward.ell();
  EdgeResidual out;
  out.flow.net = LevelMatrix(ell);

  std::vector<Value> supply_i(ell - 1, 0), demand_i(ell - 1, 0);
  std::vector<Value> supply_j(ell - 1, 0), demand_j(ell - 1, 0);
  Value total_supply = 0, total_demand = 0;
  for (int lam = 1; lam <= ell - 1; ++lam) {
    Value s = exit_forward[lam - 1];
    if (s > 0) supply_i[lam - 1] = s, total_supply += s;
    if (s < 0) demand_i[lam - 1] = -s, total_demand -= s;
    Value t = exit_backward[lam - 1];
    if (t > 0) supply_j[lam - 1] = t, total_supply += t;
    if (t < 0) demand_j[lam - 1] = -t, total_demand -= t;
  }
  if (total_supply != total_demand) {
    throw CorruptedStoreError("exit-flows of an edge do not balance: supply " +
                              std::to_string(total_supply) + " vs demand " +
                              std::to_string(total_demand));
  }

  LevelMatrix& net = out.flow.net;
  greedy_pair(initial_forward, net, true, supply_i, demand_j);
  greedy_pair(initial_backward, net, false, supply_j, demand_i);

  Value remaining = std::accumulate(supply_i.begin(), supply_i.end(), Value{0}) +
                    std::accumulate(supply_j.begin(), supply_j.end(), Value{0});

  if (remaining > 0) {
    out.used_fallback = true;
    // BFS augmenting paths on the small network. Node ids: 0 source,
    // 1 terminal, 2..ell = side-i levels, ell+1..2ell-1 = side-j levels.
    int n = 2 * ell;
    std::vector<int> parent(n);
    std::vector<int> bfs;
    auto arc_cap = [&](int u, int w) -> Value {
      if (u == 0) {
        if (w > 1 && w <= ell) return supply_i[w - 2];
        if (w > ell) return supply_j[w - ell - 1];
        return 0;
      }
      if (w == 1) {
        if (u > 1 && u <= ell) return demand_i[u - 2];
        if (u > ell) return demand_j[u - ell - 1];
        return 0;
      }
      if (u > 1 && u <= ell && w > ell) {
        int a = u - 1, b = w - ell;
        return initial_forward.at(a, b) - net.at(a, b);
      }
      if (u > ell && w > 1 && w <= ell) {
        int b = u - ell, a = w - 1;
        return initial_backward.at(b, a) + net.at(a, b);
      }
      return 0;
    };
    while (remaining > 0) {
      std::fill(parent.begin(), parent.end(), -2);
      bfs.clear();
      parent[0] = -1;
      bfs.push_back(0);
      for (std::size_t head = 0; head < bfs.size() && parent[1] == -2; ++head) {
        int u = bfs[head];
        for (int w = 1; w < n; ++w) {
          if (parent[w] == -2 && arc_cap(u, w) > 0) {
            parent[w] = u;
            bfs.push_back(w);
            if (w == 1) break;
          }
        }
      }
      if (parent[1] == -2) {
        throw CorruptedStoreError(
            "edge flow reconstruction stuck with unrouted supply: store is inconsistent "
            "with the initial capacities");
      }
      Value push = remaining;
      for (int w = 1; w != 0; w = parent[w]) push = std::min(push, arc_cap(parent[w], w));
      for (int w = 1; w != 0; w = parent[w]) {
        int u = parent[w];
        if (u == 0) {
          (w <= ell ? supply_i[w - 2] : supply_j[w - ell - 1]) -= push;
        } else if (w == 1) {
          (u <= ell ? demand_i[u - 2] : demand_j[u - ell - 1]) -= push;
        } else if (u <= ell) {
          net.at(u - 1, w - ell) += push;
        } else {
          net.at(w - 1, u - ell) -= push;
        }
      }
      remaining -= push;
    }
  }

  out.forward = LevelMatrix(ell);
  out.backward = LevelMatrix(ell);
  for (int lam = 1; lam <= ell - 1; ++lam) {
    for (int mu = 1; mu <= ell - 1; ++mu) {
      Value fwd = initial_forward.at(lam, mu) - net.at(lam, mu);
      Value bwd = initial_backward.at(mu, lam) + net.at(lam, mu);
      if (fwd < 0 || bwd < 0) {
        throw CorruptedStoreError("reconstructed residual capacity is negative");
      }
      out.forward.at(lam, mu) = fwd;
      out.backward.at(mu, lam) = bwd;
    }
  }
  out.transient_values = 3 * out.forward.value_count() + 6 * (ell - 1);
  return out;
}

IshikawaCapacities residual_from_store(const IshikawaCapacities& initial, const FlowStore& store,
                                       const Adjacency& adj) {
  int ell = initial.num_labels;
  IshikawaCapacities residual = initial;
  for (int v = 0; v < initial.num_vertices; ++v) {
    std::vector<Value> psi = column_flows(store, adj, v, ell);
    for (int lam = 0; lam < ell; ++lam) {
      residual.column[v][lam] -= psi[lam];
      if (residual.column[v][lam] < 0) {
        throw CorruptedStoreError("negative column residual at vertex " + std::to_string(v) +
                                  " level " + std::to_string(lam));
      }
    }
  }
  for (std::size_t e = 0; e < initial.edges.size(); ++e) {
    EdgeResidual er =
        reconstruct_edge(initial.cross[e].forward, initial.cross[e].backward,
                         store.exit[2 * e], store.exit[2 * e + 1]);
    residual.cross[e].forward = std::move(er.forward);
    residual.cross[e].backward = std::move(er.backward);
  }
  return residual;
}

}  // namespace memf
