#ifndef MEMF_ADJACENCY_HPP
#define MEMF_ADJACENCY_HPP

#include <algorithm>
#include <vector>

#include "memf/common.hpp"
#include "memf/energy.hpp"

namespace memf {

// Directed view of an undirected MRF edge. For edge index e with stored
// endpoints (i, j), the forward direction i->j has directed id 2e and the
// reverse j->i has directed id 2e+1.
struct DirectedEdge {
  int neighbor;
  int edge;
  bool forward;  // true when this direction leaves the stored first endpoint

  int directed_id() const { return 2 * edge + (forward ? 0 : 1); }
  int reverse_id() const { return 2 * edge + (forward ? 1 : 0); }
};

class Adjacency {
 public:
  Adjacency() = default;
  Adjacency(int num_vertices, const std::vector<GridEdge>& edges)
      : num_vertices_(num_vertices), num_edges_(static_cast<int>(edges.size())),
        out_(num_vertices) {
    for (int e = 0; e < num_edges_; ++e) {
      out_[edges[e].i].push_back({edges[e].j, e, true});
      out_[edges[e].j].push_back({edges[e].i, e, false});
    }
    // Deterministic neighbor order.
    for (auto& list : out_) {
      std::sort(list.begin(), list.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        return a.neighbor != b.neighbor ? a.neighbor < b.neighbor : a.edge < b.edge;
      });
    }
  }

  const std::vector<DirectedEdge>& out(int v) const { return out_[v]; }
  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return num_edges_; }

 private:
  int num_vertices_ = 0;
  int num_edges_ = 0;
  std::vector<std::vector<DirectedEdge>> out_;
};

}  // namespace memf

#endif
