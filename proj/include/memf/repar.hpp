#ifndef MEMF_REPAR_HPP
#define MEMF_REPAR_HPP

#include <utility>
#include <vector>

#include "memf/common.hpp"
#include "memf/energy.hpp"

namespace memf {

// Indicator-variable form of the energy: explicit per-node weights
// theta_{i:lam} and per-edge weights theta_{ij:lam,mu}. Exactly one indicator
// is active per vertex, so evaluation sums one node weight per vertex and one
// edge weight per edge.
struct MultiLabelParams {
  int num_vertices = 0;
  int num_labels = 0;
  std::vector<GridEdge> edges;
  std::vector<std::vector<Value>> unary;     // [vertex][label]
  std::vector<std::vector<Value>> pairwise;  // [edge], row-major ell x ell

  Value pairwise_at(std::size_t e, int lam, int mu) const {
    return pairwise[e][static_cast<std::size_t>(lam) * num_labels + mu];
  }
  Value& pairwise_ref(std::size_t e, int lam, int mu) {
    return pairwise[e][static_cast<std::size_t>(lam) * num_labels + mu];
  }

  friend bool operator==(const MultiLabelParams&, const MultiLabelParams&) = default;
};

Value evaluate_params(const MultiLabelParams& params, const Labeling& x);

// Messages per directed edge: entry 2e holds m_{ij} (swept from edge e=(i,j)
// onto node i), entry 2e+1 holds m_{ji}. Each vector indexed by label.
struct MessageField {
  std::vector<std::vector<Value>> m;

  static MessageField zero(int num_edges, int ell) {
    MessageField f;
    f.m.assign(static_cast<std::size_t>(2 * num_edges), std::vector<Value>(ell, 0));
    return f;
  }
};

// theta_c: sum over vertices of the minimum node weight.
Value constant_term(const MultiLabelParams& params);

// theta'_{ij:lam,mu} = theta_{ij:lam,mu} - m_{ij:lam} - m_{ji:mu}
// theta'_{i:lam}     = theta_{i:lam} + sum over incident edges of the message
//                      swept onto node i. Preserves every labeling's energy.
MultiLabelParams reparametrize(const MultiLabelParams& params, const MessageField& messages);

// Messages equivalent to one flow-loop m(lam, mu, alpha):
// m_ij = -alpha at labels >= lam, m_ji = +alpha at labels >= mu, zero below.
std::pair<std::vector<Value>, std::vector<Value>> flow_loop_messages(int lam, int mu,
                                                                     Value alpha, int ell);

// Exit-flow vector (levels 1..ell-1 at index level-1) from a message vector:
// Sigma_{ij:lam} = m_{ij:lam-1} - m_{ij:lam}.
std::vector<Value> exit_flows_from_messages(const std::vector<Value>& m);

// Inverse under the gauge m_{ij:0} = 0.
std::vector<Value> messages_from_exit_flows(const std::vector<Value>& sigma);

// Exhaustive equality of energies over all labelings. Throws CapacityError
// when ell^n exceeds the cap.
bool check_equivalence(const MultiLabelParams& a, const MultiLabelParams& b,
                       std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace memf

#endif
