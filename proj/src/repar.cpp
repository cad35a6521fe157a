#include "memf/repar.hpp"

#include <algorithm>

namespace memf {

Value evaluate_params(const MultiLabelParams& params, const Labeling& x) {
  if (x.size() != static_cast<std::size_t>(params.num_vertices)) {
    throw InvalidArgumentError("labeling length does not match vertex count");
  }
  Value total = 0;
  for (int v = 0; v < params.num_vertices; ++v) {
    total += params.unary[v][x[v]];
  }
  for (std::size_t e = 0; e < params.edges.size(); ++e) {
    total += params.pairwise_at(e, x[params.edges[e].i], x[params.edges[e].j]);
  }
  return total;
}

Value constant_term(const MultiLabelParams& params) {
  Value total = 0;
  for (const auto& u : params.unary) {
    total += *std::min_element(u.begin(), u.end());
  }
  return total;
}

MultiLabelParams reparametrize(const MultiLabelParams& params, const MessageField& messages) {
  if (messages.m.size() != 2 * params.edges.size()) {
    throw InvalidArgumentError("message field does not match edge count");
  }
  MultiLabelParams out = params;
  int ell = params.num_labels;
  for (std::size_t e = 0; e < params.edges.size(); ++e) {
    const std::vector<Value>& m_ij = messages.m[2 * e];      // onto endpoint i
    const std::vector<Value>& m_ji = messages.m[2 * e + 1];  // onto endpoint j
    for (int lam = 0; lam < ell; ++lam) {
      for (int mu = 0; mu < ell; ++mu) {
        out.pairwise_ref(e, lam, mu) -= m_ij[lam] + m_ji[mu];
      }
    }
    for (int lam = 0; lam < ell; ++lam) {
      out.unary[params.edges[e].i][lam] += m_ij[lam];
      out.unary[params.edges[e].j][lam] += m_ji[lam];
    }
  }
  return out;
}

std::pair<std::vector<Value>, std::vector<Value>> flow_loop_messages(int lam, int mu,
                                                                     Value alpha, int ell) {
  std::vector<Value> m_ij(ell, 0);
  std::vector<Value> m_ji(ell, 0);
  for (int l = lam; l < ell; ++l) m_ij[l] = -alpha;
  for (int l = mu; l < ell; ++l) m_ji[l] = alpha;
  return {m_ij, m_ji};
}

std::vector<Value> exit_flows_from_messages(const std::vector<Value>& m) {
  std::vector<Value> sigma(m.size() - 1);
  for (std::size_t lam = 1; lam < m.size(); ++lam) {
    sigma[lam - 1] = m[lam - 1] - m[lam];
  }
  return sigma;
}

std::vector<Value> messages_from_exit_flows(const std::vector<Value>& sigma) {
  std::vector<Value> m(sigma.size() + 1, 0);
  for (std::size_t lam = 1; lam < m.size(); ++lam) {
    m[lam] = m[lam - 1] - sigma[lam - 1];
  }
  return m;
}

bool check_equivalence(const MultiLabelParams& a, const MultiLabelParams& b,
                       std::uint64_t cap) {
  if (a.num_vertices != b.num_vertices || a.num_labels != b.num_labels) {
    throw InvalidArgumentError("parameter shapes differ");
  }
  std::uint64_t count = 1;
  for (int v = 0; v < a.num_vertices; ++v) {
    if (count > cap / static_cast<std::uint64_t>(a.num_labels)) {
      throw CapacityError("equivalence check too large: ell^n exceeds cap");
    }
    count *= static_cast<std::uint64_t>(a.num_labels);
  }
  Labeling x(a.num_vertices, 0);
  while (true) {
    if (evaluate_params(a, x) != evaluate_params(b, x)) return false;
    int pos = a.num_vertices - 1;
    while (pos >= 0 && x[pos] == a.num_labels - 1) {
      x[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++x[pos];
  }
  return true;
}

}  // namespace memf
