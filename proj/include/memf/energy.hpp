#ifndef MEMF_ENERGY_HPP
#define MEMF_ENERGY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "memf/common.hpp"

namespace memf {

enum class Regularizer { kLinear, kQuadratic, kHuber };

// Pairwise term of one MRF edge: either an explicit ell x ell table, or a
// weighted function of the label difference, kept symbolic (never expanded to
// an ell^2 table at rest).
//
// Huber is stored doubled so that it stays integral: theta(d) = d^2 for
// d <= delta, else 2*delta*d - delta^2. This is exactly twice the usual
// d^2/2 / delta*(d - delta/2) form.
struct PairwiseSpec {
  static PairwiseSpec table(std::vector<Value> values) {
    PairwiseSpec s;
    s.is_table = true;
    s.values = std::move(values);
    return s;
  }

  static PairwiseSpec fn(Value weight, Regularizer kind, Value huber_delta = 1) {
    PairwiseSpec s;
    s.is_table = false;
    s.weight = weight;
    s.kind = kind;
    s.huber_delta = huber_delta;
    return s;
  }

  // theta_ij(lam, mu) for labels in [0, ell).
  Value eval(int lam, int mu, int ell) const;

  bool is_table = false;
  std::vector<Value> values;  // row-major ell x ell when is_table
  Value weight = 0;
  Regularizer kind = Regularizer::kLinear;
  Value huber_delta = 1;
};

struct GridEdge {
  int i;
  int j;

  friend bool operator==(const GridEdge&, const GridEdge&) = default;
};

struct EnergyModel {
  int num_vertices = 0;
  int num_labels = 0;
  std::vector<GridEdge> edges;                  // unordered pairs, no duplicates
  std::vector<std::vector<Value>> unary;        // [vertex][label]
  std::vector<PairwiseSpec> pairwise;           // parallel to edges

  Value unary_at(int v, int lam) const { return unary[v][lam]; }
  Value pairwise_at(std::size_t e, int lam, int mu) const {
    return pairwise[e].eval(lam, mu, num_labels);
  }
};

using Labeling = std::vector<int>;

// Structural checks: endpoint ranges, duplicate edges, table dimensions,
// unary table shapes, huber delta >= 1. Throws InvalidArgumentError.
void validate_model(const EnergyModel& model);

// E(x) = sum_i theta_i(x_i) + sum_(i,j) theta_ij(x_i, x_j).
Value evaluate_energy(const EnergyModel& model, const Labeling& x);

// Multi-label submodularity. Checks only consecutive second differences
//   theta(a,b+1) + theta(a+1,b) - theta(a,b) - theta(a+1,b+1) >= 0
// for all a,b in [0, ell-2]. This implies the general condition (the quadruple
// expression for any lam < lam', mu < mu' is a sum of consecutive second
// differences over the rectangle between them).
bool check_submodular(const PairwiseSpec& spec, int ell);
bool check_submodular(const EnergyModel& model);

inline constexpr std::uint64_t kDefaultBruteForceCap = 10'000'000;

// Exhaustive minimizer; ties broken by lexicographically smallest labeling.
// Throws CapacityError when ell^num_vertices exceeds the cap.
std::pair<Labeling, Value> brute_force_minimize(const EnergyModel& model,
                                                std::uint64_t cap = kDefaultBruteForceCap);

// Row-major W x H grid with 4-connected edges (right edge, then down edge, per
// vertex in row-major order). Unaries are drawn uniformly from
// [0, unary_max) by a seeded SplitMix64; identical arguments give a
// bit-identical model.
EnergyModel generate_grid_instance(int width, int height, int ell, Regularizer reg,
                                   Value weight, Value unary_max, std::uint64_t seed,
                                   Value huber_delta = 1);

}  // namespace memf

#endif
