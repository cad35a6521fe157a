#include "memf/energy.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace memf {

Value PairwiseSpec::eval(int lam, int mu, int ell) const {
  if (is_table) {
    return values[static_cast<std::size_t>(lam) * ell + mu];
  }
  Value d = lam >= mu ? lam - mu : mu - lam;
  switch (kind) {
    case Regularizer::kLinear:
      return weight * d;
    case Regularizer::kQuadratic:
      return weight * d * d;
    case Regularizer::kHuber:
      if (d <= huber_delta) return weight * d * d;
      return weight * (2 * huber_delta * d - huber_delta * huber_delta);
  }
  return 0;
}

void validate_model(const EnergyModel& model) {
  if (model.num_labels < 2) {
    throw InvalidArgumentError("model needs at least 2 labels");
  }
  if (model.num_vertices < 0) {
    throw InvalidArgumentError("negative vertex count");
  }
  if (model.unary.size() != static_cast<std::size_t>(model.num_vertices)) {
    throw InvalidArgumentError("unary table count does not match vertex count");
  }
  for (const auto& u : model.unary) {
    if (u.size() != static_cast<std::size_t>(model.num_labels)) {
      throw InvalidArgumentError("unary table has wrong number of labels");
    }
  }
  if (model.pairwise.size() != model.edges.size()) {
    throw InvalidArgumentError("pairwise spec count does not match edge count");
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    const GridEdge& edge = model.edges[e];
    if (edge.i < 0 || edge.j < 0 || edge.i >= model.num_vertices ||
        edge.j >= model.num_vertices) {
      throw InvalidArgumentError("edge endpoint out of range");
    }
    if (edge.i == edge.j) {
      throw InvalidArgumentError("self loop at vertex " + std::to_string(edge.i));
    }
    auto key = std::minmax(edge.i, edge.j);
    if (!seen.insert(key).second) {
      throw InvalidArgumentError("duplicate edge (" + std::to_string(key.first) + "," +
                                 std::to_string(key.second) + ")");
    }
    const PairwiseSpec& spec = model.pairwise[e];
    if (spec.is_table) {
      std::size_t want = static_cast<std::size_t>(model.num_labels) * model.num_labels;
      if (spec.values.size() != want) {
        throw InvalidArgumentError("pairwise table has wrong dimensions");
      }
    } else if (spec.kind == Regularizer::kHuber && spec.huber_delta < 1) {
      throw InvalidArgumentError("huber delta must be >= 1");
    } else if (spec.weight < 0) {
      throw InvalidArgumentError("regularizer weight must be nonnegative");
    }
  }
}

Value evaluate_energy(const EnergyModel& model, const Labeling& x) {
  if (x.size() != static_cast<std::size_t>(model.num_vertices)) {
    throw InvalidArgumentError("labeling length does not match vertex count");
  }
  for (int v = 0; v < model.num_vertices; ++v) {
    if (x[v] < 0 || x[v] >= model.num_labels) {
      throw InvalidArgumentError("label out of range at vertex " + std::to_string(v));
    }
  }
  Value total = 0;
  for (int v = 0; v < model.num_vertices; ++v) {
    total += model.unary[v][x[v]];
  }
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    total += model.pairwise_at(e, x[model.edges[e].i], x[model.edges[e].j]);
  }
  return total;
}

bool check_submodular(const PairwiseSpec& spec, int ell) {
  for (int a = 0; a + 1 < ell; ++a) {
    for (int b = 0; b + 1 < ell; ++b) {
      Value second_diff = spec.eval(a, b + 1, ell) + spec.eval(a + 1, b, ell) -
                          spec.eval(a, b, ell) - spec.eval(a + 1, b + 1, ell);
      if (second_diff < 0) return false;
    }
  }
  return true;
}

bool check_submodular(const EnergyModel& model) {
  for (const PairwiseSpec& spec : model.pairwise) {
    if (!check_submodular(spec, model.num_labels)) return false;
  }
  return true;
}

std::pair<Labeling, Value> brute_force_minimize(const EnergyModel& model,
                                                std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int v = 0; v < model.num_vertices; ++v) {
    if (count > cap / static_cast<std::uint64_t>(model.num_labels)) {
      throw CapacityError("brute force instance too large: ell^n exceeds cap");
    }
    count *= static_cast<std::uint64_t>(model.num_labels);
  }

  Labeling x(model.num_vertices, 0);
  Labeling best = x;
  Value best_energy = evaluate_energy(model, x);
  // Odometer over labelings in lexicographic order; strict improvement keeps
  // the lexicographically smallest minimizer.
  while (true) {
    int pos = model.num_vertices - 1;
    while (pos >= 0 && x[pos] == model.num_labels - 1) {
      x[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++x[pos];
    Value energy = evaluate_energy(model, x);
    if (energy < best_energy) {
      best_energy = energy;
      best = x;
    }
  }
  return {best, best_energy};
}

EnergyModel generate_grid_instance(int width, int height, int ell, Regularizer reg,
                                   Value weight, Value unary_max, std::uint64_t seed,
                                   Value huber_delta) {
  if (width < 1 || height < 1) {
    throw InvalidArgumentError("grid dimensions must be >= 1");
  }
  if (ell < 2) {
    throw InvalidArgumentError("need at least 2 labels");
  }
  EnergyModel model;
  model.num_vertices = width * height;
  model.num_labels = ell;
  SplitMix64 rng(seed);
  model.unary.resize(model.num_vertices);
  for (int v = 0; v < model.num_vertices; ++v) {
    model.unary[v].resize(ell);
    for (int lam = 0; lam < ell; ++lam) {
      model.unary[v][lam] = static_cast<Value>(rng.below(static_cast<std::uint64_t>(unary_max)));
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int v = y * width + x;
      if (x + 1 < width) {
        model.edges.push_back({v, v + 1});
        model.pairwise.push_back(PairwiseSpec::fn(weight, reg, huber_delta));
      }
      if (y + 1 < height) {
        model.edges.push_back({v, v + width});
        model.pairwise.push_back(PairwiseSpec::fn(weight, reg, huber_delta));
      }
    }
  }
  return model;
}

}  // namespace memf
