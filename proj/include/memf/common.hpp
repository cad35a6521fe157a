#ifndef MEMF_COMMON_HPP
#define MEMF_COMMON_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace memf {

// All potentials, capacities and flows are exact 64-bit integers (fixed point).
using Value = std::int64_t;

// Sentinel for the implicit infinite upward edges. Never stored, never used in
// arithmetic; only compared against.
inline constexpr Value kInfiniteCapacity = std::numeric_limits<Value>::max();

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed caller input (dimension mismatch, bad labeling, bad flags).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a configured enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A pairwise term violates the multi-label submodularity condition.
class SubmodularityError : public Error {
 public:
  using Error::Error;
};

// The flow store cannot be reconciled with the initial capacities; indicates
// a bug in the encoding bookkeeping, not an input condition.
class CorruptedStoreError : public Error {
 public:
  using Error::Error;
};

// A solver invariant failed at runtime.
class InternalInvariantError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation was violated by its caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// SplitMix64. Fully specified, so identical seeds give bit-identical streams on
// every platform (std::uniform_int_distribution is implementation-defined).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-enough draw in [0, bound); uses a plain modulo, which keeps the
  // stream reproducible and is fine for instance generation.
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

 private:
  std::uint64_t state_;
};

// Dense (ell-1) x (ell-1) matrix of cross-edge values, indexed by levels
// lam, mu in [1, ell-1]. Level 0 does not exist for cross edges.
class LevelMatrix {
 public:
  LevelMatrix() : ell_(2) {}
  explicit LevelMatrix(int ell, Value fill = 0)
      : ell_(ell), data_(static_cast<std::size_t>(ell - 1) * (ell - 1), fill) {}

  Value& at(int lam, int mu) { return data_[idx(lam, mu)]; }
  Value at(int lam, int mu) const { return data_[idx(lam, mu)]; }

  int ell() const { return ell_; }
  std::size_t value_count() const { return data_.size(); }

  friend bool operator==(const LevelMatrix&, const LevelMatrix&) = default;

 private:
  std::size_t idx(int lam, int mu) const {
    return static_cast<std::size_t>(lam - 1) * (ell_ - 1) + (mu - 1);
  }

  int ell_;
  std::vector<Value> data_;
};

}  // namespace memf

#endif
