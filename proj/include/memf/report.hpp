#ifndef MEMF_REPORT_HPP
#define MEMF_REPORT_HPP

#include <optional>
#include <string>

#include "memf/common.hpp"
#include "memf/energy.hpp"

namespace memf {

// Machine-readable outcome of one solve. Counters measure live stored integer
// values held by the solver (excluding the model itself), not process RSS:
// stored_values_peak covers state retained between augmentations,
// transient_values_peak covers per-operation scratch such as the per-edge
// reconstruction matrices.
struct SolveReport {
  std::string solver;
  Value energy = 0;
  Value flow_total = 0;
  Value constant = 0;
  std::optional<Labeling> labeling;
  long augmentations = 0;
  long reconstructions = 0;
  long reconstruction_fallbacks = 0;
  std::size_t stored_values_peak = 0;
  std::size_t transient_values_peak = 0;
  long wall_time_ms = 0;
};

// key=value lines, fixed order, labeling space-separated on one line.
// Deterministic except for the wall_time_ms line.
std::string format_report(const SolveReport& report);

}  // namespace memf

#endif
