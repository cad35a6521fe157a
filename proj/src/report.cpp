#include "memf/report.hpp"

#include <sstream>

namespace memf {

std::string format_report(const SolveReport& report) {
  std::ostringstream out;
  out << "solver=" << report.solver << '\n';
  out << "energy=" << report.energy << '\n';
  out << "flow_total=" << report.flow_total << '\n';
  out << "constant=" << report.constant << '\n';
  out << "augmentations=" << report.augmentations << '\n';
  out << "reconstructions=" << report.reconstructions << '\n';
  out << "reconstruction_fallbacks=" << report.reconstruction_fallbacks << '\n';
  out << "stored_values_peak=" << report.stored_values_peak << '\n';
  out << "transient_values_peak=" << report.transient_values_peak << '\n';
  if (report.labeling) {
    out << "labeling=";
    for (std::size_t v = 0; v < report.labeling->size(); ++v) {
      if (v) out << ' ';
      out << (*report.labeling)[v];
    }
    out << '\n';
  }
  out << "wall_time_ms=" << report.wall_time_ms << '\n';
  return out.str();
}

}  // namespace memf
