#ifndef MEMF_CLI_HPP
#define MEMF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "memf/energy.hpp"
#include "memf/report.hpp"

namespace memf {

// Runs one solver by name ("bruteforce", "reference", "poly", "block") and
// fills a report, including wall time. Throws on unknown names and oversized
// brute-force instances.
SolveReport run_solver(const std::string& name, const EnergyModel& model,
                       bool diagnostics = false);

// Binary P5, maxval 255, pixel = round(255 * label / (ell - 1)).
void write_pgm(std::ostream& out, const Labeling& labeling, int width, int height, int ell);

// Full command-line surface; returns the process exit code (0 success,
// 1 usage or input error, 2 solver disagreement in verify/compare mode).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memf

#endif
