#ifndef MEMF_INSTANCE_IO_HPP
#define MEMF_INSTANCE_IO_HPP

#include <string>

#include "memf/energy.hpp"

namespace memf {

// Text instance format (UTF-8, '#' starts a comment, tokens whitespace
// separated):
//   mrf <V> <E> <L>
//   unary <i> <theta_i(0)> ... <theta_i(L-1)>          (V lines, each vertex once)
//   edge <i> <j> table <L*L row-major ints>            (E lines total)
//   edge <i> <j> fn <w> <linear|quadratic|huber> [<delta>]
// Huber tables/values use the doubled form (d^2 below delta, 2*delta*d -
// delta^2 above) so everything stays integral.
EnergyModel parse_instance(const std::string& text);

// Canonical serialization; identical models produce identical bytes.
// Functional pairwise specs stay symbolic.
std::string serialize_instance(const EnergyModel& model);

}  // namespace memf

#endif
