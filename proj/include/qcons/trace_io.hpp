#pragma once

#include <ostream>
#include <string>

#include "qcons/simulation.hpp"

namespace qcons {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Columns: k, t, jammed, theta, sat_any, delta_<i>_<c> for every agent i and
/// component c, then qsym_<i>_<c>. Agents and components are 1-based.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

}  // namespace qcons
