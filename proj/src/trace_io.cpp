#include "qcons/trace_io.hpp"

#include <array>
#include <charconv>

namespace qcons {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc() ? std::string(buf.data(), end) : std::string("nan");
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "k,t,jammed,theta,sat_any";
  for (const char* prefix : {"delta", "qsym"}) {
    for (int i = 1; i <= trace.n_agents; ++i)
      for (int c = 1; c <= trace.n_state; ++c) out << ',' << prefix << '_' << i << '_' << c;
  }
  out << '\n';
  for (const auto& r : trace.steps) {
    out << r.k << ',' << format_double(r.t) << ',' << (r.jammed ? 1 : 0) << ',' << format_double(r.theta) << ','
        << (r.sat_any ? 1 : 0);
    for (Eigen::Index i = 0; i < r.delta.size(); ++i) out << ',' << format_double(r.delta(i));
    for (Eigen::Index i = 0; i < r.symbols.size(); ++i) out << ',' << r.symbols(i);
    out << '\n';
  }
}

}  // namespace qcons
