#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qcons/simulation.hpp"

namespace qcons {

struct Series {
  std::string label;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string y_label;
  bool log_y{false};
};

/// Standalone SVG line chart over k = 0..len-1 with jammed samples shaded.
std::string svg_chart(const ChartSpec& spec, const std::vector<Series>& series, const std::vector<bool>& jammed);

/// delta.svg, theta.svg and symbols.svg in `dir`; returns the paths written.
std::vector<std::filesystem::path> write_plots(const SimTrace& trace, const std::filesystem::path& dir);

}  // namespace qcons
