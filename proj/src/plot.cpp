#include "qcons/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcons/error.hpp"
#include "qcons/trace_io.hpp"

namespace qcons {

namespace {

constexpr double kWidth = 820;
constexpr double kHeight = 300;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 40;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::string svg_chart(const ChartSpec& spec, const std::vector<Series>& series, const std::vector<bool>& jammed) {
  std::size_t len = jammed.size();
  for (const auto& s : series) len = std::max(len, s.y.size());
  auto transform = [&](double v) { return spec.log_y ? std::log10(std::max(v, 1e-300)) : v; };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series)
    for (double v : s.y) {
      if (!std::isfinite(v) || (spec.log_y && v <= 0)) continue;
      lo = std::min(lo, transform(v));
      hi = std::max(hi, transform(v));
    }
  if (!(lo <= hi)) lo = 0, hi = 1;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double span = std::max<std::size_t>(len, 2) - 1;
  auto px = [&](double k) { return kLeft + plot_w * k / span; };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (transform(v) - lo) / (hi - lo)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double cell = plot_w / span;
  for (std::size_t k = 0; k < jammed.size(); ++k) {
    if (!jammed[k]) continue;
    os << "<rect x=\"" << fmt(px(static_cast<double>(k)) - cell / 2) << "\" y=\"" << kTop << "\" width=\"" << fmt(cell)
       << "\" height=\"" << plot_h << "\" fill=\"#d9d9d9\"/>\n";
  }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = kTop + plot_h * (1.0 - t / 4.0);
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
       << (spec.log_y ? "1e" + fmt(v) : fmt(v)) << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double k = span * t / 5.0;
    os << "<text x=\"" << fmt(px(k)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << fmt(k)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 6 << "\" text-anchor=\"middle\">k</text>\n";
  os << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\">" << spec.title << "</text>\n";
  os << "<text transform=\"translate(14," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << spec.y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << kPalette[s % kPalette.size()] << "\" points=\"";
    for (std::size_t k = 0; k < series[s].y.size(); ++k) {
      const double v = series[s].y[k];
      if (!std::isfinite(v) || (spec.log_y && v <= 0)) continue;
      os << fmt(px(static_cast<double>(k))) << ',' << fmt(py(v)) << ' ';
    }
    os << "\"><title>" << series[s].label << "</title></polyline>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> write_plots(const SimTrace& trace, const std::filesystem::path& dir) {
  std::vector<bool> jammed;
  std::vector<Series> deltas;
  std::vector<Series> symbols;
  Series theta{"theta", {}};
  for (int i = 0; i < trace.n_agents; ++i)
    for (int c = 0; c < trace.n_state; ++c) {
      const std::string tag = std::to_string(i + 1) + "_" + std::to_string(c + 1);
      deltas.push_back({"delta_" + tag, {}});
      symbols.push_back({"qsym_" + tag, {}});
    }
  for (const auto& r : trace.steps) {
    jammed.push_back(r.jammed);
    theta.y.push_back(r.theta);
    for (Eigen::Index j = 0; j < r.delta.size(); ++j) {
      deltas[j].y.push_back(r.delta(j));
      symbols[j].y.push_back(static_cast<double>(r.symbols(j)));
    }
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* file, const std::string& body) {
    const auto path = dir / file;
    std::ofstream out(path);
    if (!(out << body)) throw Error(ErrorCode::InvalidParams, "cannot write " + path.string());
    written.push_back(path);
  };
  emit("delta.svg", svg_chart({"deviation from the agent average", "delta_i(k)", false}, deltas, jammed));
  emit("theta.svg", svg_chart({"quantizer scale", "theta(k)", true}, {theta}, jammed));
  emit("symbols.svg", svg_chart({"transmitted symbols", "z_i(k)", false}, symbols, jammed));
  return written;
}

}  // namespace qcons
