#include "qcons/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace qcons {

char case_letter(SwitchCase c) { return "abcd"[static_cast<int>(c)]; }

double OracleResiduals::max() const {
  double m = compact;
  for (int c = 0; c < 4; ++c) m = std::max({m, alpha[c], xi_c[c], xi_o[c]});
  return m;
}

namespace {

// Q_R written out from its definition rather than shared with the encoder.
// Inputs within 1e-9 of a level boundary may legitimately round either way
// given floating-point differences in how the argument was formed, so both
// neighbouring levels are returned.
std::array<double, 2> admissible_levels(double chi, std::int64_t R, double sigma) {
  const double r = static_cast<double>(R);
  const double u = std::abs(chi) / sigma;
  auto level = [&](double uu) { return std::copysign(2.0 * sigma * std::min(r, std::floor((uu + 1.0) / 2.0)), chi); };
  return {level(u * (1 - 1e-9) - 1e-12), level(u * (1 + 1e-9) + 1e-12)};
}

double residual_with_quantization(const Vector& predicted_unq, const Vector& actual, double gamma, std::int64_t R,
                                  double sigma) {
  double worst = 0;
  for (Eigen::Index i = 0; i < predicted_unq.size(); ++i) {
    const auto levels = admissible_levels(predicted_unq(i), R, sigma);
    double best = kInf;
    for (double q : levels) best = std::min(best, std::abs((predicted_unq(i) - q) / gamma - actual(i)));
    worst = std::max(worst, best);
  }
  return worst;
}

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

OracleResiduals normalized_oracle(const SimTrace& trace, const SimSetup& setup) {
  if (setup.mode == SimMode::ScalarUnquantized) {
    throw Error(ErrorCode::InvalidParams, "the unquantized mode has no codec to check");
  }
  const DerivedMatrices d = build_matrices(setup.system, build_laplacian(setup.graph));
  const Matrix observer = d.A_N - d.FC_N;
  const double g1 = setup.codec.gamma1;
  const double g2 = setup.codec.gamma2;
  const auto R = setup.codec.quantizer.levels_R;
  const double sigma = setup.codec.quantizer.step_sigma;

  OracleResiduals out;
  for (std::size_t s = 1; s < trace.steps.size(); ++s) {
    const StepRecord& prev = trace.steps[s - 1];
    const StepRecord& cur = trace.steps[s];
    const bool active = prev.k >= 1 && !prev.jammed;
    const SwitchCase c = cur.jammed ? (active ? SwitchCase::C : SwitchCase::D) : (active ? SwitchCase::A : SwitchCase::B);
    const int ci = static_cast<int>(c);
    const double gamma = cur.jammed ? g2 : g1;
    ++out.count[ci];

    const Vector alpha0 = prev.delta / prev.theta;
    const Vector xc0 = prev.e_c / prev.theta;
    const Vector xo0 = prev.e_o / prev.theta;
    const Vector alpha1 = cur.delta / cur.theta;
    const Vector xc1 = cur.e_c / cur.theta;
    const Vector xo1 = cur.e_o / cur.theta;

    const Vector alpha_pred = active ? Vector((d.G * alpha0 + d.L_big * (xo0 + xc0)) / gamma) : Vector(d.A_N * alpha0 / gamma);
    out.alpha[ci] = std::max(out.alpha[ci], max_abs(alpha_pred - alpha1));

    out.xi_o[ci] = std::max(out.xi_o[ci], max_abs(observer * xo0 / gamma - xo1));

    const Vector inner = active ? Vector(d.H * xc0 - d.L_big * alpha0 + d.P * xo0) : Vector(d.A_N * xc0 + d.FC_N * xo0);
    const double r_c = cur.jammed ? max_abs(inner / gamma - xc1) : residual_with_quantization(inner, xc1, gamma, R, sigma);
    out.xi_c[ci] = std::max(out.xi_c[ci], r_c);

    const Vector x_pred = active ? Vector(d.A_N * prev.x - d.L_big * prev.x_tilde) : Vector(d.A_N * prev.x);
    const double scale = std::max(1.0, max_abs(cur.x));
    out.compact = std::max(out.compact, max_abs(x_pred - cur.x) / scale);
  }
  return out;
}

}  // namespace qcons
