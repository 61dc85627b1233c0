#include "qcons/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "qcons/scenario.hpp"

namespace qcons {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DerivedMatrices build_matrices(const SystemSpec& spec, const LaplacianSpectrum& spectrum) {
  if (auto v = dimension_violations(spec); !v.empty()) throw Error(ErrorCode::DimensionMismatch, v.front(), v);
  const auto agents = spectrum.laplacian.rows();
  if (agents < 2) throw Error(ErrorCode::DisconnectedGraph, "need at least two agents");
  const auto n = spec.A.rows();
  const Matrix eye_n = Matrix::Identity(agents, agents);
  const Matrix bk = spec.B * spec.K_gain;

  DerivedMatrices d;
  d.A_N = kron(eye_n, spec.A);
  d.FC_N = kron(eye_n, spec.F_gain * spec.C_out);
  d.L_big = kron(spectrum.laplacian, bk);
  d.G = d.A_N - d.L_big;
  d.H = d.A_N + d.L_big;
  d.P = d.L_big + d.FC_N;
  d.J_block = Matrix::Zero((agents - 1) * n, (agents - 1) * n);
  for (Eigen::Index i = 1; i < agents; ++i) {
    d.J_block.block((i - 1) * n, (i - 1) * n, n, n) = spec.A - spectrum.eigenvalues(i) * bk;
  }
  const auto m = agents * n;
  d.S = Matrix::Zero(2 * m, 2 * m);
  d.S.topLeftCorner(m, m) = d.A_N;
  d.S.topRightCorner(m, m) = d.FC_N;
  d.S.bottomRightCorner(m, m) = d.A_N - d.FC_N;
  return d;
}

bool ConditionReport::all_pass() const {
  return structural_errors.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second.pass; });
}

namespace {

double growth(const Matrix& m) {
  const double rho = spectral_radius(m);
  return growth_constant(m, rho).constant;
}

}  // namespace

double dos_bound(double gamma1, double gamma2) {
  if (!(gamma2 > gamma1)) throw Error(ErrorCode::DegenerateFactors, "bound needs gamma2 > gamma1");
  if (!(gamma1 > 0 && gamma1 < 1)) throw Error(ErrorCode::InvalidRange, "bound needs 0 < gamma1 < 1");
  return -std::log(gamma1) / (std::log(gamma2) - std::log(gamma1));
}

double unquantized_bound(double A, double rho_J) {
  if (!(A > 1 && rho_J > 0 && rho_J < 1)) throw Error(ErrorCode::InvalidRange, "need A > 1 > rho_J > 0");
  return -std::log(rho_J) / (std::log(A) - std::log(rho_J));
}

double scalar_gamma2(double gamma1, double A, double rho_J) {
  if (!(A > 1 && rho_J > 0 && rho_J < 1 && gamma1 > 0 && gamma1 < 1)) {
    throw Error(ErrorCode::InvalidRange, "need A > 1 and 0 < rho_J, gamma1 < 1");
  }
  return std::exp(std::log(gamma1) * std::log(A) / std::log(rho_J));
}

ConditionReport lemma3_check(const SystemSpec& spec, const LaplacianSpectrum& spectrum, double gamma1,
                             double gamma2, const DosBudget& budget, double theta0, double sigma) {
  const DerivedMatrices d = build_matrices(spec, spectrum);
  const Matrix afc = spec.A - spec.F_gain * spec.C_out;

  ConditionReport r;
  r.mode = "general";
  r.gamma1 = gamma1;
  r.gamma2 = gamma2;
  r.budget = budget;
  r.lambda2 = spectrum.lambda2();
  r.rho_A = spectral_radius(spec.A);
  r.rho_J = spectral_radius(d.J_block);
  r.rho_AFC = spectral_radius(afc);

  const double select_margin = std::min({gamma1 - r.rho_J, 1.0 - gamma1, gamma2 - r.rho_A});
  if (!(select_margin > 0)) {
    throw Error(ErrorCode::SelectionViolated,
                "need rho(J) < gamma1 < 1 and gamma2 > rho(A); rho(J) = " + std::to_string(r.rho_J) +
                    ", rho(A) = " + std::to_string(r.rho_A));
  }
  r.set("selection_34", true, select_margin);

  r.gamma0 = std::max(r.rho_J / gamma1, r.rho_A / gamma2);
  r.c_a = growth(spec.A);
  r.c_j = growth(d.J_block);
  const double log_cc = std::log(r.c_a * r.c_j);
  r.bound_35 = log_cc > 0 ? -std::log(r.gamma0) / log_cc : kInf;
  const double freq = spec.delta_s / budget.tau_d;
  r.set("frequency_35", freq < r.bound_35, r.bound_35 - freq);

  r.c1 = std::pow(r.c_a * r.c_j, budget.eta);
  r.gamma3 = std::pow(r.c_a * r.c_j, freq) * r.gamma0;
  r.c2 = growth(afc);
  r.set("observer_rate", r.rho_AFC < gamma1, gamma1 - r.rho_AFC);

  r.norm_L = induced_two_norm(d.L_big);
  const double cx = spec.C_x0 / theta0;
  if (r.gamma3 < 1) {
    r.c3 = std::max(2.0 * r.c1 * cx,
                    r.c1 * r.c_a * r.norm_L / (1.0 - r.gamma3) * (sigma / (gamma1 * gamma1) + r.c2 * cx / gamma1));
  } else {
    r.c3 = kInf;
    r.notes.push_back("gamma3 >= 1: C3 is unbounded");
  }
  return r;
}

ConditionReport theorem1_check(ConditionReport r, const SystemSpec& spec, const LaplacianSpectrum& spectrum,
                               double gamma1, double gamma2, std::int64_t R, double sigma, double theta0,
                               const DosBudget& budget) {
  const DerivedMatrices d = build_matrices(spec, spectrum);
  const Matrix afc = spec.A - spec.F_gain * spec.C_out;
  const auto nN = static_cast<double>(d.A_N.rows());
  const double cx = spec.C_x0 / theta0;

  const Matrix s_scaled = d.S / gamma2;
  r.c4 = growth_constant(s_scaled, spectral_radius(s_scaled)).constant;
  r.norm_H = induced_two_norm(d.H);
  r.norm_P = induced_two_norm(d.P);
  r.norm_AFC = induced_two_norm(afc);
  if (std::isnan(r.norm_L)) r.norm_L = induced_two_norm(d.L_big);

  Matrix top(d.A_N.rows(), 2 * d.A_N.cols());
  top << d.A_N, d.FC_N;
  r.norm_AN_FCN_inf = induced_inf_norm(top);
  r.zeta = std::max(1.0, r.c4 * r.norm_AN_FCN_inf / gamma2);

  const double first = r.c3 * r.norm_L + r.norm_H * sigma / gamma1 + r.norm_P * r.c2 * cx;
  const double second = r.norm_AFC * r.c2 * cx;
  r.c5 = std::sqrt(first * first + second * second);
  r.bound_40 = r.zeta * r.c5 * std::sqrt(nN);
  r.range_capacity = (2.0 * static_cast<double>(R) + 1.0) * sigma;
  r.set("range_40", r.range_capacity >= r.bound_40, r.range_capacity - r.bound_40);

  r.dos_level = budget.level(spec.delta_s);
  r.bound_45 = dos_bound(gamma1, gamma2);
  r.set("consensus_45", r.dos_level < r.bound_45, r.bound_45 - r.dos_level);
  return r;
}

ConditionReport scalar_check(double A, double B, double K, const LaplacianSpectrum& spectrum, double gamma1,
                             std::int64_t R, double sigma, double theta0, double C_x0, const DosBudget& budget,
                             double delta, std::int64_t M, std::optional<double> gamma2_override) {
  const auto agents = spectrum.laplacian.rows();
  ConditionReport r;
  r.mode = "scalar";
  r.gamma1 = gamma1;
  r.budget = budget;
  r.M = M;
  r.lambda2 = spectrum.lambda2();
  r.rho_A = std::abs(A);
  r.rho_J = 0;
  for (Eigen::Index i = 1; i < agents; ++i) r.rho_J = std::max(r.rho_J, std::abs(A - spectrum.eigenvalues(i) * B * K));
  if (!(r.rho_J < gamma1 && gamma1 < 1)) {
    throw Error(ErrorCode::SelectionViolated, "need rho(J) < gamma1 < 1; rho(J) = " + std::to_string(r.rho_J));
  }
  if (!(A > 1)) throw Error(ErrorCode::InvalidRange, "scalar analysis needs A > 1");
  if (M < 0) throw Error(ErrorCode::InvalidParams, "M must be >= 0");
  r.set("selection", true, std::min(gamma1 - r.rho_J, 1.0 - gamma1));

  const double derived = scalar_gamma2(gamma1, A, r.rho_J);
  r.gamma2 = gamma2_override.value_or(derived);
  r.gamma2_derived = !gamma2_override.has_value();
  r.dos_level = budget.level(delta);
  r.bound_69 = unquantized_bound(A, r.rho_J);

  // Both terms of the min; they coincide when gamma2 follows from gamma1.
  const double zoom_term = dos_bound(gamma1, r.gamma2);
  const double log_a = std::log(A / r.gamma2);
  const double log_j = std::log(r.rho_J / gamma1);
  const double contraction_term = log_a > log_j ? -log_j / (log_a - log_j) : kInf;
  r.bound_45 = zoom_term;
  double dos_threshold = r.bound_69;
  if (std::abs(zoom_term - contraction_term) > 1e-10 || std::abs(zoom_term - r.bound_69) > 1e-10) {
    dos_threshold = std::min(zoom_term, contraction_term);
    r.notes.push_back("gamma2 = " + std::to_string(r.gamma2) + " differs from the derived " + std::to_string(derived) +
                      "; the unquantized bound is not recovered and the min of both terms applies");
  }
  r.set("consensus_69", r.dos_level < dos_threshold, dos_threshold - r.dos_level);

  const double ratio = r.rho_A * gamma1 / (r.rho_J * r.gamma2);
  r.c6 = std::pow(ratio, (budget.kappa + budget.eta * delta) / delta);
  r.gamma4 = std::pow(ratio, r.dos_level) * r.rho_J / gamma1;
  r.set("gamma4_contracting", r.gamma4 < 1, 1.0 - r.gamma4);

  Matrix lg = spectrum.laplacian * (B * K);
  Matrix lh(agents, 2 * agents);
  lh << -lg, A * Matrix::Identity(agents, agents) + lg;
  r.norm_LH_inf = induced_inf_norm(lh);
  r.zeta = std::pow(std::max(1.0, A / r.gamma2), static_cast<double>(M));
  r.range_capacity = (2.0 * static_cast<double>(R) + 1.0) * sigma;
  if (r.gamma4 < 1) {
    r.c7 = std::max(2.0 * r.c6 * C_x0 / theta0, r.c6 * sigma / (gamma1 * gamma1 * (1.0 - r.gamma4)));
    r.bound_40 = r.zeta * r.norm_LH_inf * r.c7 * std::sqrt(static_cast<double>(agents));
  } else {
    r.c7 = kInf;
    r.bound_40 = kInf;
    r.notes.push_back("gamma4 >= 1 at the declared DoS level: the range bound is unbounded");
  }
  r.set("scalar_range", r.range_capacity >= r.bound_40, r.range_capacity - r.bound_40);
  return r;
}

Envelope unquantized_envelope(double A, double rho_J, const DosBudget& budget, double delta) {
  const double level = budget.level(delta);
  if (!(level < 1)) throw Error(ErrorCode::BudgetTooLarge, "1/T + delta/tau_d must be < 1");
  return {std::pow(A / rho_J, (budget.kappa + budget.eta * delta) / delta),
          std::pow(rho_J, 1.0 - level) * std::pow(A, level)};
}

namespace {

void record_error(ConditionReport& r, const std::string& what, const Error& e) {
  r.structural_errors.push_back(what + ": " + e.what());
}

}  // namespace

ConditionReport validate(const ScenarioConfig& sc) {
  ConditionReport r;
  r.mode = to_string(sc.mode);
  for (const auto& v : scenario_violations(sc)) r.structural_errors.push_back(v);
  if (!r.structural_errors.empty()) return r;

  const SystemSpec& spec = sc.system;
  const DosBudget budget = declared_budget(sc);
  LaplacianSpectrum spectrum;
  DosSignal signal;
  try {
    spectrum = build_laplacian(resolve_graph(sc));
  } catch (const Error& e) {
    record_error(r, "graph", e);
    return r;
  }
  try {
    signal = resolve_signal(sc);
  } catch (const Error& e) {
    record_error(r, "dos", e);
    return r;
  }

  const DerivedMatrices d = build_matrices(spec, spectrum);
  const double rho_J = spectral_radius(d.J_block);
  const double rho_AFC = spectral_radius(Matrix(spec.A - spec.F_gain * spec.C_out));
  if (!(rho_J < 1)) r.structural_errors.push_back("ConsensusGainUnstable: rho(J) = " + std::to_string(rho_J));
  if (sc.mode == SimMode::General && !(rho_AFC < 1)) {
    r.structural_errors.push_back("ObserverUnstable: rho(A - FC) = " + std::to_string(rho_AFC));
  }

  const std::int64_t M = sc.M.value_or(max_consecutive_losses(signal, spec.delta_s, sc.horizon));
  ConditionReport out;
  try {
    if (sc.mode == SimMode::General) {
      out = lemma3_check(spec, spectrum, sc.gamma1, *sc.gamma2, budget, sc.theta0, sc.sigma);
      out = theorem1_check(std::move(out), spec, spectrum, sc.gamma1, *sc.gamma2, sc.R, sc.sigma, sc.theta0, budget);
      out.M = M;
    } else {
      const std::optional<double> override = sc.gamma2_derived ? std::nullopt : sc.gamma2;
      out = scalar_check(spec.A(0, 0), spec.B(0, 0), spec.K_gain(0, 0), spectrum, sc.gamma1, sc.R, sc.sigma,
                         sc.theta0, spec.C_x0, budget, spec.delta_s, M, override);
      if (sc.mode == SimMode::ScalarUnquantized) {
        // No quantizer: only the DoS level matters.
        out.verdicts.erase("scalar_range");
        out.verdicts.erase("gamma4_contracting");
      }
    }
  } catch (const Error& e) {
    out.mode = r.mode;
    if (e.code() == ErrorCode::SelectionViolated) {
      out.set(sc.mode == SimMode::General ? "selection_34" : "selection", false, kNaN);
      out.notes.push_back(e.what());
    } else {
      record_error(out, "conditions", e);
    }
  }
  out.mode = r.mode;
  out.gamma2_derived = sc.gamma2_derived;
  out.budget = budget;
  if (std::isnan(out.dos_level)) out.dos_level = budget.level(spec.delta_s);
  out.structural_errors.insert(out.structural_errors.begin(), r.structural_errors.begin(), r.structural_errors.end());

  const bool verified = verify_budget(signal, budget, spec.delta_s);
  out.set("budget_verified", verified, verified ? 0.0 : -1.0);
  out.set("budget_level", out.dos_level < 1, 1.0 - out.dos_level);
  return out;
}

}  // namespace qcons
