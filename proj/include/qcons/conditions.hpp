#pragma once

// Stacked network matrices, stability constants and the sufficient
// conditions for quantizer unsaturation and consensus under DoS.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcons/dos.hpp"
#include "qcons/graph.hpp"
#include "qcons/matrix_analysis.hpp"
#include "qcons/simulation.hpp"

namespace qcons {

struct ScenarioConfig;

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

struct DerivedMatrices {
  Matrix A_N;      // I_N (x) A
  Matrix FC_N;     // I_N (x) F C
  Matrix L_big;    // L_G (x) B K
  Matrix G;        // A_N - L_big
  Matrix H;        // A_N + L_big
  Matrix P;        // L_big + FC_N
  Matrix J_block;  // diag(A - lambda_i B K), i = 2..N
  Matrix S;        // [[A_N, FC_N], [0, A_N - FC_N]]
};

/// Throws DimensionMismatch.
DerivedMatrices build_matrices(const SystemSpec& spec, const LaplacianSpectrum& spectrum);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass{false};
  double margin{kNaN};  // RHS - LHS in natural units; positive means satisfied
};

/// Fields left at NaN were not computed (e.g. scalar-only constants on the
/// general path).
struct ConditionReport {
  std::string mode;
  double rho_A{kNaN}, rho_J{kNaN}, rho_AFC{kNaN}, lambda2{kNaN};
  double gamma1{kNaN}, gamma2{kNaN};
  bool gamma2_derived{false};
  double gamma0{kNaN}, gamma3{kNaN}, gamma4{kNaN};
  double c_a{kNaN}, c_j{kNaN}, c1{kNaN}, c2{kNaN}, c3{kNaN}, c4{kNaN}, c5{kNaN}, c6{kNaN}, c7{kNaN};
  double zeta{kNaN};
  double norm_L{kNaN}, norm_H{kNaN}, norm_P{kNaN}, norm_AFC{kNaN}, norm_AN_FCN_inf{kNaN}, norm_LH_inf{kNaN};
  double bound_35{kNaN}, bound_40{kNaN}, bound_45{kNaN}, bound_69{kNaN};
  double range_capacity{kNaN};  // (2R+1) sigma
  double dos_level{kNaN};       // 1/T + delta/tau_d of the declared budget
  std::int64_t M{-1};
  DosBudget budget;
  std::map<std::string, Verdict> verdicts;
  std::vector<std::string> notes;
  std::vector<std::string> structural_errors;

  bool all_pass() const;
  void set(const std::string& name, bool pass, double margin) { verdicts[name] = {pass, margin}; }
};

/// Checks rho(J) < gamma1 < 1 and gamma2 > rho(A) (throws SelectionViolated),
/// then evaluates the dwell-time condition and the constants C_A, C_J,
/// C_1, C_2, C_3, gamma_0, gamma_3. A failed dwell-time condition is a
/// verdict, not an error.
ConditionReport lemma3_check(const SystemSpec& spec, const LaplacianSpectrum& spectrum, double gamma1,
                             double gamma2, const DosBudget& budget, double theta0, double sigma);

/// Adds C_4, C_5, zeta and the range and DoS-level verdicts.
ConditionReport theorem1_check(ConditionReport report, const SystemSpec& spec, const LaplacianSpectrum& spectrum,
                               double gamma1, double gamma2, std::int64_t R, double sigma, double theta0,
                               const DosBudget& budget);

/// -ln g1 / (ln g2 - ln g1). Throws DegenerateFactors when g2 <= g1.
double dos_bound(double gamma1, double gamma2);

/// -ln rho_J / (ln A - ln rho_J). Throws InvalidRange unless A > 1 > rho_J > 0.
double unquantized_bound(double A, double rho_J);

/// gamma_2 = exp(ln gamma_1 ln A / ln rho_J).
double scalar_gamma2(double gamma1, double A, double rho_J);

/// Scalar agents. gamma_2 is derived from gamma_1 unless overridden.
ConditionReport scalar_check(double A, double B, double K, const LaplacianSpectrum& spectrum, double gamma1,
                             std::int64_t R, double sigma, double theta0, double C_x0, const DosBudget& budget,
                             double delta, std::int64_t M, std::optional<double> gamma2_override = std::nullopt);

/// ||delta(k)|| <= c * rate^(k-1) ||delta(1)|| for unquantized scalar consensus.
struct Envelope {
  double c{1};
  double rate{1};
};
Envelope unquantized_envelope(double A, double rho_J, const DosBudget& budget, double delta);

/// Full report for a scenario: structural checks, then the general or scalar
/// path. Never throws for condition failures; structural problems are listed.
ConditionReport validate(const ScenarioConfig& scenario);

}  // namespace qcons
