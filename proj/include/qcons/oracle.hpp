#pragma once

// Independent check of a simulation trace against the switched recursions
// for the normalized variables alpha = delta/theta, xi_c = e_c/theta,
// xi_o = e_o/theta.

#include <array>
#include <cstdint>

#include "qcons/conditions.hpp"
#include "qcons/simulation.hpp"

namespace qcons {

/// a: clean now, control active at k-1;  b: clean now, control inactive;
/// c: jammed now, control active;        d: jammed now, control inactive.
/// Control is inactive at k-1 when k-1 was jammed or k-1 = 0 (u(0) = 0).
enum class SwitchCase { A = 0, B = 1, C = 2, D = 3 };

char case_letter(SwitchCase c);

struct OracleResiduals {
  std::array<std::int64_t, 4> count{};  // steps per case
  std::array<double, 4> alpha{};        // max-abs residuals per case
  std::array<double, 4> xi_c{};
  std::array<double, 4> xi_o{};
  double compact{0};  // x(k) against A_N x(k-1) - L x_tilde(k-1)

  double max() const;
};

/// Throws InvalidParams for the unquantized mode (no codec to check).
OracleResiduals normalized_oracle(const SimTrace& trace, const SimSetup& setup);

}  // namespace qcons
