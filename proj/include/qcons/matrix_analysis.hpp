#pragma once

// Dense matrix utilities: spectral radius, induced norms, and growth
// constants C with ||M^k|| <= C * base^k.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "qcons/error.hpp"

namespace qcons {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <typename Derived>
typename Derived::RealScalar spectral_radius(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "spectral_radius needs a square matrix");
  if (m.rows() == 0) return Real(0);
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::EigenSolver<Plain> solver(Plain(m), /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Induced 2-norm, evaluated as sqrt(lambda_max(M^T M)).
template <typename Derived>
typename Derived::RealScalar induced_two_norm(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.size() == 0) return Real(0);
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Plain gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Plain> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(Real(0), solver.eigenvalues().maxCoeff()));
}

/// Max absolute row sum.
template <typename Derived>
typename Derived::RealScalar induced_inf_norm(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.size() == 0) return Real(0);
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Scalar = double>
struct GrowthConstant {
  Scalar constant{1};
  std::int64_t argmax_k{0};
  Scalar rho_bar{0};
  std::int64_t steps{0};  // number of powers evaluated before stopping
};

inline constexpr std::int64_t kDefaultGrowthCap = 100000;

/// sup_k ||M^k||_2 / rho_bar^k.
///
/// Accepts rho_bar > rho(M), or rho_bar equal to rho(M) up to a relative 1e-9
/// (the critical base, finite only when the peripheral spectrum is
/// semisimple). The scan stops at the first k where either
///  - ||M^k|| / rho_bar^k <= 1: by submultiplicativity the supremum over all
///    k is then the maximum seen so far, or
///  - the running maximum has not grown (relative slack 1e-12) for
///    max(50, argmax) consecutive steps.
/// Throws CapReached if neither happens by k_cap.
template <typename Derived>
GrowthConstant<typename Derived::RealScalar> growth_constant(const Eigen::MatrixBase<Derived>& m,
                                                             typename Derived::RealScalar rho_bar,
                                                             std::int64_t k_cap = kDefaultGrowthCap) {
  using Real = typename Derived::RealScalar;
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr std::int64_t kPatience = 50;
  constexpr Real kFlatSlack = Real(1e-12);

  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "growth_constant needs a square matrix");
  if (k_cap < 1) throw Error(ErrorCode::InvalidParams, "k_cap must be >= 1");
  const Real rho = spectral_radius(m);
  if (!(rho_bar > 0) || rho_bar < rho * (Real(1) - Real(1e-9))) {
    throw Error(ErrorCode::BaseNotDominating, "base must dominate the spectral radius");
  }

  GrowthConstant<Real> out;
  out.rho_bar = rho_bar;
  const Plain scaled = m / rho_bar;
  Plain power = Plain::Identity(m.rows(), m.cols());
  for (std::int64_t k = 1; k <= k_cap; ++k) {
    power = power * scaled;
    const Real ratio = induced_two_norm(power);
    if (!std::isfinite(ratio)) break;
    if (ratio > out.constant * (Real(1) + kFlatSlack)) out.argmax_k = k;
    out.constant = std::max(out.constant, ratio);
    out.steps = k;
    if (ratio <= Real(1)) return out;
    if (k - out.argmax_k >= std::max<std::int64_t>(kPatience, out.argmax_k)) return out;
  }
  throw Error(ErrorCode::CapReached, "growth ratio did not settle before k_cap");
}

}  // namespace qcons
