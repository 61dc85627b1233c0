#pragma once

// Finite-level uniform quantizer with 2R+1 output levels {0, +-2s, ..., +-2Rs}.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "qcons/error.hpp"

namespace qcons {

template <typename Scalar = double>
struct QuantizerParams {
  std::int64_t levels_R{1};
  Scalar step_sigma{1};

  /// Largest input magnitude the quantizer represents with error <= sigma.
  Scalar range() const { return (Scalar(2) * Scalar(levels_R) + Scalar(1)) * step_sigma; }
};

template <typename Scalar = double>
struct QuantResult {
  Scalar value{0};
  bool saturated{false};
};

template <typename Scalar>
QuantResult<Scalar> quantize_scalar(Scalar chi, const QuantizerParams<Scalar>& p) {
  if (!std::isfinite(chi)) throw Error(ErrorCode::NonFinite, "quantizer input is not finite");
  const Scalar magnitude = std::abs(chi);
  const Scalar band = std::floor((magnitude / p.step_sigma + Scalar(1)) / Scalar(2));
  const Scalar z = std::min(band, Scalar(p.levels_R));
  const Scalar value = Scalar(2) * z * p.step_sigma;
  return {chi < 0 && z > 0 ? -value : value, magnitude > p.range()};
}

/// Componentwise quantization; the flag is set if any component saturates.
template <typename Derived>
std::pair<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>, bool> quantize_vector(
    const Eigen::MatrixBase<Derived>& beta, const QuantizerParams<typename Derived::Scalar>& p) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(beta.size());
  bool saturated = false;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const auto r = quantize_scalar(beta(i), p);
    out(i) = r.value;
    saturated = saturated || r.saturated;
  }
  return {std::move(out), saturated};
}

/// Decoder side: the output level for symbol z. Agrees bit-for-bit with
/// quantize_scalar's value for the input that produced z.
template <typename Scalar>
Scalar dequantize(std::int64_t z, const QuantizerParams<Scalar>& p) {
  const Scalar value = Scalar(2) * Scalar(z < 0 ? -z : z) * p.step_sigma;
  return z < 0 ? -value : value;
}

/// Transmitted symbol z in [-R, R] for a representable output value.
template <typename Scalar>
std::int64_t symbol_index(Scalar value, const QuantizerParams<Scalar>& p) {
  const Scalar ratio = value / (Scalar(2) * p.step_sigma);
  const Scalar rounded = std::round(ratio);
  if (!(std::abs(ratio - rounded) <= Scalar(1e-9)) || std::abs(rounded) > Scalar(p.levels_R)) {
    throw Error(ErrorCode::NotRepresentable, "value is not a quantizer output");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace qcons
