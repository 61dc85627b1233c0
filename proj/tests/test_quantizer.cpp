#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>

#include "qcons/matrix_analysis.hpp"
#include "qcons/quantizer.hpp"

using namespace qcons;

namespace {

// Nearest output level by exhaustive search over all 2R+1 levels.
double nearest_level(double x, std::int64_t R, double sigma) {
  double best = 0;
  for (std::int64_t z = -R; z <= R; ++z) {
    const double level = 2.0 * sigma * static_cast<double>(z);
    if (std::abs(x - level) < std::abs(x - best)) best = level;
  }
  return best;
}

}  // namespace

TEST_CASE("quantizer matches exhaustive nearest-level search") {
  std::mt19937_64 rng(17);
  for (std::int64_t R : {1, 2, 5, 40}) {
    for (double sigma : {0.25, 1.0, 3.0}) {
      const QuantizerParams<double> p{R, sigma};
      std::uniform_real_distribution<double> u(-1.5 * p.range(), 1.5 * p.range());
      for (int i = 0; i < 2000; ++i) {
        const double x = u(rng);
        const auto q = quantize_scalar(x, p);
        CHECK(q.value == doctest::Approx(nearest_level(x, R, sigma)).epsilon(1e-12));
        CHECK(q.saturated == (std::abs(x) > p.range()));
        if (!q.saturated) CHECK(std::abs(x - q.value) <= sigma * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("quantizer level boundaries and symmetry") {
  const QuantizerParams<double> p{3, 1.0};
  CHECK(quantize_scalar(0.999, p).value == 0.0);
  CHECK(quantize_scalar(1.0, p).value == 2.0);
  CHECK(quantize_scalar(-1.0, p).value == -2.0);
  CHECK(quantize_scalar(7.0, p).value == 6.0);
  CHECK_FALSE(quantize_scalar(7.0, p).saturated);
  CHECK(quantize_scalar(7.0001, p).saturated);
  CHECK(quantize_scalar(-1e9, p).value == -6.0);
  const auto zero = quantize_scalar(-0.3, p).value;
  CHECK(zero == 0.0);
  CHECK_FALSE(std::signbit(zero));
  for (double x : {0.2, 1.7, 3.3, 5.5, 9.0}) {
    CHECK(quantize_scalar(-x, p).value == -quantize_scalar(x, p).value);
  }
}

TEST_CASE("quantizer rejects non-finite input") {
  const QuantizerParams<double> p{3, 1.0};
  CHECK_THROWS_AS(quantize_scalar(std::nan(""), p), Error);
  CHECK_THROWS_AS(quantize_scalar(std::numeric_limits<double>::infinity(), p), Error);
}

TEST_CASE("symbols round-trip through the decoder bit for bit") {
  std::mt19937_64 rng(23);
  const QuantizerParams<double> p{150960, 0.37};
  std::uniform_real_distribution<double> u(-1.2 * p.range(), 1.2 * p.range());
  for (int i = 0; i < 5000; ++i) {
    const double v = quantize_scalar(u(rng), p).value;
    const std::int64_t z = symbol_index(v, p);
    CHECK(std::abs(z) <= p.levels_R);
    const double back = dequantize(z, p);
    CHECK(std::memcmp(&back, &v, sizeof(double)) == 0);
  }
  CHECK_THROWS_AS(symbol_index(1.0, QuantizerParams<double>{3, 1.0}), Error);
  CHECK_THROWS_AS(symbol_index(8.0, QuantizerParams<double>{3, 1.0}), Error);
}

TEST_CASE("vector quantization flags any saturated component") {
  const QuantizerParams<double> p{2, 1.0};
  Vector v(3);
  v << 0.4, -2.6, 4.9;
  auto [q, sat] = quantize_vector(v, p);
  CHECK(q(0) == 0.0);
  CHECK(q(1) == -2.0);
  CHECK(q(2) == 4.0);
  CHECK_FALSE(sat);
  v(2) = 5.1;
  CHECK(quantize_vector(v, p).second);
}

TEST_CASE("quantizer in single precision") {
  const QuantizerParams<float> p{4, 0.5f};
  CHECK(quantize_scalar(1.2f, p).value == 1.0f);
  CHECK(quantize_scalar(-3.9f, p).value == -4.0f);
}
