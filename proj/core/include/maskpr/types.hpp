#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>

namespace maskpr {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Primitive cube root of unity exp(2*pi*i/3).
inline Complex omega_pow(int r) {
  return std::polar(1.0, kTwoPi * static_cast<double>(((r % 3) + 3) % 3) / 3.0);
}

/// exp(2*pi*i*num/den), with num reduced modulo den first.
inline Complex root_of_unity(std::int64_t num, std::int64_t den) {
  const std::int64_t red = ((num % den) + den) % den;
  return std::polar(1.0, kTwoPi * static_cast<double>(red) / static_cast<double>(den));
}

}  // namespace maskpr
