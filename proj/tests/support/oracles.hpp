#pragma once

// Reference computations for tests. These deliberately avoid the library's
// FFT and mask code paths: everything is written out from the definitions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

inline Complex expi(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// f_m(m') = exp(2 pi i m m' / M) / M.
inline Eigen::VectorXcd sinusoid(int dim, int m) {
  Eigen::VectorXcd f(dim);
  for (int mp = 0; mp < dim; ++mp) f[mp] = expi(2.0 * std::numbers::pi * m * mp / dim) / static_cast<double>(dim);
  return f;
}

/// <x, y> = sum x conj(y).
inline Complex inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

/// (1/M) sum_{m'} y(m') exp(-2 pi i m m'/M), O(M^2).
inline Eigen::VectorXcd naive_dft(const Eigen::VectorXcd& y) {
  const auto n = y.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex s = 0.0;
    for (Eigen::Index mp = 0; mp < n; ++mp) s += y[mp] * expi(-2.0 * std::numbers::pi * static_cast<double>(m * mp) / static_cast<double>(n));
    out[m] = s / static_cast<double>(n);
  }
  return out;
}

inline double naive_bias(const std::vector<int>& set, int dim) {
  double best = 0.0;
  for (int m = 1; m < dim; ++m) {
    Complex s = 0.0;
    for (int a : set) s += expi(-2.0 * std::numbers::pi * m * a / dim);
    best = std::max(best, std::abs(s) / dim);
  }
  return best;
}

/// M x KM matrix with columns diag{alpha_k^{m'}} f_m, column index k*M + m.
inline Eigen::MatrixXcd vandermonde_frame(const std::vector<Complex>& alphas, int dim) {
  const int count = static_cast<int>(alphas.size());
  Eigen::MatrixXcd frame(dim, count * dim);
  for (int k = 0; k < count; ++k) {
    for (int m = 0; m < dim; ++m) {
      const Eigen::VectorXcd f = sinusoid(dim, m);
      for (int mp = 0; mp < dim; ++mp) frame(mp, k * dim + m) = std::pow(alphas[static_cast<std::size_t>(k)], mp) * f[mp];
    }
  }
  return frame;
}

/// Visits every size-`choose` subset of {0, ..., n-1} in lexicographic order.
inline void for_each_combination(int n, int choose, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> idx(static_cast<std::size_t>(choose));
  for (int i = 0; i < choose; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = choose - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - choose + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < choose; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Smallest |det| over all M x M column subsets, normalized by the product of
/// the chosen column norms (Hadamard), so 1 means orthogonal and 0 singular.
inline double min_normalized_minor(const Eigen::MatrixXcd& frame) {
  const int dim = static_cast<int>(frame.rows());
  double worst = std::numeric_limits<double>::infinity();
  for_each_combination(static_cast<int>(frame.cols()), dim, [&](const std::vector<int>& cols) {
    Eigen::MatrixXcd sub(dim, dim);
    double norms = 1.0;
    for (int c = 0; c < dim; ++c) {
      sub.col(c) = frame.col(cols[static_cast<std::size_t>(c)]);
      norms *= sub.col(c).norm();
    }
    worst = std::min(worst, std::abs(sub.determinant()) / norms);
  });
  return worst;
}

inline Eigen::VectorXcd random_complex(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    v[i] = Complex(re, normal(rng));
  }
  return v;
}

}  // namespace oracle
