#include "maskpr/setgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "maskpr/dft.hpp"

namespace maskpr {

SetGenConfig SetGenConfig::with_constant(int dim, double c, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("SetGenConfig: dimension must be positive");
  const double p = dim == 1 ? 0.0 : std::min(1.0, c * std::log(static_cast<double>(dim)) / dim);
  return SetGenConfig{dim, p, false, seed, c};
}

SetGenConfig SetGenConfig::nonzero_log_density(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("SetGenConfig: dimension must be positive");
  const double p = std::log(static_cast<double>(dim)) / dim;
  return SetGenConfig{dim, p, true, seed, 0.0};
}

std::vector<int> draw_B(const SetGenConfig& config) {
  if (config.dim < 1) throw std::invalid_argument("draw_B: dimension must be positive");
  if (!(config.density >= 0.0 && config.density <= 1.0)) {
    throw std::invalid_argument("draw_B: density must lie in [0, 1]");
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> out;
  for (int m = config.restrict_nonzero ? 1 : 0; m < config.dim; ++m) {
    if (unit(rng) < config.density) out.push_back(m);
  }
  return out;
}

ModulationSet symmetrize(int dim, std::span<const int> B) {
  std::vector<int> elements;
  elements.reserve(2 * B.size());
  for (int b : B) {
    const int r = ((b % dim) + dim) % dim;
    if (r == 0) continue;
    elements.push_back(r);
    elements.push_back((dim - r) % dim);
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return ModulationSet::from_elements(dim, std::move(elements));
}

double fourier_bias(std::span<const int> S, int dim) {
  if (dim < 2) throw std::invalid_argument("fourier_bias: M must be >= 2");
  CVector indicator = CVector::Zero(dim);
  for (int s : S) indicator[((s % dim) + dim) % dim] = 1.0;
  Dft dft(dim);
  const CVector spectrum = dft.analyze(indicator);
  double bias = 0.0;
  for (int m = 1; m < dim; ++m) bias = std::max(bias, std::abs(spectrum[m]));
  return bias;
}

double spectral_gap_from_bias(const ModulationSet& A) {
  if (A.empty()) throw std::invalid_argument("spectral_gap_from_bias: empty modulation set");
  const double m = static_cast<double>(A.dim());
  return 1.0 - (m / static_cast<double>(A.size())) * fourier_bias(A.elements(), A.dim());
}

double min_size_lower_bound(double dim, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("min_size_lower_bound: eps must lie in (0, 1]");
  if (!(dim >= 1.0)) throw std::invalid_argument("min_size_lower_bound: dimension must be >= 1");
  return std::log(dim) / (2.0 + std::log(1.0 / eps));
}

}  // namespace maskpr
