#include "maskpr/measure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "maskpr/dft.hpp"

namespace maskpr {

MeasurementSet::MeasurementSet(int dim, int count, std::vector<int> modulations)
    : dim_(dim), count_(count), modulations_(std::move(modulations)) {
  if (dim < 1 || count < 1) throw std::invalid_argument("MeasurementSet: dimension and mask count must be positive");
  const auto m = static_cast<std::size_t>(dim);
  const auto pairs = static_cast<std::size_t>(count) * static_cast<std::size_t>(count + 1) / 2;
  vertex_.assign(static_cast<std::size_t>(count) * m, 0.0);
  edge_.assign(pairs * modulations_.size() * 3 * m, 0.0);
}

std::size_t MeasurementSet::vertex_offset(int k, int m) const {
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(m);
}

std::size_t MeasurementSet::edge_offset(int k, int kp, int a_index, int r, int m) const {
  const auto pair = static_cast<std::size_t>(k) * static_cast<std::size_t>(k + 1) / 2 + static_cast<std::size_t>(kp);
  const std::size_t aux = (pair * modulations_.size() + static_cast<std::size_t>(a_index)) * 3 + static_cast<std::size_t>(r);
  return aux * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(m);
}

namespace {

CVector analyze_with(Dft& dft, const SignalInstance& x, const DiagonalMask& mask) {
  return dft.analyze(x.values.cwiseProduct(mask.diag.conjugate()));
}

}  // namespace

CVector analyze(const SignalInstance& x, const DiagonalMask& mask) {
  if (x.dim() != mask.dim()) {
    throw std::invalid_argument("analyze: signal length " + std::to_string(x.dim()) +
                                " != mask length " + std::to_string(mask.dim()));
  }
  Dft dft(x.dim());
  return analyze_with(dft, x, mask);
}

MeasurementSet measure_all(const SignalInstance& x, const MaskEnsemble& ensemble) {
  if (x.dim() != ensemble.dim()) throw std::invalid_argument("measure_all: signal and ensemble dimensions differ");
  const int dim = ensemble.dim();
  const auto a = ensemble.modulations().elements();
  MeasurementSet out(dim, ensemble.count(), std::vector<int>(a.begin(), a.end()));
  Dft dft(dim);

  for (int k = 0; k < ensemble.count(); ++k) {
    const CVector coeffs = analyze_with(dft, x, ensemble.vertex().masks[static_cast<std::size_t>(k)]);
    for (int m = 0; m < dim; ++m) out.vertex(k, m) = std::norm(coeffs[m]);
  }
  for (std::size_t i = 0; i < ensemble.auxiliary().size(); ++i) {
    const CVector coeffs = analyze_with(dft, x, ensemble.auxiliary_mask(i));
    double* row = out.edge_row(i);
    for (int m = 0; m < dim; ++m) row[m] = std::norm(coeffs[m]);
  }
  return out;
}

MeasurementSet add_noise(const MeasurementSet& clean, const NoiseModel& noise) {
  if (!(noise.variance >= 0.0)) throw std::invalid_argument("add_noise: variance must be nonnegative");
  MeasurementSet out = clean;
  out.set_noise_variance(noise.variance);
  if (noise.variance == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(noise.variance));
  for (double& v : out.vertex_values()) v += normal(rng);
  for (double& v : out.edge_values()) v += normal(rng);
  return out;
}

}  // namespace maskpr
