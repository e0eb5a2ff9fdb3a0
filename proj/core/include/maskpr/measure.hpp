#pragma once

#include <cstdint>
#include <vector>

#include "maskpr/masks.hpp"
#include "maskpr/types.hpp"

namespace maskpr {

struct SignalInstance {
  CVector values;
  int dim() const noexcept { return static_cast<int>(values.size()); }
};

/// Intensities for every vertex (k, m) and every edge tuple (k, k', a, r, m)
/// with k' <= k.
///
/// Edge values are stored flat in (k, k', a, r, m) lexicographic order, a
/// running over the sorted modulation set, which is also the order of
/// MaskEnsemble::auxiliary().
class MeasurementSet {
 public:
  MeasurementSet() = default;
  MeasurementSet(int dim, int count, std::vector<int> modulations);

  int dim() const noexcept { return dim_; }
  int count() const noexcept { return count_; }
  const std::vector<int>& modulations() const noexcept { return modulations_; }
  double noise_variance() const noexcept { return noise_variance_; }
  void set_noise_variance(double v) noexcept { noise_variance_ = v; }

  std::size_t edge_tuple_count() const noexcept { return edge_.size(); }

  double& vertex(int k, int m) { return vertex_[vertex_offset(k, m)]; }
  double vertex(int k, int m) const { return vertex_[vertex_offset(k, m)]; }
  /// a_index is the position of the modulation in the sorted set.
  double& edge(int k, int kp, int a_index, int r, int m) { return edge_[edge_offset(k, kp, a_index, r, m)]; }
  double edge(int k, int kp, int a_index, int r, int m) const { return edge_[edge_offset(k, kp, a_index, r, m)]; }

  /// Row of `dim()` intensities for auxiliary mask number `aux` (ensemble order).
  double* edge_row(std::size_t aux) { return edge_.data() + aux * static_cast<std::size_t>(dim_); }
  const double* edge_row(std::size_t aux) const { return edge_.data() + aux * static_cast<std::size_t>(dim_); }

  std::vector<double>& vertex_values() noexcept { return vertex_; }
  const std::vector<double>& vertex_values() const noexcept { return vertex_; }
  std::vector<double>& edge_values() noexcept { return edge_; }
  const std::vector<double>& edge_values() const noexcept { return edge_; }

  friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;

 private:
  std::size_t vertex_offset(int k, int m) const;
  std::size_t edge_offset(int k, int kp, int a_index, int r, int m) const;

  int dim_ = 0;
  int count_ = 0;
  std::vector<int> modulations_;
  double noise_variance_ = 0.0;
  std::vector<double> vertex_;
  std::vector<double> edge_;
};

struct NoiseModel {
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// m -> <x, D f_m> = (F* D* x)(m), with f_m(m') = exp(2 pi i m m'/M) / M and the
/// inner product conjugate-linear in its second slot.
CVector analyze(const SignalInstance& x, const DiagonalMask& mask);

/// Clean intensities |<x, D_k f_m>|^2 and |<x, (D_k + w^r E^a D_k') f_m>|^2.
MeasurementSet measure_all(const SignalInstance& x, const MaskEnsemble& ensemble);

/// Adds independent N(0, variance) to every intensity, vertices first in (k, m)
/// order and then edges in (k, k', a, r, m) order. Negative results are kept.
MeasurementSet add_noise(const MeasurementSet& clean, const NoiseModel& noise);

}  // namespace maskpr
