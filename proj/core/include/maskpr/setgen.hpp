#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maskpr/modulation_set.hpp"

namespace maskpr {

/// Bernoulli draw of a random subset B of Z_M. All logarithms are natural.
struct SetGenConfig {
  int dim = 0;
  double density = 0.0;           ///< inclusion probability p per residue
  bool restrict_nonzero = false;  ///< draw over {1,...,M-1} instead of Z_M
  std::uint64_t seed = 0;
  double c = 0.0;                 ///< bias constant when density = c ln M / M, else 0

  /// p = min(1, c ln M / M) over all of Z_M.
  static SetGenConfig with_constant(int dim, double c, std::uint64_t seed);
  /// p = ln M / M over the nonzero residues only.
  static SetGenConfig nonzero_log_density(int dim, std::uint64_t seed);
};

/// Residues are visited in increasing order, one uniform variate each, and
/// included when the variate is below p.
std::vector<int> draw_B(const SetGenConfig& config);

/// A = (B union -B) \ {0}.
ModulationSet symmetrize(int dim, std::span<const int> B);

/// max_{m != 0} |(1/M) sum_{m' in S} exp(-2 pi i m m' / M)|, via an M-point DFT.
double fourier_bias(std::span<const int> S, int dim);

/// 1 - (M/|A|) * fourier_bias(A). Can be negative.
double spectral_gap_from_bias(const ModulationSet& A);

/// ln M / (2 + ln(1/eps)): any A whose graph has gap > eps is at least this big.
double min_size_lower_bound(double dim, double eps);

}  // namespace maskpr
