#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "maskpr/modulation_set.hpp"
#include "maskpr/types.hpp"

namespace maskpr {

/// A diagonal multiplication operator on C^M; diag[m] multiplies coordinate m.
struct DiagonalMask {
  CVector diag;

  int dim() const noexcept { return static_cast<int>(diag.size()); }
  static DiagonalMask identity(int dim);
};

enum class AlphaMode {
  deterministic,       ///< alpha_k = exp(2 pi i k / (K M))
  random_unit_circle,  ///< alpha_k uniform on the unit circle
  gaussian,            ///< no alphas; i.i.d. N(0,1) real diagonal entries
};

std::string_view to_string(AlphaMode mode);
AlphaMode alpha_mode_from_string(std::string_view name);

/// K vertex masks D_k. In the power modes D_k = diag{alpha_k^m}; in gaussian
/// mode `alphas` is empty and the diagonals are drawn directly.
struct VertexMaskSet {
  int dim = 0;
  AlphaMode mode = AlphaMode::deterministic;
  std::uint64_t seed = 0;
  std::vector<Complex> alphas;
  std::vector<DiagonalMask> masks;

  int count() const noexcept { return static_cast<int>(masks.size()); }
};

/// Identifies the auxiliary mask D_k + omega^r E^a D_{k'}.
struct AuxiliaryIndex {
  int k = 0;
  int kp = 0;
  int r = 0;
  int a = 0;

  friend bool operator==(const AuxiliaryIndex&, const AuxiliaryIndex&) = default;
};

struct AuxiliaryMask {
  AuxiliaryIndex index;
  DiagonalMask mask;
};

/// Builds K vertex masks. Power modes are checked with check_full_spark;
/// random mode redraws (bounded) if the draw fails the check.
VertexMaskSet build_vertex_masks(int dim, int count, AlphaMode mode, std::uint64_t seed);

/// True iff the K*M points alpha_k * exp(2 pi i m / M) are pairwise distinct,
/// i.e. no ratio alpha_k / alpha_k' is an M-th root of unity.
bool check_full_spark(std::span<const Complex> alphas, int dim);

/// Enumerates (k, k', a, r) with k' <= k in the canonical order:
/// k ascending, then k', then a in sorted order, then r.
std::vector<AuxiliaryIndex> auxiliary_indices(int count, const ModulationSet& modulations);

/// Entrywise diag_k(m) + omega^r exp(2 pi i a m / M) diag_k'(m).
DiagonalMask auxiliary_mask(const VertexMaskSet& vertex, const AuxiliaryIndex& index);

std::vector<AuxiliaryMask> build_auxiliary_masks(const VertexMaskSet& vertex,
                                                 const ModulationSet& modulations);

/// K + 3 * C(K+1, 2) * set_size.
std::int64_t mask_count(std::int64_t count, std::int64_t set_size);

/// Vertex masks plus the modulation set. Auxiliary diagonals are derived on
/// demand from the vertex masks, since an ensemble can hold 10^5+ of them.
class MaskEnsemble {
 public:
  MaskEnsemble() = default;
  MaskEnsemble(VertexMaskSet vertex, ModulationSet modulations);

  int dim() const noexcept { return vertex_.dim; }
  int count() const noexcept { return vertex_.count(); }
  const VertexMaskSet& vertex() const noexcept { return vertex_; }
  const ModulationSet& modulations() const noexcept { return modulations_; }
  std::span<const AuxiliaryIndex> auxiliary() const noexcept { return auxiliary_; }
  DiagonalMask auxiliary_mask(std::size_t i) const;
  std::int64_t total_masks() const noexcept {
    return static_cast<std::int64_t>(vertex_.masks.size() + auxiliary_.size());
  }

 private:
  VertexMaskSet vertex_;
  ModulationSet modulations_;
  std::vector<AuxiliaryIndex> auxiliary_;
};

}  // namespace maskpr
