#include "maskpr/masks.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace maskpr {

namespace {
constexpr int kMaxRandomDraws = 16;
constexpr double kSparkTolerance = 1e-9;
}  // namespace

DiagonalMask DiagonalMask::identity(int dim) {
  return DiagonalMask{CVector::Ones(dim)};
}

std::string_view to_string(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::deterministic: return "deterministic";
    case AlphaMode::random_unit_circle: return "random";
    case AlphaMode::gaussian: return "gaussian";
  }
  return "unknown";
}

AlphaMode alpha_mode_from_string(std::string_view name) {
  if (name == "deterministic") return AlphaMode::deterministic;
  if (name == "random" || name == "random-unit-circle") return AlphaMode::random_unit_circle;
  if (name == "gaussian") return AlphaMode::gaussian;
  throw std::invalid_argument("unknown alpha mode '" + std::string(name) + "'");
}

bool check_full_spark(std::span<const Complex> alphas, int dim) {
  if (dim < 1) throw std::invalid_argument("check_full_spark: dimension must be positive");
  for (const Complex& a : alphas) {
    if (a == Complex(0.0, 0.0)) throw std::invalid_argument("check_full_spark: alpha_k must be nonzero");
  }
  // Any nonzero scalars are full spark in C^1.
  if (dim == 1) return true;
  const double tol = kSparkTolerance * dim;
  const double m = static_cast<double>(dim);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      // alpha_i e^{2 pi i m/M} == alpha_j e^{2 pi i m'/M} iff alpha_i / alpha_j is
      // an M-th root of unity; test against the nearest root.
      const Complex ratio = alphas[i] / alphas[j];
      const double turns = std::arg(ratio) * m / kTwoPi;
      const auto nearest = static_cast<std::int64_t>(std::llround(turns));
      const Complex root = root_of_unity(nearest, dim);
      const double scale = std::max(std::abs(alphas[i]), std::abs(alphas[j]));
      if (std::abs(alphas[i] - alphas[j] * root) < tol * scale) return false;
    }
  }
  return true;
}

VertexMaskSet build_vertex_masks(int dim, int count, AlphaMode mode, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("build_vertex_masks: M must be >= 1");
  if (count < 1) throw std::invalid_argument("build_vertex_masks: K must be >= 1");

  VertexMaskSet set;
  set.dim = dim;
  set.mode = mode;
  set.seed = seed;
  std::mt19937_64 rng(seed);

  if (mode == AlphaMode::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < count; ++k) {
      CVector diag(dim);
      for (int m = 0; m < dim; ++m) diag[m] = Complex(normal(rng), 0.0);
      set.masks.push_back(DiagonalMask{std::move(diag)});
    }
    return set;
  }

  if (mode == AlphaMode::deterministic) {
    for (int k = 0; k < count; ++k) {
      set.alphas.push_back(root_of_unity(k, static_cast<std::int64_t>(count) * dim));
    }
    if (!check_full_spark(set.alphas, dim)) {
      throw std::logic_error("build_vertex_masks: deterministic alphas failed the full-spark check");
    }
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRandomDraws && !ok; ++attempt) {
      set.alphas.clear();
      for (int k = 0; k < count; ++k) set.alphas.push_back(std::polar(1.0, kTwoPi * unit(rng)));
      ok = check_full_spark(set.alphas, dim);
    }
    if (!ok) throw std::runtime_error("build_vertex_masks: could not draw full-spark alphas");
  }

  const std::int64_t lattice = static_cast<std::int64_t>(count) * dim;
  for (int k = 0; k < count; ++k) {
    const double theta = std::arg(set.alphas[static_cast<std::size_t>(k)]);
    CVector diag(dim);
    for (int m = 0; m < dim; ++m) {
      diag[m] = mode == AlphaMode::deterministic
                    ? root_of_unity(static_cast<std::int64_t>(k) * m, lattice)
                    : std::polar(1.0, theta * m);
    }
    set.masks.push_back(DiagonalMask{std::move(diag)});
  }
  return set;
}

std::vector<AuxiliaryIndex> auxiliary_indices(int count, const ModulationSet& modulations) {
  std::vector<AuxiliaryIndex> out;
  out.reserve(static_cast<std::size_t>(mask_count(count, static_cast<std::int64_t>(modulations.size())) - count));
  for (int k = 0; k < count; ++k) {
    for (int kp = 0; kp <= k; ++kp) {
      for (int a : modulations.elements()) {
        for (int r = 0; r < 3; ++r) out.push_back(AuxiliaryIndex{k, kp, r, a});
      }
    }
  }
  return out;
}

DiagonalMask auxiliary_mask(const VertexMaskSet& vertex, const AuxiliaryIndex& index) {
  if (index.k < 0 || index.k >= vertex.count() || index.kp < 0 || index.kp > index.k) {
    throw std::invalid_argument("auxiliary_mask: index (k, k') out of range");
  }
  const int dim = vertex.dim;
  const Complex w = omega_pow(index.r);
  const CVector& dk = vertex.masks[static_cast<std::size_t>(index.k)].diag;
  const CVector& dkp = vertex.masks[static_cast<std::size_t>(index.kp)].diag;
  CVector diag(dim);
  for (int m = 0; m < dim; ++m) {
    diag[m] = dk[m] + w * root_of_unity(static_cast<std::int64_t>(index.a) * m, dim) * dkp[m];
  }
  return DiagonalMask{std::move(diag)};
}

std::vector<AuxiliaryMask> build_auxiliary_masks(const VertexMaskSet& vertex,
                                                 const ModulationSet& modulations) {
  if (!modulations.empty() && modulations.dim() != vertex.dim) {
    throw std::invalid_argument("build_auxiliary_masks: modulation set dimension " +
                                std::to_string(modulations.dim()) + " != mask dimension " +
                                std::to_string(vertex.dim));
  }
  std::vector<AuxiliaryMask> out;
  for (const AuxiliaryIndex& idx : auxiliary_indices(vertex.count(), modulations)) {
    out.push_back(AuxiliaryMask{idx, auxiliary_mask(vertex, idx)});
  }
  return out;
}

std::int64_t mask_count(std::int64_t count, std::int64_t set_size) {
  return count + 3 * (count * (count + 1) / 2) * set_size;
}

MaskEnsemble::MaskEnsemble(VertexMaskSet vertex, ModulationSet modulations)
    : vertex_(std::move(vertex)), modulations_(std::move(modulations)) {
  if (vertex_.count() < 1) throw std::invalid_argument("MaskEnsemble: no vertex masks");
  for (const auto& mask : vertex_.masks) {
    if (mask.dim() != vertex_.dim) throw std::invalid_argument("MaskEnsemble: vertex mask length mismatch");
    if (!mask.diag.allFinite()) throw std::invalid_argument("MaskEnsemble: non-finite mask entry");
  }
  if (!modulations_.empty() && modulations_.dim() != vertex_.dim) {
    throw std::invalid_argument("MaskEnsemble: modulation set dimension mismatch");
  }
  auxiliary_ = auxiliary_indices(vertex_.count(), modulations_);
}

DiagonalMask MaskEnsemble::auxiliary_mask(std::size_t i) const {
  return maskpr::auxiliary_mask(vertex_, auxiliary_.at(i));
}

}  // namespace maskpr
