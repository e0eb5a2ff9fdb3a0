#pragma once

#include <span>
#include <vector>

namespace maskpr {

/// A subset A of Z_M with 0 not in A and A == -A, kept sorted.
///
/// These residues are the frequency offsets combined into auxiliary masks and
/// also the difference set that defines adjacency in the polarization graph.
class ModulationSet {
 public:
  ModulationSet() = default;

  /// Validates and sorts; throws std::invalid_argument on residues outside
  /// {1, ..., M-1}, duplicates, or a missing negation.
  static ModulationSet from_elements(int dim, std::vector<int> elements);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  std::span<const int> elements() const noexcept { return elements_; }
  bool contains(int residue) const;
  /// Position of `residue` in the sorted element list, or -1.
  int index_of(int residue) const;

  friend bool operator==(const ModulationSet&, const ModulationSet&) = default;

 private:
  ModulationSet(int dim, std::vector<int> elements) : dim_(dim), elements_(std::move(elements)) {}

  int dim_ = 0;
  std::vector<int> elements_;
};

}  // namespace maskpr
