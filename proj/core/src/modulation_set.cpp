#include "maskpr/modulation_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace maskpr {

ModulationSet ModulationSet::from_elements(int dim, std::vector<int> elements) {
  if (dim < 1) throw std::invalid_argument("ModulationSet: dimension must be positive");
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
    throw std::invalid_argument("ModulationSet: duplicate residue");
  }
  for (int a : elements) {
    if (a <= 0 || a >= dim) {
      throw std::invalid_argument("ModulationSet: residue " + std::to_string(a) +
                                  " outside {1,...,M-1}");
    }
    if (!std::binary_search(elements.begin(), elements.end(), dim - a)) {
      throw std::invalid_argument("ModulationSet: set is not symmetric, missing -" +
                                  std::to_string(a));
    }
  }
  return ModulationSet(dim, std::move(elements));
}

bool ModulationSet::contains(int residue) const {
  return std::binary_search(elements_.begin(), elements_.end(), residue);
}

int ModulationSet::index_of(int residue) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), residue);
  if (it == elements_.end() || *it != residue) return -1;
  return static_cast<int>(it - elements_.begin());
}

}  // namespace maskpr
