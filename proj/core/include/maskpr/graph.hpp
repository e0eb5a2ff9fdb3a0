#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "maskpr/modulation_set.hpp"

namespace maskpr {

struct Vertex {
  int k = 0;
  int m = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// The K*M-vertex graph on {(k, m)} where (k, m) ~ (k', m') iff m' - m is in A.
///
/// Vertex (k, m) has flat id k*M + m. The adjacency matrix is J (x) circ(1_A),
/// so the graph is K|A|-regular with no self-loops.
class PolarizationGraph {
 public:
  /// Throws std::invalid_argument for empty A, K < 1, or a dimension mismatch.
  static PolarizationGraph build(int count, int dim, ModulationSet modulations);

  int count() const noexcept { return count_; }
  int dim() const noexcept { return dim_; }
  const ModulationSet& modulations() const noexcept { return modulations_; }
  int vertex_count() const noexcept { return count_ * dim_; }
  int degree() const noexcept { return count_ * static_cast<int>(modulations_.size()); }

  int id(Vertex v) const noexcept { return v.k * dim_ + v.m; }
  Vertex vertex(int id) const noexcept { return Vertex{id / dim_, id % dim_}; }
  bool adjacent(int i, int j) const;

  /// Sorted neighbor ids of vertex i.
  std::vector<int> neighbors(int i) const;
  std::vector<std::vector<int>> adjacency_lists() const;
  Eigen::MatrixXd adjacency_matrix() const;

  /// One undirected edge per line as "k,m k',m'" with the smaller id first.
  void write_edge_list(std::ostream& os) const;

 private:
  PolarizationGraph(int count, int dim, ModulationSet modulations)
      : count_(count), dim_(dim), modulations_(std::move(modulations)) {}

  int count_ = 0;
  int dim_ = 0;
  ModulationSet modulations_;
};

inline PolarizationGraph build_graph(int count, int dim, ModulationSet modulations) {
  return PolarizationGraph::build(count, dim, std::move(modulations));
}

enum class GapMethod { eigendecomposition, bias_formula };

struct SpectralReport {
  double gap = 0.0;
  double lambda_max = 0.0;
  double second_magnitude = 0.0;
  GapMethod method = GapMethod::eigendecomposition;
};

/// spg = (lambda_1 - max_{i != 1} |lambda_i|) / lambda_1 from a dense
/// eigendecomposition of the adjacency matrix.
SpectralReport spectral_gap_eigen(const PolarizationGraph& graph);

/// Same quantity for a symmetric adjacency matrix of a regular graph.
SpectralReport spectral_gap_eigen(const Eigen::MatrixXd& adjacency);

/// Closed form through the Fourier bias of A; O(M log M).
SpectralReport spectral_gap_bias(const PolarizationGraph& graph);

/// Size of the largest connected component once `removed` vertices are deleted.
int largest_component_after_removal(const PolarizationGraph& graph, std::span<const int> removed);

/// Vertex ids of the largest connected component among vertices with alive[i]
/// set, ties going to the component containing the smallest id. Returned sorted.
std::vector<int> largest_component(const std::vector<std::vector<int>>& adjacency,
                                   const std::vector<char>& alive);

}  // namespace maskpr
