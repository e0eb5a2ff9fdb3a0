#include "maskpr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "maskpr/setgen.hpp"

namespace maskpr {

PolarizationGraph PolarizationGraph::build(int count, int dim, ModulationSet modulations) {
  if (count < 1) throw std::invalid_argument("build_graph: K must be >= 1");
  if (modulations.empty()) {
    throw std::invalid_argument("build_graph: modulation set is empty; the graph would have no edges");
  }
  if (modulations.dim() != dim) throw std::invalid_argument("build_graph: modulation set dimension mismatch");
  return PolarizationGraph(count, dim, std::move(modulations));
}

bool PolarizationGraph::adjacent(int i, int j) const {
  const int diff = ((vertex(j).m - vertex(i).m) % dim_ + dim_) % dim_;
  return modulations_.contains(diff);
}

std::vector<int> PolarizationGraph::neighbors(int i) const {
  const Vertex v = vertex(i);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(degree()));
  for (int kp = 0; kp < count_; ++kp) {
    for (int a : modulations_.elements()) out.push_back(id(Vertex{kp, (v.m + a) % dim_}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> PolarizationGraph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count()));
  for (int i = 0; i < vertex_count(); ++i) adj[static_cast<std::size_t>(i)] = neighbors(i);
  return adj;
}

Eigen::MatrixXd PolarizationGraph::adjacency_matrix() const {
  const int n = vertex_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors(i)) w(i, j) = 1.0;
  }
  return w;
}

void PolarizationGraph::write_edge_list(std::ostream& os) const {
  for (int i = 0; i < vertex_count(); ++i) {
    const Vertex u = vertex(i);
    for (int j : neighbors(i)) {
      if (j <= i) continue;
      const Vertex v = vertex(j);
      os << u.k << ',' << u.m << ' ' << v.k << ',' << v.m << '\n';
    }
  }
}

SpectralReport spectral_gap_eigen(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) {
    throw std::invalid_argument("spectral_gap_eigen: adjacency must be a nonempty square matrix");
  }
  if (!adjacency.allFinite()) throw std::invalid_argument("spectral_gap_eigen: non-finite adjacency entry");
  SpectralReport report;
  report.method = GapMethod::eigendecomposition;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) {
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    const Eigen::Index top = ev.size() - 1;
    report.lambda_max = ev[top];
    for (Eigen::Index i = 0; i < top; ++i) report.second_magnitude = std::max(report.second_magnitude, std::abs(ev[i]));
  } else {
    // The tridiagonal QR can stall on the large zero eigenspace of J (x) circ(1_A).
    // For a nonnegative symmetric matrix the singular values are the |lambda_i|
    // and the largest one is the Perron eigenvalue, so they give the same gap.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(adjacency);
    const Eigen::VectorXd& sv = svd.singularValues();  // descending
    report.lambda_max = sv[0];
    report.second_magnitude = sv.size() > 1 ? sv[1] : 0.0;
  }
  report.gap = report.lambda_max > 0.0 ? (report.lambda_max - report.second_magnitude) / report.lambda_max : 0.0;
  return report;
}

SpectralReport spectral_gap_eigen(const PolarizationGraph& graph) {
  return spectral_gap_eigen(graph.adjacency_matrix());
}

SpectralReport spectral_gap_bias(const PolarizationGraph& graph) {
  const ModulationSet& a = graph.modulations();
  const double d = static_cast<double>(graph.degree());
  SpectralReport report;
  report.method = GapMethod::bias_formula;
  report.lambda_max = d;
  report.second_magnitude = graph.count() * static_cast<double>(a.dim()) * fourier_bias(a.elements(), a.dim());
  report.gap = spectral_gap_from_bias(a);
  return report;
}

std::vector<int> largest_component(const std::vector<std::vector<int>>& adjacency,
                                   const std::vector<char>& alive) {
  const std::size_t n = adjacency.size();
  std::vector<int> label(n, -1);
  std::vector<int> best;
  std::vector<int> current;
  std::queue<int> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    if (!alive[s] || label[s] != -1) continue;
    current.clear();
    label[s] = static_cast<int>(s);
    frontier.push(static_cast<int>(s));
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      current.push_back(u);
      for (int v : adjacency[static_cast<std::size_t>(u)]) {
        const auto vi = static_cast<std::size_t>(v);
        if (alive[vi] && label[vi] == -1) {
          label[vi] = static_cast<int>(s);
          frontier.push(v);
        }
      }
    }
    if (current.size() > best.size()) best = current;
  }
  std::sort(best.begin(), best.end());
  return best;
}

int largest_component_after_removal(const PolarizationGraph& graph, std::span<const int> removed) {
  std::vector<char> alive(static_cast<std::size_t>(graph.vertex_count()), 1);
  for (int v : removed) {
    if (v < 0 || v >= graph.vertex_count()) throw std::invalid_argument("largest_component_after_removal: vertex id out of range");
    alive[static_cast<std::size_t>(v)] = 0;
  }
  return static_cast<int>(largest_component(graph.adjacency_lists(), alive).size());
}

}  // namespace maskpr
