#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskpr/graph.hpp"
#include "maskpr/masks.hpp"
#include "maskpr/measure.hpp"
#include "maskpr/types.hpp"

namespace maskpr {

/// A pipeline stage could not produce usable output.
class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct WeightedEdge {
  int to = 0;
  Complex weight;  ///< w_{from,to}; the reverse entry holds the conjugate
};

/// Undirected graph with Hermitian complex edge weights, per-vertex magnitudes,
/// and a survival flag per vertex. Vertex ids are never renumbered; pruning
/// only clears flags, so ids keep mapping to (k, m) = (id / M, id % M).
class WeightedPolarizationGraph {
 public:
  WeightedPolarizationGraph() = default;
  explicit WeightedPolarizationGraph(int vertex_count);

  /// Sets w_ij = w and w_ji = conj(w), creating the edge if needed.
  void set_weight(int i, int j, Complex w);
  std::optional<Complex> weight(int i, int j) const;

  int vertex_count() const noexcept { return static_cast<int>(adjacency_.size()); }
  std::span<const WeightedEdge> edges_of(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }

  bool alive(int i) const { return alive_[static_cast<std::size_t>(i)] != 0; }
  void remove(int i) { alive_[static_cast<std::size_t>(i)] = 0; }
  const std::vector<char>& alive_flags() const noexcept { return alive_; }
  int alive_count() const;
  std::vector<int> alive_vertices() const;
  /// Number of edges with both endpoints alive.
  std::size_t alive_edge_count() const;
  /// Neighbor lists restricted to alive vertices (dead vertices get empty lists).
  std::vector<std::vector<int>> alive_adjacency() const;
  /// Clears every alive vertex outside the largest connected component.
  void keep_largest_component();

  std::vector<double>& magnitudes() noexcept { return magnitudes_; }
  const std::vector<double>& magnitudes() const noexcept { return magnitudes_; }

 private:
  std::vector<std::vector<WeightedEdge>> adjacency_;
  std::vector<char> alive_;
  std::vector<double> magnitudes_;
};

struct RecoveryParams {
  double alpha = 0.99;        ///< reliability pruning, in (0, 1]
  double tau = 0.1;           ///< connectivity target, in (0, 1)
  bool clamp_negative = true; ///< clamp noisy vertex intensities at 0 before sqrt
};

struct RecoveryResult {
  SignalInstance estimate;
  int surviving_vertices = 0;
  double final_gap = 0.0;
  int pruning_iterations = 0;  ///< reliability iterations + connectivity rounds
  bool success = false;
  std::string failed_stage;    ///< empty on success
  std::string message;
  std::vector<int> flagged_vertices;  ///< synchronization coordinates with |u_i| ~ 0
};

/// (1/3) sum_r omega^r I_r. With I_r = |<x, phi_i + omega^r phi_j>|^2 this is
/// conj(<x, phi_i>) <x, phi_j>.
Complex polarize(double i0, double i1, double i2);

/// w_ij = (1/3) sum_r omega^r I(k, k', a, r, m) for i = (k, m), j = (k', m + a).
/// Pairs estimated from both orientations get the Hermitian average.
/// Vertex magnitudes are sqrt(max(I, 0)) (or sqrt|I| when clamping is off).
WeightedPolarizationGraph edge_weights(const MeasurementSet& meas, const PolarizationGraph& graph,
                                       bool clamp_negative = true);

struct ReliabilityPruning {
  WeightedPolarizationGraph graph;
  int iterations = 0;          ///< iterations actually performed
  int planned_iterations = 0;  ///< floor((1 - alpha) |V|)
  bool stopped_early = false;  ///< ran out of edges
  double last_removed_weight = 0.0;
};

/// Reliability pruning: floor((1 - alpha)|V|) times, drop both endpoints of the
/// lightest remaining edge. Ties go to the lexicographically smallest (i, j).
ReliabilityPruning prune_reliability(const WeightedPolarizationGraph& g, double alpha);

struct ConnectivityPruning {
  WeightedPolarizationGraph graph;
  int rounds = 0;
  double final_gap = 0.0;
};

/// 1 - lambda_2(D^{-1/2} A D^{-1/2}) over the alive subgraph (unweighted),
/// i.e. the second-smallest normalized Laplacian eigenvalue.
double normalized_spectral_gap(const WeightedPolarizationGraph& g);

/// Connectivity pruning: while the gap is below tau, remove the minimum-conductance
/// sweep set of the Fiedler ordering, then keep the largest component.
/// Throws RecoveryError if fewer than 2 vertices would remain.
ConnectivityPruning prune_connectivity(const WeightedPolarizationGraph& g, double tau);

struct SyncResult {
  std::vector<Complex> phases;  ///< indexed by vertex id; 1 for dead vertices
  std::vector<int> flagged;     ///< alive vertices whose coordinate vanished
};

/// Angular synchronization: phases of the top eigenvector of D^{-1/2} A_1 D^{-1/2}, i.e.
/// the bottom eigenvector of the connection Laplacian.
SyncResult angular_sync(const WeightedPolarizationGraph& g);

/// Least-squares solve of <xhat, phi_i> = magnitude_i * phase_i over the
/// surviving vertices, phi_i = D_k f_m.
RecoveryResult assemble_and_solve(std::span<const Complex> phases, std::span<const double> magnitudes,
                                  std::span<const int> surviving, const MaskEnsemble& ensemble);

/// min_{|c| = 1} ||c xhat - x|| / ||x||.
double relative_error(const SignalInstance& xhat, const SignalInstance& x);

/// Full pipeline. Stage failures come back as success == false.
RecoveryResult recover(const MeasurementSet& meas, const MaskEnsemble& ensemble,
                       const RecoveryParams& params = {});

}  // namespace maskpr
