#include "maskpr/recover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace maskpr {

// ---------------------------------------------------------------------------
// WeightedPolarizationGraph

WeightedPolarizationGraph::WeightedPolarizationGraph(int vertex_count)
    : adjacency_(static_cast<std::size_t>(vertex_count)),
      alive_(static_cast<std::size_t>(vertex_count), 1),
      magnitudes_(static_cast<std::size_t>(vertex_count), 0.0) {}

namespace {

void upsert(std::vector<WeightedEdge>& list, int to, Complex w) {
  auto it = std::lower_bound(list.begin(), list.end(), to,
                             [](const WeightedEdge& e, int v) { return e.to < v; });
  if (it != list.end() && it->to == to) {
    it->weight = w;
  } else {
    list.insert(it, WeightedEdge{to, w});
  }
}

}  // namespace

void WeightedPolarizationGraph::set_weight(int i, int j, Complex w) {
  if (i == j) throw std::invalid_argument("WeightedPolarizationGraph: self-loops are not allowed");
  if (i < 0 || j < 0 || i >= vertex_count() || j >= vertex_count()) {
    throw std::invalid_argument("WeightedPolarizationGraph: vertex id out of range");
  }
  upsert(adjacency_[static_cast<std::size_t>(i)], j, w);
  upsert(adjacency_[static_cast<std::size_t>(j)], i, std::conj(w));
}

std::optional<Complex> WeightedPolarizationGraph::weight(int i, int j) const {
  const auto& list = adjacency_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(list.begin(), list.end(), j,
                             [](const WeightedEdge& e, int v) { return e.to < v; });
  if (it == list.end() || it->to != j) return std::nullopt;
  return it->weight;
}

int WeightedPolarizationGraph::alive_count() const {
  return static_cast<int>(std::count(alive_.begin(), alive_.end(), 1));
}

std::vector<int> WeightedPolarizationGraph::alive_vertices() const {
  std::vector<int> out;
  for (int i = 0; i < vertex_count(); ++i) {
    if (alive(i)) out.push_back(i);
  }
  return out;
}

std::size_t WeightedPolarizationGraph::alive_edge_count() const {
  std::size_t twice = 0;
  for (int i = 0; i < vertex_count(); ++i) {
    if (!alive(i)) continue;
    for (const auto& e : edges_of(i)) twice += alive(e.to) ? 1 : 0;
  }
  return twice / 2;
}

std::vector<std::vector<int>> WeightedPolarizationGraph::alive_adjacency() const {
  std::vector<std::vector<int>> adj(adjacency_.size());
  for (int i = 0; i < vertex_count(); ++i) {
    if (!alive(i)) continue;
    for (const auto& e : edges_of(i)) {
      if (alive(e.to)) adj[static_cast<std::size_t>(i)].push_back(e.to);
    }
  }
  return adj;
}

void WeightedPolarizationGraph::keep_largest_component() {
  const std::vector<int> keep = largest_component(alive_adjacency(), alive_);
  std::fill(alive_.begin(), alive_.end(), 0);
  for (int v : keep) alive_[static_cast<std::size_t>(v)] = 1;
}

// ---------------------------------------------------------------------------
// Edge weights

Complex polarize(double i0, double i1, double i2) {
  return (i0 + omega_pow(1) * i1 + omega_pow(2) * i2) / 3.0;
}

WeightedPolarizationGraph edge_weights(const MeasurementSet& meas, const PolarizationGraph& graph,
                                       bool clamp_negative) {
  const int dim = graph.dim();
  const int count = graph.count();
  const auto mods = graph.modulations().elements();
  if (meas.dim() != dim || meas.count() != count ||
      !std::equal(mods.begin(), mods.end(), meas.modulations().begin(), meas.modulations().end())) {
    throw RecoveryError("edge weights", "measurement layout does not match the polarization graph");
  }

  WeightedPolarizationGraph g(graph.vertex_count());
  for (int k = 0; k < count; ++k) {
    for (int m = 0; m < dim; ++m) {
      const double v = meas.vertex(k, m);
      g.magnitudes()[static_cast<std::size_t>(graph.id(Vertex{k, m}))] =
          clamp_negative ? std::sqrt(std::max(v, 0.0)) : std::sqrt(std::abs(v));
    }
  }

  // Estimates keyed by (min id, max id), oriented from the smaller id.
  std::map<std::pair<int, int>, std::pair<Complex, int>> estimates;
  for (int k = 0; k < count; ++k) {
    for (int kp = 0; kp <= k; ++kp) {
      for (std::size_t ai = 0; ai < mods.size(); ++ai) {
        const int a = mods[ai];
        for (int m = 0; m < dim; ++m) {
          const int ia = static_cast<int>(ai);
          const Complex w = polarize(meas.edge(k, kp, ia, 0, m), meas.edge(k, kp, ia, 1, m),
                                     meas.edge(k, kp, ia, 2, m));
          const int i = graph.id(Vertex{k, m});
          const int j = graph.id(Vertex{kp, (m + a) % dim});
          auto& slot = i < j ? estimates[{i, j}] : estimates[{j, i}];
          slot.first += i < j ? w : std::conj(w);
          slot.second += 1;
        }
      }
    }
  }

  const auto expected_edges = static_cast<std::size_t>(graph.vertex_count()) *
                              static_cast<std::size_t>(graph.degree()) / 2;
  if (estimates.size() != expected_edges) {
    throw RecoveryError("edge weights", "measurements cover " + std::to_string(estimates.size()) +
                                            " of " + std::to_string(expected_edges) + " graph edges");
  }
  for (const auto& [key, acc] : estimates) {
    g.set_weight(key.first, key.second, acc.first / static_cast<double>(acc.second));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Reliability pruning

ReliabilityPruning prune_reliability(const WeightedPolarizationGraph& g, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("prune_reliability: alpha must lie in (0, 1]");
  ReliabilityPruning out{g, 0, 0, false, 0.0};
  const double planned = (1.0 - alpha) * g.vertex_count();
  out.planned_iterations = static_cast<int>(std::floor(planned + 1e-9));
  if (out.planned_iterations == 0) return out;

  struct Candidate {
    double magnitude;
    int i;
    int j;
  };
  std::vector<Candidate> edges;
  for (int i = 0; i < g.vertex_count(); ++i) {
    if (!g.alive(i)) continue;
    for (const auto& e : g.edges_of(i)) {
      if (e.to > i && g.alive(e.to)) edges.push_back({std::abs(e.weight), i, e.to});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.magnitude, a.i, a.j) < std::tie(b.magnitude, b.i, b.j);
  });

  // Removal only ever kills edges, so a single pass over the sorted list finds
  // each iteration's lightest surviving edge.
  std::size_t cursor = 0;
  while (out.iterations < out.planned_iterations) {
    while (cursor < edges.size() && !(out.graph.alive(edges[cursor].i) && out.graph.alive(edges[cursor].j))) ++cursor;
    if (cursor == edges.size()) {
      out.stopped_early = true;
      break;
    }
    out.graph.remove(edges[cursor].i);
    out.graph.remove(edges[cursor].j);
    out.last_removed_weight = edges[cursor].magnitude;
    ++out.iterations;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity pruning

namespace {

struct NormalizedSpectrum {
  std::vector<int> vertices;       // alive ids, position p <-> row p
  Eigen::VectorXd degree;
  Eigen::VectorXd eigenvalues;     // ascending, of D^{-1/2} A D^{-1/2}
  Eigen::MatrixXd eigenvectors;
};

NormalizedSpectrum normalized_spectrum(const WeightedPolarizationGraph& g, bool vectors) {
  NormalizedSpectrum s;
  s.vertices = g.alive_vertices();
  const auto n = static_cast<Eigen::Index>(s.vertices.size());
  std::vector<int> position(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Eigen::Index p = 0; p < n; ++p) position[static_cast<std::size_t>(s.vertices[static_cast<std::size_t>(p)])] = static_cast<int>(p);

  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (const auto& e : g.edges_of(s.vertices[static_cast<std::size_t>(p)])) {
      const int q = position[static_cast<std::size_t>(e.to)];
      if (q >= 0) adj(p, q) = 1.0;
    }
  }
  s.degree = adj.rowwise().sum();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index p = 0; p < n; ++p) inv_sqrt[p] = s.degree[p] > 0.0 ? 1.0 / std::sqrt(s.degree[p]) : 0.0;
  const Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * adj * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      normalized, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw RecoveryError("connectivity pruning", "eigensolver failed");
  s.eigenvalues = solver.eigenvalues();
  if (vectors) s.eigenvectors = solver.eigenvectors();
  return s;
}

// 1 - lambda_2 of D^{-1/2} A D^{-1/2}, i.e. the second-smallest eigenvalue of
// the normalized Laplacian. The most negative eigenvalue is ignored: it is -1
// on every bipartite graph, which would make the loop below prune bipartite
// survivors down to nothing even though they synchronize fine.
double gap_from_eigenvalues(const Eigen::VectorXd& ev) {
  const Eigen::Index n = ev.size();
  if (n < 2) return 0.0;
  return 1.0 - ev[n - 2];
}

}  // namespace

double normalized_spectral_gap(const WeightedPolarizationGraph& g) {
  return gap_from_eigenvalues(normalized_spectrum(g, false).eigenvalues);
}

ConnectivityPruning prune_connectivity(const WeightedPolarizationGraph& g, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("prune_connectivity: tau must lie in (0, 1)");
  ConnectivityPruning out{g, 0, 0.0};
  WeightedPolarizationGraph& work = out.graph;
  // Isolated or stranded vertices have no degree to normalize by.
  work.keep_largest_component();

  while (true) {
    if (work.alive_count() < 2) {
      throw RecoveryError("connectivity pruning", "connectivity unreachable: fewer than 2 vertices remain");
    }
    NormalizedSpectrum s = normalized_spectrum(work, true);
    out.final_gap = gap_from_eigenvalues(s.eigenvalues);
    if (out.final_gap >= tau) break;

    const auto n = static_cast<Eigen::Index>(s.vertices.size());
    // Second eigenvalue of L = I - N is the second largest of N.
    const Eigen::VectorXd fiedler = s.eigenvectors.col(n - 2);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::vector<double> key(static_cast<std::size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) key[static_cast<std::size_t>(p)] = fiedler[p] / std::sqrt(s.degree[p]);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
    });

    std::vector<int> position(static_cast<std::size_t>(work.vertex_count()), -1);
    for (Eigen::Index p = 0; p < n; ++p) position[static_cast<std::size_t>(s.vertices[static_cast<std::size_t>(p)])] = static_cast<int>(p);
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    const double total_volume = s.degree.sum();
    double volume = 0.0;
    double cut = 0.0;
    double best_h = std::numeric_limits<double>::infinity();
    Eigen::Index best_size = 1;
    for (Eigen::Index i = 1; i < n; ++i) {
      const Eigen::Index p = order[static_cast<std::size_t>(i - 1)];
      double inside = 0.0;
      for (const auto& e : work.edges_of(s.vertices[static_cast<std::size_t>(p)])) {
        const int q = position[static_cast<std::size_t>(e.to)];
        if (q >= 0 && in_set[static_cast<std::size_t>(q)]) inside += 1.0;
      }
      in_set[static_cast<std::size_t>(p)] = 1;
      cut += s.degree[p] - 2.0 * inside;
      volume += s.degree[p];
      const double h = cut / std::min(volume, total_volume - volume);
      if (h < best_h) {
        best_h = h;
        best_size = i;
      }
    }
    for (Eigen::Index i = 0; i < best_size; ++i) {
      work.remove(s.vertices[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    }
    work.keep_largest_component();
    ++out.rounds;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Angular synchronization

SyncResult angular_sync(const WeightedPolarizationGraph& g) {
  const std::vector<int> vertices = g.alive_vertices();
  const auto n = static_cast<Eigen::Index>(vertices.size());
  if (n == 0) throw RecoveryError("angular synchronization", "no surviving vertices");
  std::vector<int> position(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Eigen::Index p = 0; p < n; ++p) position[static_cast<std::size_t>(vertices[static_cast<std::size_t>(p)])] = static_cast<int>(p);

  // Entry (i, j) holds conj(w_ij)/|w_ij|, which is z_i conj(z_j) when
  // w_ij = conj(z_i) z_j, so the top eigenvector is z itself.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (const auto& e : g.edges_of(vertices[static_cast<std::size_t>(p)])) {
      const int q = position[static_cast<std::size_t>(e.to)];
      if (q < 0 || e.weight == Complex(0.0, 0.0)) continue;
      h(p, q) = std::conj(e.weight) / std::abs(e.weight);
      degree[p] += 1.0;
    }
  }
  if (degree.sum() == 0.0) throw RecoveryError("angular synchronization", "all edge weights are zero");

  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index p = 0; p < n; ++p) inv_sqrt[p] = degree[p] > 0.0 ? 1.0 / std::sqrt(degree[p]) : 0.0;
  const Eigen::MatrixXcd normalized = inv_sqrt.asDiagonal() * h * inv_sqrt.asDiagonal();
  // Smallest eigenvalue of I - N is the largest of N.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(normalized);
  if (solver.info() != Eigen::Success) throw RecoveryError("angular synchronization", "eigensolver failed");
  const Eigen::VectorXcd u = solver.eigenvectors().col(n - 1);

  SyncResult out;
  out.phases.assign(static_cast<std::size_t>(g.vertex_count()), Complex(1.0, 0.0));
  for (Eigen::Index p = 0; p < n; ++p) {
    const int v = vertices[static_cast<std::size_t>(p)];
    const double mag = std::abs(u[p]);
    if (mag < 1e-12) {
      out.flagged.push_back(v);
    } else {
      out.phases[static_cast<std::size_t>(v)] = u[p] / mag;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Least squares

RecoveryResult assemble_and_solve(std::span<const Complex> phases, std::span<const double> magnitudes,
                                  std::span<const int> surviving, const MaskEnsemble& ensemble) {
  const int dim = ensemble.dim();
  const int vertex_total = dim * ensemble.count();
  if (static_cast<int>(phases.size()) != vertex_total || static_cast<int>(magnitudes.size()) != vertex_total) {
    throw std::invalid_argument("assemble_and_solve: phases and magnitudes must cover every vertex id");
  }

  RecoveryResult result;
  result.estimate.values = CVector::Zero(dim);
  result.surviving_vertices = static_cast<int>(surviving.size());
  const auto rows = static_cast<Eigen::Index>(surviving.size());
  if (rows < dim) {
    result.failed_stage = "least squares";
    result.message = "only " + std::to_string(rows) + " surviving vertices for dimension " + std::to_string(dim);
    return result;
  }

  // Row i is phi_i^*, so (Phi^* x)_i = <x, phi_i>.
  Eigen::MatrixXcd system(rows, dim);
  CVector rhs(rows);
  const double scale = 1.0 / dim;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int v = surviving[static_cast<std::size_t>(r)];
    if (v < 0 || v >= vertex_total) throw std::invalid_argument("assemble_and_solve: vertex id out of range");
    const int k = v / dim;
    const int m = v % dim;
    const CVector& diag = ensemble.vertex().masks[static_cast<std::size_t>(k)].diag;
    for (int mp = 0; mp < dim; ++mp) {
      system(r, mp) = std::conj(diag[mp]) * std::conj(root_of_unity(static_cast<std::int64_t>(m) * mp, dim)) * scale;
    }
    rhs[r] = magnitudes[static_cast<std::size_t>(v)] * phases[static_cast<std::size_t>(v)];
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < dim) {
    result.failed_stage = "least squares";
    result.message = "rank " + std::to_string(svd.rank()) + " < " + std::to_string(dim);
    return result;
  }
  result.estimate.values = svd.solve(rhs);
  result.success = true;
  return result;
}

double relative_error(const SignalInstance& xhat, const SignalInstance& x) {
  if (xhat.dim() != x.dim()) throw std::invalid_argument("relative_error: dimension mismatch");
  const double norm = x.values.norm();
  if (norm == 0.0) throw std::invalid_argument("relative_error: reference signal is zero");
  // <xhat, x> = sum xhat conj(x); Eigen's dot conjugates its left argument.
  const Complex inner = x.values.dot(xhat.values);
  const Complex c = std::abs(inner) > 0.0 ? std::conj(inner) / std::abs(inner) : Complex(1.0, 0.0);
  return (c * xhat.values - x.values).norm() / norm;
}

// ---------------------------------------------------------------------------

RecoveryResult recover(const MeasurementSet& meas, const MaskEnsemble& ensemble, const RecoveryParams& params) {
  if (meas.dim() != ensemble.dim() || meas.count() != ensemble.count()) {
    throw std::invalid_argument("recover: measurement and ensemble dimensions differ");
  }
  RecoveryResult failure;
  failure.estimate.values = CVector::Zero(ensemble.dim());
  try {
    if (ensemble.modulations().empty()) {
      throw RecoveryError("graph", "modulation set is empty; no edges to polarize");
    }
    const PolarizationGraph graph = build_graph(ensemble.count(), ensemble.dim(), ensemble.modulations());
    const WeightedPolarizationGraph weighted = edge_weights(meas, graph, params.clamp_negative);
    ReliabilityPruning reliable = prune_reliability(weighted, params.alpha);
    failure.pruning_iterations = reliable.iterations;
    if (reliable.graph.alive_edge_count() == 0) {
      throw RecoveryError("reliability pruning", "no edges survive");
    }
    ConnectivityPruning connected = prune_connectivity(reliable.graph, params.tau);
    failure.pruning_iterations += connected.rounds;
    failure.final_gap = connected.final_gap;
    failure.surviving_vertices = connected.graph.alive_count();
    const SyncResult sync = angular_sync(connected.graph);
    const std::vector<int> surviving = connected.graph.alive_vertices();
    RecoveryResult result = assemble_and_solve(sync.phases, connected.graph.magnitudes(), surviving, ensemble);
    result.final_gap = connected.final_gap;
    result.pruning_iterations = reliable.iterations + connected.rounds;
    result.flagged_vertices = sync.flagged;
    return result;
  } catch (const RecoveryError& e) {
    failure.failed_stage = e.stage();
    failure.message = e.what();
    return failure;
  }
}

}  // namespace maskpr
