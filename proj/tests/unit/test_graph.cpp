#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "maskpr/graph.hpp"
#include "maskpr/setgen.hpp"

using namespace maskpr;

namespace {

ModulationSet random_set(int dim, std::mt19937_64& rng, double p) {
  std::vector<int> b;
  for (int a = 1; a < dim; ++a) {
    if (std::bernoulli_distribution(p)(rng)) b.push_back(a);
  }
  if (b.empty()) b.push_back(1);
  return symmetrize(dim, b);
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& adj) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adj, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

TEST(BuildGraph, FourCycle) {
  const auto g = build_graph(1, 4, ModulationSet::from_elements(4, {1, 3}));
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.degree(), 2);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(g.neighbors(i), (std::vector<int>{std::min((i + 1) % 4, (i + 3) % 4), std::max((i + 1) % 4, (i + 3) % 4)}));
  }
  EXPECT_FALSE(g.adjacent(0, 2));
}

TEST(BuildGraph, CompleteOnFive) {
  const auto g = build_graph(1, 5, ModulationSet::from_elements(5, {1, 2, 3, 4}));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(g.adjacent(i, j), i != j);
}

TEST(BuildGraph, TwoLayersOfFour) {
  const auto g = build_graph(2, 4, ModulationSet::from_elements(4, {1, 3}));
  EXPECT_EQ(g.vertex_count(), 8);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(g.neighbors(i).size(), 4u);
  EXPECT_TRUE(g.adjacent(g.id({0, 0}), g.id({1, 1})));
  EXPECT_FALSE(g.adjacent(g.id({0, 0}), g.id({1, 0})));
}

TEST(BuildGraph, RejectsEmptySet) {
  EXPECT_THROW(build_graph(2, 8, ModulationSet{}), std::invalid_argument);
  EXPECT_THROW(build_graph(2, 8, ModulationSet::from_elements(6, {3})), std::invalid_argument);
}

TEST(BuildGraph, AdjacencyIsKroneckerOfOnesAndCirculant) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = std::uniform_int_distribution<int>(2, 30)(rng);
    const int count = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto a = random_set(dim, rng, 0.3);
    const auto g = build_graph(count, dim, a);
    const Eigen::MatrixXd adj = g.adjacency_matrix();
    EXPECT_TRUE(adj.isApprox(adj.transpose()));
    for (int i = 0; i < g.vertex_count(); ++i) {
      EXPECT_EQ(adj(i, i), 0.0);
      EXPECT_EQ(adj.row(i).sum(), g.degree());
      for (int j = 0; j < g.vertex_count(); ++j) {
        const int diff = ((j % dim) - (i % dim) + dim) % dim;
        EXPECT_EQ(adj(i, j), a.contains(diff) ? 1.0 : 0.0);
      }
    }
  }
}

TEST(EdgeList, OneLinePerEdge) {
  const auto g = build_graph(2, 4, ModulationSet::from_elements(4, {1, 3}));
  std::ostringstream os;
  g.write_edge_list(os);
  std::istringstream is(os.str());
  std::string line;
  std::set<std::pair<int, int>> seen;
  while (std::getline(is, line)) {
    int k, m, kp, mp;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d %d,%d", &k, &m, &kp, &mp), 4) << line;
    const int i = g.id({k, m});
    const int j = g.id({kp, mp});
    EXPECT_LT(i, j);
    EXPECT_TRUE(g.adjacent(i, j));
    EXPECT_TRUE(seen.insert({i, j}).second);
  }
  EXPECT_EQ(seen.size(), 8u * 4u / 2u);
}

TEST(SpectralGapEigen, FourCycle) {
  const auto g = build_graph(1, 4, ModulationSet::from_elements(4, {1, 3}));
  const auto ev = sorted_eigenvalues(g.adjacency_matrix());
  EXPECT_NEAR(ev[0], -2.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_NEAR(ev[2], 0.0, 1e-12);
  EXPECT_NEAR(ev[3], 2.0, 1e-12);
  const auto report = spectral_gap_eigen(g);
  EXPECT_NEAR(report.gap, 0.0, 1e-12);
  EXPECT_NEAR(report.lambda_max, 2.0, 1e-12);
  EXPECT_EQ(report.method, GapMethod::eigendecomposition);
}

TEST(SpectralGapEigen, CompleteGraphIsKIndependent) {
  const auto a = ModulationSet::from_elements(5, {1, 2, 3, 4});
  const auto g1 = build_graph(1, 5, a);
  const auto ev = sorted_eigenvalues(g1.adjacency_matrix());
  EXPECT_NEAR(ev[4], 4.0, 1e-12);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], -1.0, 1e-12);
  EXPECT_NEAR(spectral_gap_eigen(g1).gap, 0.75, 1e-12);
  EXPECT_NEAR(spectral_gap_eigen(build_graph(2, 5, a)).gap, 0.75, 1e-12);
}

TEST(SpectralGapEigen, AgreesWithBiasFormula) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = std::uniform_int_distribution<int>(2, 64)(rng);
    const int count = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto a = random_set(dim, rng, 0.25);
    const auto g = build_graph(count, dim, a);
    const auto eig = spectral_gap_eigen(g);
    const auto bias = spectral_gap_bias(g);
    EXPECT_NEAR(eig.gap, bias.gap, 1e-9) << "M=" << dim << " K=" << count;
    EXPECT_NEAR(bias.gap, spectral_gap_from_bias(a), 1e-15);
    EXPECT_EQ(bias.method, GapMethod::bias_formula);
  }
}

TEST(SpectralGapEigen, SameAcrossCounts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = std::uniform_int_distribution<int>(2, 40)(rng);
    const auto a = random_set(dim, rng, 0.3);
    const double g1 = spectral_gap_eigen(build_graph(1, dim, a)).gap;
    EXPECT_NEAR(spectral_gap_eigen(build_graph(2, dim, a)).gap, g1, 1e-9);
    EXPECT_NEAR(spectral_gap_eigen(build_graph(3, dim, a)).gap, g1, 1e-9);
  }
}

TEST(SpectralGapEigen, RejectsNonFiniteMatrix) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Ones(3, 3);
  adj(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(spectral_gap_eigen(adj), std::invalid_argument);
}

TEST(Components, Examples) {
  const auto cycle = build_graph(1, 4, ModulationSet::from_elements(4, {1, 3}));
  EXPECT_EQ(largest_component_after_removal(cycle, std::vector<int>{}), 4);
  EXPECT_EQ(largest_component_after_removal(cycle, std::vector<int>{2}), 3);
  EXPECT_EQ(largest_component_after_removal(cycle, std::vector<int>{0, 2}), 1);
  const auto g = build_graph(3, 16, ModulationSet::from_elements(16, {1, 15}));
  EXPECT_EQ(largest_component_after_removal(g, std::vector<int>{}), 48);
}

TEST(Components, LargestComponentTieGoesToSmallestId) {
  const std::vector<std::vector<int>> adj{{1}, {0}, {3}, {2}};
  const std::vector<char> alive(4, 1);
  EXPECT_EQ(largest_component(adj, alive), (std::vector<int>{0, 1}));
  const std::vector<char> partial{0, 1, 1, 1};
  EXPECT_EQ(largest_component(adj, partial), (std::vector<int>{2, 3}));
}

TEST(Components, RemovalBoundForLargeGap) {
  // Removing M - 1 vertices from a graph with gap >= 6/K must leave a
  // component of at least M vertices.
  std::mt19937_64 rng(4);
  const int count = 12;
  int graphs = 0;
  while (graphs < 10) {
    const int dim = std::uniform_int_distribution<int>(8, 24)(rng);
    const auto a = random_set(dim, rng, 0.8);
    const auto g = build_graph(count, dim, a);
    if (spectral_gap_bias(g).gap < 6.0 / count) continue;
    ++graphs;
    std::vector<int> ids(static_cast<std::size_t>(g.vertex_count()));
    std::iota(ids.begin(), ids.end(), 0);
    for (int draw = 0; draw < 20; ++draw) {
      std::shuffle(ids.begin(), ids.end(), rng);
      const std::vector<int> removed(ids.begin(), ids.begin() + (dim - 1));
      EXPECT_GE(largest_component_after_removal(g, removed), dim);
    }
  }
}

TEST(SpectralGapEigen, ManyLayersStillMatchBiasFormula) {
  // K = 12 leaves a zero eigenvalue of multiplicity 11 M in the adjacency.
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = std::uniform_int_distribution<int>(8, 48)(rng);
    const auto a = random_set(dim, rng, std::uniform_real_distribution<double>(0.3, 0.9)(rng));
    const auto g = build_graph(12, dim, a);
    const auto report = spectral_gap_eigen(g);
    EXPECT_NEAR(report.gap, spectral_gap_bias(g).gap, 1e-9) << "M=" << dim << " |A|=" << a.size();
    EXPECT_NEAR(report.lambda_max, g.degree(), 1e-9);
  }
}
