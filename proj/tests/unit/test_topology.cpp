#include "dcs/topology.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace dcs;

namespace {

Matrix kron_identity(const Matrix& L, int d) {
  const int m = static_cast<int>(L.rows());
  Matrix K = Matrix::Zero(m * d, m * d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) K.block(i * d, j * d, d, d) = L(i, j) * Matrix::Identity(d, d);
  return K;
}

}  // namespace

TEST(Graph, PathThreeHasTwoEdges) {
  Graph g = build_graph("path:3");
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], std::make_pair(0, 1));
  EXPECT_EQ(g.edges()[1], std::make_pair(1, 2));
}

TEST(Graph, CompleteFourHasSixEdges) { EXPECT_EQ(build_graph("complete:4").edge_count(), 6u); }

TEST(Graph, DuplicateEdgeRejected) {
  EXPECT_THROW(Graph::from_edges(2, {{0, 1}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST(Graph, SelfLoopAndRangeRejected) {
  EXPECT_THROW(Graph::from_edges(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
}

TEST(Graph, UnknownSpecRejected) {
  EXPECT_THROW(build_graph("grid:3"), std::invalid_argument);
  EXPECT_THROW(build_graph("path:x"), std::invalid_argument);
}

TEST(Graph, StarHubIsFirstNode) {
  Graph g = build_graph("star:4");
  EXPECT_EQ(g.degree(0), 3);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(g.degree(i), 1);
}

TEST(Graph, ErdosRenyiIsDeterministic) {
  Graph a = build_graph("erdos_renyi:8:0.4:7");
  Graph b = build_graph("erdos_renyi:8:0.4:7");
  EXPECT_EQ(a.edges(), b.edges());
}

TEST(Graph, FileRoundTrip) {
  auto path = std::filesystem::temp_directory_path() / "dcs_graph_roundtrip.txt";
  Graph g = build_graph("cycle:5");
  write_graph_file(g, path.string());
  Graph h = build_graph("file:" + path.string());
  EXPECT_EQ(g.edges(), h.edges());
  std::filesystem::remove(path);
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(build_graph("path:5")));
  EXPECT_FALSE(is_connected(Graph::from_edges(4, {{0, 1}, {2, 3}})));
  EXPECT_TRUE(is_connected(build_graph("complete:3")));
}

TEST(Laplacian, PathThreeRows) {
  Matrix L = laplacian(build_graph("path:3"), 1).dense();
  Matrix expect(3, 3);
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(L, expect);
}

TEST(Laplacian, CompleteThree) {
  Matrix L = laplacian(build_graph("complete:3"), 1).dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(L(i, j), i == j ? 2.0 : -1.0);
}

TEST(Laplacian, StarHubDegree) { EXPECT_EQ(laplacian(build_graph("star:4"), 1).dense()(0, 0), 3.0); }

TEST(ApplyLaplacian, ConsensusIsNullSpace) {
  auto L = laplacian(build_graph("path:5"), 3);
  Vector c(3);
  c << 0.3, -1.7, 2.0;
  EXPECT_EQ(apply_laplacian(L, Stacked::replicate(5, c)).norm(), 0.0);
}

TEST(ApplyLaplacian, PathThreeUnitVector) {
  auto L = laplacian(build_graph("path:3"), 1);
  Stacked x(3, 1);
  x.block(0)(0) = 1.0;
  Vector expect(3);
  expect << 1, -1, 0;
  EXPECT_EQ(apply_laplacian(L, x).flat(), expect);
}

TEST(ApplyLaplacian, MatchesDenseKronecker) {
  std::mt19937_64 rng(11);
  for (const char* spec : {"path:5", "cycle:6", "star:5", "erdos_renyi:7:0.5:3"}) {
    Graph g = build_graph(spec);
    for (int d : {1, 2, 4}) {
      auto L = laplacian(g, d);
      Stacked x = fixtures::random_stacked(rng, g.agents(), d);
      Vector oracle = kron_identity(L.dense(), d) * x.flat();
      EXPECT_LT((apply_laplacian(L, x).flat() - oracle).norm(), 1e-12) << spec << " d=" << d;
    }
  }
}

TEST(ApplyLaplacian, ShapeMismatchThrows) {
  auto L = laplacian(build_graph("path:3"), 2);
  EXPECT_THROW(apply_laplacian(L, Stacked(3, 1)), std::invalid_argument);
  EXPECT_THROW(apply_laplacian(L, Stacked(4, 2)), std::invalid_argument);
}

TEST(Spectral, PathThree) {
  auto s = spectral_constants(laplacian(build_graph("path:3"), 2));
  EXPECT_NEAR(s.op_norm, 3.0, 1e-12);
  EXPECT_NEAR(s.min_nonzero_singular, 1.0, 1e-12);
}

TEST(Spectral, CompleteFour) {
  auto s = spectral_constants(laplacian(build_graph("complete:4"), 1));
  EXPECT_NEAR(s.op_norm, 4.0, 1e-12);
  EXPECT_NEAR(s.min_nonzero_singular, 4.0, 1e-12);
}

TEST(Spectral, CycleFour) { EXPECT_NEAR(spectral_constants(laplacian(build_graph("cycle:4"), 1)).op_norm, 4.0, 1e-12); }

TEST(Spectral, PathClosedForm) {
  for (int m : {2, 5, 9}) {
    auto s = spectral_constants(laplacian(build_graph("path:" + std::to_string(m)), 1));
    EXPECT_NEAR(s.op_norm, 2.0 + 2.0 * std::cos(std::numbers::pi / m), 1e-12);
    EXPECT_NEAR(s.min_nonzero_singular, 2.0 - 2.0 * std::cos(std::numbers::pi / m), 1e-12);
  }
}

TEST(Spectral, DisconnectedRejected) {
  EXPECT_THROW(spectral_constants(laplacian(Graph::from_edges(4, {{0, 1}, {2, 3}}), 1)), std::invalid_argument);
}
