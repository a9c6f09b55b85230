#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace frcn;

namespace {

Graph two_edges() { return Graph::from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}}); }

}  // namespace

TEST(Graph, FromEdgesCanonicalizesOrientationAndOrder) {
  const auto g = Graph::from_edges(3, {{2, 1, 1.0}, {1, 0, 2.0}});
  ASSERT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.edges()[0].u, 0);
  EXPECT_EQ(g.edges()[0].v, 1);
  EXPECT_EQ(g.edges()[1].u, 1);
  EXPECT_EQ(g.edges()[1].v, 2);
  EXPECT_DOUBLE_EQ(g.weight(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.weight(0, 2), 0.0);
}

TEST(Graph, AdjacencyIsSymmetricClosure) {
  std::mt19937_64 rng(3);
  const auto g = oracle::random_graph(25, 0.2, rng);
  std::size_t total = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    total += g.degree(v);
    for (const auto& nb : g.neighbors(v)) EXPECT_DOUBLE_EQ(g.weight(nb.vertex, v), nb.weight);
  }
  EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(Graph, RejectsInvalidEdges) {
  EXPECT_THROW(Graph::from_edges(2, {{0, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, {{0, 2, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, {{0, 1, 0.0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, {{0, 1, -1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
}

TEST(MatrixMarket, ParsesGeneralReal) {
  const auto g = parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 2 1.0\n2 3 1.0\n");
  EXPECT_EQ(g.num_vertices(), 3);
  ASSERT_EQ(g.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 1.0);
}

TEST(MatrixMarket, PatternEntriesGetUnitWeight) {
  const auto g = parse_matrix_market(
      "%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n4 4 3\n2 1\n3 2\n4 3\n");
  EXPECT_EQ(g.num_vertices(), 4);
  EXPECT_EQ(g.num_edges(), 3u);
  for (const auto& e : g.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);
}

TEST(MatrixMarket, SymmetrizesGeneralEntries) {
  // Both orientations present: (|a_ij| + |a_ji|) / 2. One orientation only: |a| / 2.
  const auto g = parse_matrix_market(
      "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 2 -3.0\n2 1 1.0\n2 3 4.0\n");
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 2.0);
}

TEST(MatrixMarket, DropsDiagonal) {
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n2 2 5.0\n"), ParseError);
  const auto g = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n1 2 2.0\n");
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(MatrixMarket, Errors) {
  EXPECT_THROW(parse_matrix_market("3 3 1\n1 2 1\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\nabc\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n0 0 0\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 3 1\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 2 1\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1\n"), ParseError);
}

TEST(EdgeList, DefaultsAndWeights) {
  const auto g = parse_edge_list("1 2\n2 3\n");
  EXPECT_EQ(g.num_vertices(), 3);
  EXPECT_EQ(g.num_edges(), 2u);
  for (const auto& e : g.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);

  const auto w = parse_edge_list("1 2 0.1\n");
  EXPECT_EQ(w.num_vertices(), 2);
  EXPECT_DOUBLE_EQ(w.weight(0, 1), 0.1);
}

TEST(EdgeList, CommentsAndHeader) {
  const auto g = parse_edge_list("# a path with an isolated vertex\n5 2\n1 2 # first\n2 3\n");
  EXPECT_EQ(g.num_vertices(), 5);
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(parse_edge_list("1 1 1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("1 x\n"), ParseError);
  EXPECT_THROW(parse_edge_list("1 2 0\n"), ParseError);
  EXPECT_THROW(parse_edge_list("1 2 -1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("0 2\n"), ParseError);
}

TEST(EdgeList, RoundTripPreservesGraph) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(2 + trial, 0.3, rng);
    std::ostringstream out;
    write_edge_list(out, g);
    EXPECT_EQ(parse_edge_list(out.str()), g) << out.str();
  }
}

TEST(NormalizeWeights, Examples) {
  const auto a = normalize_weights({{0, 2}, {0, 0}});
  ASSERT_EQ(a.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(a.weight(0, 1), 1.0);
  const auto b = normalize_weights({{0, -3}, {3, 0}});
  EXPECT_DOUBLE_EQ(b.weight(0, 1), 3.0);
  EXPECT_EQ(normalize_weights({{0, 0}, {0, 0}}).num_edges(), 0u);
  EXPECT_THROW(normalize_weights({{0, 1}, {1}}), std::invalid_argument);
}

TEST(NormalizeWeights, SymmetricNonNegativeOnRandomInput) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution zero(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8;
    std::vector<std::vector<double>> t(n, std::vector<double>(n));
    for (auto& row : t)
      for (auto& x : row) x = zero(rng) ? 0.0 : gauss(rng);
    const auto g = normalize_weights(t);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const int a = static_cast<int>(i), b = static_cast<int>(j);
        EXPECT_EQ(g.weight(a, b), g.weight(b, a));
        EXPECT_GE(g.weight(a, b), 0.0);
        EXPECT_NEAR(g.weight(a, b), 0.5 * (std::abs(t[i][j]) + std::abs(t[j][i])), 1e-15);
      }
    }
  }
}

TEST(Components, Examples) {
  EXPECT_EQ(connected_components(make_cycle(4)).count(), 1u);
  const auto two = connected_components(two_edges());
  ASSERT_EQ(two.count(), 2u);
  EXPECT_EQ(two.groups[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(two.groups[1], (std::vector<int>{2, 3}));
  EXPECT_EQ(connected_components(Graph::from_edges(3, {})).count(), 3u);
}

TEST(Components, PartitionCoversVerticesOnce) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(30, 0.04, rng);
    const auto part = connected_components(g);
    std::vector<int> seen(30, 0);
    for (std::size_t c = 0; c < part.count(); ++c)
      for (int v : part.groups[c]) {
        ++seen[v];
        EXPECT_EQ(part.component_of[v], static_cast<int>(c));
      }
    for (int s : seen) EXPECT_EQ(s, 1);
    for (const auto& e : g.edges()) EXPECT_EQ(part.component_of[e.u], part.component_of[e.v]);
  }
}

TEST(DistanceTwo, Examples) {
  const auto path = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  EXPECT_EQ(distance_two_pairs(path), (std::vector<std::pair<int, int>>{{0, 2}}));
  EXPECT_EQ(distance_two_pairs(make_cycle(4)), (std::vector<std::pair<int, int>>{{0, 2}, {1, 3}}));
  EXPECT_TRUE(distance_two_pairs(make_cycle(3)).empty());
}

TEST(DistanceTwo, MatchesBfsOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> size(2, 50);
    std::uniform_real_distribution<double> density(0.02, 0.3);
    const auto g = oracle::random_graph(size(rng), density(rng), rng);
    EXPECT_EQ(distance_two_pairs(g), oracle::bfs_distance_two(g));
  }
}

TEST(Generators, CycleAndTree) {
  const auto c = make_cycle(300);
  EXPECT_EQ(c.num_vertices(), 300);
  EXPECT_EQ(c.num_edges(), 300u);
  for (int v = 0; v < 300; ++v) EXPECT_EQ(c.degree(v), 2u);

  for (int d = 0; d <= 9; ++d) {
    const auto t = make_binary_tree(d);
    EXPECT_EQ(t.num_vertices(), (1 << (d + 1)) - 1);
    EXPECT_EQ(t.num_edges(), static_cast<std::size_t>(t.num_vertices() - 1));
  }
  EXPECT_EQ(make_binary_tree(9).num_vertices(), 1023);
  EXPECT_THROW(make_cycle(2), std::invalid_argument);
}

TEST(Generators, GroupedRandom) {
  const auto a = make_grouped_random(100, 3, 1000, 1.0, 0.1, 7);
  const auto b = make_grouped_random(100, 3, 1000, 1.0, 0.1, 7);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.graph.num_vertices(), 100);
  EXPECT_EQ(a.graph.num_edges(), 1000u);
  EXPECT_EQ(std::count(a.group.begin(), a.group.end(), 0), 34);
  EXPECT_EQ(std::count(a.group.begin(), a.group.end(), 1), 33);
  EXPECT_EQ(std::count(a.group.begin(), a.group.end(), 2), 33);
  for (const auto& e : a.graph.edges())
    EXPECT_DOUBLE_EQ(e.weight, a.group[e.u] == a.group[e.v] ? 1.0 : 0.1);
  EXPECT_THROW(make_grouped_random(4, 2, 7, 1.0, 0.1, 1), std::invalid_argument);
}

TEST(Graph, SparsityAndUnweighted) {
  const auto g = Graph::from_edges(4, {{0, 1, 3.0}, {1, 2, 0.5}});
  EXPECT_DOUBLE_EQ(g.sparsity(), 2.0 * 2 / 12);
  const auto u = g.unweighted();
  for (const auto& e : u.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);
}
