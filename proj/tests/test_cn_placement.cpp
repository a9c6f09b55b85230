#include <gtest/gtest.h>

#include <unordered_set>

#include "oracles.hpp"

using namespace frcn;

namespace {

bool all_distinct(const std::vector<HexCoord>& cells) {
  std::unordered_set<HexCoord, HexCoordHash> s(cells.begin(), cells.end());
  return s.size() == cells.size();
}

}  // namespace

TEST(CnSchedule, Temperature) {
  EXPECT_DOUBLE_EQ(temperature(0, 100, 1.5), 1.5);
  EXPECT_DOUBLE_EQ(temperature(100, 100, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(temperature(50, 100, 1.5), 0.75);
  EXPECT_DOUBLE_EQ(temperature(150, 100, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(temperature(0, 0, 1.5), 0.0);
}

TEST(CnSchedule, DefaultIterations) {
  EXPECT_EQ(default_cn_iterations(make_cycle(300)), 180000u);
  EXPECT_EQ(default_cn_iterations(make_binary_tree(9)), static_cast<std::uint64_t>(std::ceil(2.0 * 1023 * 1023 * 1023 / 1022)));
  EXPECT_EQ(default_cn_iterations(Graph::from_edges(5, {})), 0u);
  const auto sparse_big = Graph::from_edges(5000, {{0, 1, 1.0}});
  EXPECT_EQ(default_cn_iterations(sparse_big), kMaxCnIterations);
}

TEST(CnStep, IsolatedVertexStaysPutAtZeroTemperature) {
  const auto g = Graph::from_edges(3, {{1, 2, 1.0}});
  auto occ = Occupancy::from_cells({{2, -1}, {0, 0}, {1, 0}});
  std::mt19937_64 rng(1);
  cn_step(g, occ, 0, 0.0, rng, ForceParams{1.0, 0.0}, CnParams{});
  EXPECT_EQ(occ.cell_of(0), (HexCoord{2, -1}));
}

TEST(CnStep, TwoVertexNewtonTarget) {
  const auto g = Graph::from_edges(2, {{0, 1, 1.0}});
  const ForceParams p{1.0, 0.0};
  const Layout X{{3, 0}, {0, 0}};
  const auto grad = attr_gradient(g, X, 0, p);
  const auto H = attr_hessian(g, X, 0, p);
  EXPECT_EQ(grad, (Vec2{9, 0}));
  EXPECT_EQ(H, (Mat2{6, 0, 3}));
  const Vec2 target = X[0] - newton_step(H, grad, CnParams{});
  EXPECT_NEAR(target.x, 1.5, 1e-15);
  EXPECT_NEAR(target.y, 0.0, 1e-15);

  auto occ = Occupancy::from_cells({{3, 0}, {0, 0}});
  std::mt19937_64 rng(1);
  cn_step(g, occ, 0, 0.0, rng, p, CnParams{});
  const auto want = oracle::brute_nearest_hex({1.5, 0});
  EXPECT_NEAR(norm(to_euclidean(occ.cell_of(0)) - Vec2{1.5, 0}), norm(to_euclidean(want) - Vec2{1.5, 0}), 1e-12);
  EXPECT_TRUE(occ.cell_of(0) == (HexCoord{1, 0}) || occ.cell_of(0) == (HexCoord{2, 0}));
}

TEST(CnStep, CollisionSwaps) {
  const auto g = Graph::from_edges(3, {{0, 1, 1.0}});
  const auto landing = round_to_hex({1.5, 0});
  auto occ = Occupancy::from_cells({{3, 0}, {0, 0}, landing});
  std::mt19937_64 rng(1);
  cn_step(g, occ, 0, 0.0, rng, ForceParams{1.0, 0.0}, CnParams{});
  EXPECT_EQ(occ.cell_of(0), landing);
  EXPECT_EQ(occ.cell_of(2), (HexCoord{3, 0}));
  EXPECT_TRUE(occ.consistent());
}

TEST(CnStep, NoiseHasMagnitudeT) {
  // Isolated vertex: the rounded target is round(x + t r), within t + 1 of x.
  const auto g = Graph::from_edges(2, {});
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto occ = Occupancy::from_cells({{0, 0}, {40, 40}});
    cn_step(g, occ, 0, 3.0, rng, ForceParams{1.0, 0.0}, CnParams{});
    const double moved = norm(to_euclidean(occ.cell_of(0)));
    EXPECT_LE(moved, 3.0 + 1.0 / std::sqrt(3.0) + 1e-12);
    EXPECT_GE(moved, 3.0 - 1.0 / std::sqrt(3.0) - 1e-12);
  }
}

TEST(NewtonStep, DecreasesAttractiveEnergy) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_graph(10, 0.3, rng);
    const auto X = oracle::random_layout(10, rng);
    const int i = trial % 10;
    const ForceParams p{0.5, 0.0};
    const auto grad = attr_gradient(g, X, i, p);
    const auto H = attr_hessian(g, X, i, p);
    if (norm(grad) == 0.0 || H.min_eigenvalue() < 1e-10 * H.trace()) continue;
    Layout Y = X;
    Y[i] = X[i] - newton_step(H, grad, CnParams{});
    EXPECT_LT(attr_energy_vertex(g, Y, i, p), attr_energy_vertex(g, X, i, p));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(NewtonStep, GuardHandlesZeroHessian) {
  const auto step = newton_step(Mat2{}, Vec2{}, CnParams{});
  EXPECT_EQ(step, (Vec2{0, 0}));
  const auto tiny = newton_step(Mat2{1, 0, 0}, Vec2{1, 0}, CnParams{});
  EXPECT_TRUE(is_finite(tiny));
}

TEST(CnOptimize, CellsStayDistinctEveryIteration) {
  std::mt19937_64 rng(4);
  const auto g = oracle::random_connected_graph(40, 30, rng);
  auto occ = Occupancy::from_cells(initial_sample(40, rng));
  bool ok = true;
  cn_optimize(g, occ, 5000, ForceParams::automatic(40, 0.0), CnParams{}, rng,
              [&](std::uint64_t, const Occupancy& o) { ok = ok && o.consistent() && all_distinct(o.cells()); });
  EXPECT_TRUE(ok);
}

TEST(CnPlacement, TwoVertexEndsAtEquilibriumDistance) {
  const auto g = Graph::from_edges(2, {{0, 1, 1.0}});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CnParams cp;
    cp.seed = seed;
    const auto X = cn_initial_placement(g, ForceParams{1.0, 0.0}, cp);
    EXPECT_NEAR(norm(X[0] - X[1]), 1.0, 1e-12);
  }
}

TEST(CnPlacement, ZeroIterationsIsRescaledSample) {
  const auto g = make_cycle(12);
  const auto p = ForceParams::automatic(12);
  CnParams cp;
  cp.n_iter = 0;
  cp.seed = 7;
  std::mt19937_64 rng(7);
  Layout expect;
  for (const auto& c : initial_sample(12, rng)) expect.push_back(to_euclidean(c));
  expect = scale_layout(expect, optimal_scale(g, expect, p));
  EXPECT_EQ(cn_initial_placement(g, p, cp), expect);
}

TEST(CnPlacement, DeterministicPerSeed) {
  const auto g = make_binary_tree(5);
  const auto p = ForceParams::automatic(g.num_vertices());
  CnParams cp;
  cp.seed = 3;
  EXPECT_EQ(cn_initial_placement(g, p, cp), cn_initial_placement(g, p, cp));
  CnParams other = cp;
  other.seed = 4;
  EXPECT_NE(cn_initial_placement(g, p, cp), cn_initial_placement(g, p, other));
}

TEST(CnPlacement, OutputIsAtOptimalScale) {
  const auto g = make_cycle(50);
  const auto p = ForceParams::automatic(50);
  const auto X = cn_initial_placement(g, p, CnParams{});
  EXPECT_NEAR(optimal_scale(g, X, p), 1.0, 1e-12);
}

TEST(CnPlacement, BeatsRandomOnCycle) {
  const auto g = make_cycle(300);
  const auto p = ForceParams::automatic(300);
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CnParams cp;
    cp.seed = seed;
    const double cn = total_energy(g, cn_initial_placement(g, p, cp), p);
    const double rnd = total_energy(g, random_initial_placement(300, seed), p);
    wins += cn < rnd;
  }
  EXPECT_GE(wins, 9);
}

TEST(CnPlacement, DisconnectedComponentsAreSeparated) {
  // Two triangles and an isolated vertex.
  const auto g = Graph::from_edges(7, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}});
  const auto p = ForceParams::automatic(7);
  const auto X = cn_initial_placement(g, p, CnParams{});
  ASSERT_EQ(X.size(), 7u);
  for (const auto& x : X) EXPECT_TRUE(is_finite(x));
  double min_gap = kInfinity;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) min_gap = std::min(min_gap, norm(X[i] - X[j]));
  EXPECT_GT(min_gap, 0.0);
  // Every cross-component distance exceeds every within-triangle edge length.
  double longest_edge = 0.0;
  for (const auto& e : g.edges()) longest_edge = std::max(longest_edge, norm(X[e.u] - X[e.v]));
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) EXPECT_GT(norm(X[i] - X[j]), longest_edge);
}

TEST(CnPlacement, EdgelessGraphUsesSpacingK) {
  const auto g = Graph::from_edges(5, {});
  const auto p = ForceParams::automatic(5);
  const auto X = cn_initial_placement(g, p, CnParams{});
  double min_gap = kInfinity;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) min_gap = std::min(min_gap, norm(X[i] - X[j]));
  EXPECT_GE(min_gap, p.k * (1 - 1e-12));
}

TEST(CnPlacement, RejectsNegativeTemperature) {
  CnParams cp;
  cp.t0 = -1.0;
  EXPECT_THROW(cn_initial_placement(make_cycle(5), ForceParams::automatic(5), cp), std::invalid_argument);
}
