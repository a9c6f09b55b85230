#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "frcn/energy.hpp"
#include "frcn/graph.hpp"
#include "frcn/hex_lattice.hpp"

namespace frcn {

struct CnParams {
  double t0 = 1.5;
  // Iteration budget; unset means default_cn_iterations(g).
  std::optional<std::uint64_t> n_iter;
  std::uint64_t seed = 1;
  // The 2x2 Hessian gets a ridge when its smallest eigenvalue falls below
  // guard_threshold * trace.
  double guard_threshold = 1e-10;
  double guard_scale = 1e-8;
  double guard_floor = 1e-12;
};

inline constexpr std::uint64_t kMaxCnIterations = 50'000'000;

// ceil(2 |V|^3 / |E|), capped at kMaxCnIterations; zero for edgeless graphs.
inline std::uint64_t default_cn_iterations(const Graph& g) {
  if (g.num_edges() == 0) return 0;
  const double n = g.num_vertices();
  const double iters = std::ceil(2.0 * n * n * n / static_cast<double>(g.num_edges()));
  if (iters >= static_cast<double>(kMaxCnIterations)) return kMaxCnIterations;
  return static_cast<std::uint64_t>(iters);
}

// Linear schedule t0 (1 - m / n_iter), floored at zero.
inline double temperature(std::uint64_t m, std::uint64_t n_iter, double t0) {
  if (n_iter == 0) return 0.0;
  const double t = t0 * (1.0 - static_cast<double>(m) / static_cast<double>(n_iter));
  return std::max(t, 0.0);
}

// H^{-1} g with a ridge when H is (nearly) singular, e.g. for an isolated vertex.
inline Vec2 newton_step(const Mat2& h, const Vec2& grad, const CnParams& cp) {
  const double tr = h.trace();
  Mat2 m = h;
  if (!(h.min_eigenvalue() >= cp.guard_threshold * tr) || tr <= 0.0) {
    m += Mat2::identity(cp.guard_scale * tr / 2.0 + cp.guard_floor);
  }
  return m.solve(grad);
}

// One coordinate-Newton move of vertex i on the lattice:
// round(x_i - H^{-1} grad + t r) with r uniform on the unit circle, then
// move or swap. Gradient and Hessian are those of the attractive-only f^a_i.
template <class Rng>
void cn_step(const Graph& g, Occupancy& occ, int i, double t, Rng& rng, const ForceParams& p, const CnParams& cp) {
  const auto pos = occ.positions();
  const Vec2 xi = pos[i];
  const Vec2 grad = attr_gradient(g, pos, i, p);
  const Mat2 hess = attr_hessian(g, pos, i, p);
  const Vec2 step = newton_step(hess, grad, cp);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double theta = angle(rng);
  const Vec2 noise{t * std::cos(theta), t * std::sin(theta)};
  occ.move_or_swap(i, round_to_hex(xi - step + noise));
}

// Runs n_iter coordinate-Newton moves on uniformly selected vertices.
// `observer(m, occ)` is invoked after every move.
template <class Rng, class Observer>
void cn_optimize(const Graph& g, Occupancy& occ, std::uint64_t n_iter, const ForceParams& p, const CnParams& cp,
                 Rng& rng, Observer&& observer) {
  const int n = g.num_vertices();
  if (n == 0) return;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (std::uint64_t m = 0; m < n_iter; ++m) {
    const int i = pick(rng);
    cn_step(g, occ, i, temperature(m, n_iter, cp.t0), rng, p, cp);
    observer(m, static_cast<const Occupancy&>(occ));
  }
}

template <class Rng>
void cn_optimize(const Graph& g, Occupancy& occ, std::uint64_t n_iter, const ForceParams& p, const CnParams& cp,
                 Rng& rng) {
  cn_optimize(g, occ, n_iter, p, cp, rng, [](std::uint64_t, const Occupancy&) {});
}

namespace detail {

struct Subgraph {
  Graph graph;
  std::vector<int> original;  // local id -> original vertex id
};

inline Subgraph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) local[vertices[k]] = static_cast<int>(k);
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (local[e.u] >= 0 && local[e.v] >= 0) edges.push_back({local[e.u], local[e.v], e.weight});
  return {Graph::from_edges(static_cast<int>(vertices.size()), std::move(edges)), vertices};
}

struct Box {
  Vec2 lo{kInfinity, kInfinity};
  Vec2 hi{-kInfinity, -kInfinity};
  void add(const Vec2& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

// Shelf-packs per-component lattice placements into one occupancy, keeping
// bounding boxes at least two units apart. Offsets are lattice vectors.
inline std::vector<HexCoord> pack_components(const std::vector<std::vector<HexCoord>>& parts) {
  constexpr double kGap = 2.0;
  std::vector<Box> boxes(parts.size());
  double area = 0.0;
  double widest = 0.0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    for (const auto& cell : parts[c]) boxes[c].add(to_euclidean(cell));
    area += (boxes[c].width() + kGap) * (boxes[c].height() + kGap);
    widest = std::max(widest, boxes[c].width() + kGap);
  }
  std::vector<std::size_t> order(parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return boxes[a].height() > boxes[b].height(); });
  const double shelf_width = std::max(std::sqrt(area), widest);

  std::vector<HexCoord> offsets(parts.size());
  double cursor_x = 0.0;
  double cursor_y = 0.0;
  double shelf_height = 0.0;
  for (std::size_t c : order) {
    const auto& box = boxes[c];
    if (cursor_x > 0.0 && cursor_x + box.width() > shelf_width) {
      cursor_x = 0.0;
      cursor_y += shelf_height + kGap;
      shelf_height = 0.0;
    }
    offsets[c] = round_to_hex(Vec2{cursor_x - box.lo.x, cursor_y - box.lo.y});
    cursor_x += box.width() + kGap;
    shelf_height = std::max(shelf_height, box.height());
  }
  return offsets;
}

inline std::vector<HexCoord> cn_lattice_connected(const Graph& g, std::uint64_t n_iter, const ForceParams& p,
                                                  const CnParams& cp, std::mt19937_64& rng) {
  auto occ = Occupancy::from_cells(initial_sample(static_cast<std::size_t>(g.num_vertices()), rng));
  cn_optimize(g, occ, n_iter, p, cp, rng);
  return occ.cells();
}

}  // namespace detail

// Coordinate-Newton initial placement: random lattice sample, n_iter noisy
// round-and-swap Newton moves with linearly decaying temperature, then the
// closed-form optimal rescale. Disconnected graphs are placed per component
// and shelf-packed on the lattice before rescaling. Deterministic per seed.
inline Layout cn_initial_placement(const Graph& g, const ForceParams& p, const CnParams& cp) {
  p.validate();
  if (!(cp.t0 >= 0.0)) throw std::invalid_argument("cn_initial_placement: t0 must be >= 0");
  const int n = g.num_vertices();
  if (n == 0) return {};
  std::mt19937_64 rng(cp.seed);

  std::vector<HexCoord> cells(static_cast<std::size_t>(n));
  const auto part = connected_components(g);
  if (part.count() == 1) {
    cells = detail::cn_lattice_connected(g, cp.n_iter.value_or(default_cn_iterations(g)), p, cp, rng);
  } else {
    std::vector<std::vector<HexCoord>> parts;
    parts.reserve(part.count());
    for (const auto& group : part.groups) {
      const auto sub = detail::induced_subgraph(g, group);
      std::uint64_t iters = default_cn_iterations(sub.graph);
      if (cp.n_iter) {
        iters = sub.graph.num_edges() == 0
                    ? 0
                    : static_cast<std::uint64_t>(std::llround(static_cast<double>(*cp.n_iter) * group.size() / n));
      }
      parts.push_back(detail::cn_lattice_connected(sub.graph, iters, p, cp, rng));
    }
    const auto offsets = detail::pack_components(parts);
    for (std::size_t c = 0; c < parts.size(); ++c)
      for (std::size_t k = 0; k < parts[c].size(); ++k) cells[part.groups[c][k]] = parts[c][k] + offsets[c];
  }

  Layout X(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) X[v] = to_euclidean(cells[v]);
  // Edgeless graphs have no attractive term; use lattice spacing k instead.
  const double s = g.num_edges() == 0 ? p.k : optimal_scale(g, X, p);
  return scale_layout(std::move(X), s);
}

}  // namespace frcn
