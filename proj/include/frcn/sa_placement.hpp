#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "frcn/cn_placement.hpp"
#include "frcn/graph.hpp"

namespace frcn {

// Signed angle from the ray through a to the ray through b, in (-pi, pi].
inline double angle(const Vec2& a, const Vec2& b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0))
    throw std::invalid_argument("angle: zero-length point");
  const double cross = a.x * b.y - a.y * b.x;
  const double theta = std::atan2(cross, dot(a, b));
  return theta <= -std::numbers::pi ? std::numbers::pi : theta;
}

// Assignment of vertices to the n equally spaced points of the unit circle;
// slot s in [1, n] sits at angle 2 pi s / n.
struct CirclePerm {
  std::vector<int> slot;

  static CirclePerm identity(int n) {
    CirclePerm p;
    p.slot.resize(static_cast<std::size_t>(n));
    std::iota(p.slot.begin(), p.slot.end(), 1);
    return p;
  }

  int size() const { return static_cast<int>(slot.size()); }

  Vec2 position(int v) const {
    const double a = 2.0 * std::numbers::pi * slot[v] / size();
    return {std::cos(a), std::sin(a)};
  }

  Layout to_layout() const {
    Layout out(slot.size());
    for (int v = 0; v < size(); ++v) out[v] = position(v);
    return out;
  }

  bool is_permutation() const {
    std::vector<bool> seen(slot.size() + 1, false);
    for (int s : slot) {
      if (s < 1 || s > size() || seen[s]) return false;
      seen[s] = true;
    }
    return true;
  }
};

// |angle| between circle slots a and b of an n-point circle, computed from the
// index difference so it is exact under slot rotation.
inline double slot_angle(int a, int b, int n) {
  const int delta = std::abs(a - b) % n;
  return 2.0 * std::numbers::pi * std::min(delta, n - delta) / n;
}

// The pair set E ∪ E2 of the circle objective; weights are ignored.
inline std::vector<std::pair<int, int>> circle_objective_pairs(const Graph& g) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : g.edges()) pairs.emplace_back(e.u, e.v);
  const auto e2 = distance_two_pairs(g);
  pairs.insert(pairs.end(), e2.begin(), e2.end());
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// Sum of |angle(x_i, x_j)| over {i,j} in E ∪ E2.
inline double sa_objective(const Graph& g, const std::vector<std::pair<int, int>>& e2, const CirclePerm& cp) {
  const int n = cp.size();
  double total = 0.0;
  for (const auto& e : g.edges()) total += slot_angle(cp.slot[e.u], cp.slot[e.v], n);
  for (const auto& [i, j] : e2) total += slot_angle(cp.slot[i], cp.slot[j], n);
  return total;
}

// Exhaustive minimum over all n! slot assignments; only sensible for n <= 9.
inline double sa_exhaustive_minimum(const Graph& g) {
  const auto e2 = distance_two_pairs(g);
  auto cp = CirclePerm::identity(g.num_vertices());
  double best = kInfinity;
  do {
    best = std::min(best, sa_objective(g, e2, cp));
  } while (std::next_permutation(cp.slot.begin(), cp.slot.end()));
  return best;
}

struct SaParams {
  // Defaults to the coordinate-Newton budget of the same graph.
  std::optional<std::uint64_t> n_iter;
  std::uint64_t seed = 1;
  // Geometric cooling T_m = t_initial * alpha^m reaching t_initial * final_ratio.
  double t_initial = std::numbers::pi;
  double final_ratio = 1e-3;
  // Keep the objective after every accepted move (testing aid).
  bool record_history = false;
};

struct SaResult {
  CirclePerm best;
  double best_objective = 0.0;
  std::uint64_t accepted = 0;
  std::vector<double> accepted_objectives;
};

// Simulated annealing over circle placements with random two-vertex swaps and
// Metropolis acceptance. Move evaluation is O(deg) over E ∪ E2.
inline SaResult sa_optimize(const Graph& g, const SaParams& sp) {
  const int n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("sa_optimize: need at least 2 vertices");
  const Graph binary = g.unweighted();
  const std::uint64_t n_iter = sp.n_iter.value_or(std::max<std::uint64_t>(1, default_cn_iterations(binary)));
  std::mt19937_64 rng(sp.seed);

  const auto e2 = distance_two_pairs(binary);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : binary.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (const auto& [i, j] : e2) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  CirclePerm cur = CirclePerm::identity(n);
  std::shuffle(cur.slot.begin(), cur.slot.end(), rng);
  double value = sa_objective(binary, e2, cur);

  SaResult out{cur, value, 0, {}};
  auto swap_delta = [&](int u, int v) {
    const int su = cur.slot[u];
    const int sv = cur.slot[v];
    double delta = 0.0;
    for (int w : adj[u]) {
      if (w == v) continue;
      delta += slot_angle(sv, cur.slot[w], n) - slot_angle(su, cur.slot[w], n);
    }
    for (int w : adj[v]) {
      if (w == u) continue;
      delta += slot_angle(su, cur.slot[w], n) - slot_angle(sv, cur.slot[w], n);
    }
    return delta;
  };

  const double alpha = std::pow(sp.final_ratio, 1.0 / static_cast<double>(n_iter));
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temp = sp.t_initial;
  for (std::uint64_t m = 0; m < n_iter; ++m, temp *= alpha) {
    const int u = pick(rng);
    int v = pick(rng);
    while (v == u) v = pick(rng);
    const double delta = swap_delta(u, v);
    const double u01 = unit(rng);
    const bool accept = delta <= 0.0 || (temp > 0.0 && u01 < std::exp(-delta / temp));
    if (!accept) continue;
    std::swap(cur.slot[u], cur.slot[v]);
    value += delta;
    ++out.accepted;
    if (sp.record_history) out.accepted_objectives.push_back(value);
    if (value < out.best_objective - 1e-12) {
      out.best = cur;
      out.best_objective = value;
    }
  }
  // Re-evaluate exactly to shed accumulated rounding.
  out.best_objective = sa_objective(binary, e2, out.best);
  return out;
}

// Circle coordinates of the best permutation found.
inline Layout sa_initial_placement(const Graph& g, const SaParams& sp) { return sa_optimize(g, sp).best.to_layout(); }

}  // namespace frcn
