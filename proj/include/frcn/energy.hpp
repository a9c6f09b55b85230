#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "frcn/common.hpp"
#include "frcn/graph.hpp"

namespace frcn {

// Anything indexable by vertex id that yields a position: Layout, or a lazy
// view over lattice cells.
template <class P>
concept PositionSource = requires(const P& p, int i) {
  { p[i] } -> std::convertible_to<Vec2>;
};

// Parameters of the force model. The repulsive potential is
// -k^2 log(d + eps_r * k); eps_r = 0 gives the exact model where coincident
// vertices have infinite energy.
struct ForceParams {
  double k = 1.0;
  double eps_r = 0.0;

  static constexpr double kDefaultEpsR = 1e-2;

  // k = 1/sqrt(n) with the default repulsion guard.
  static ForceParams automatic(int n, double eps_r = kDefaultEpsR) { return {default_k(n), eps_r}; }

  static double default_k(int n) {
    if (n < 1) throw std::invalid_argument("default_k: need n >= 1");
    return 1.0 / std::sqrt(static_cast<double>(n));
  }

  double guard() const { return eps_r * k; }

  void validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("ForceParams: k must be positive");
    if (!(eps_r >= 0.0) || !std::isfinite(eps_r)) throw std::invalid_argument("ForceParams: eps_r must be >= 0");
  }
};

inline double default_k(int n) { return ForceParams::default_k(n); }

// How derivative routines treat coincident vertices under the exact model.
enum class Coincidence {
  raise,  // throw NumericError
  clamp,  // use distance max(d, kMinDistance)
};

inline constexpr double kMinDistance = 1e-9;

// E_ij(d) = a d^3 / (3k) - k^2 log(d + eps). Returns +inf at d = 0 without a guard.
inline double pair_energy(double d, double a, const ForceParams& p) {
  if (d < 0.0 || std::isnan(d)) throw std::invalid_argument("pair_energy: negative distance");
  const double shifted = d + p.guard();
  if (shifted == 0.0) return kInfinity;
  return a * d * d * d / (3.0 * p.k) - p.k * p.k * std::log(shifted);
}

namespace detail {

struct Radial {
  double over_d;     // E'(d)/d, multiplies (x_i - x_j) in the gradient
  double rank_one;   // (E''(d) - E'(d)/d) / d^2, multiplies (x_i - x_j)(x_i - x_j)^T
};

inline Radial repulsive_radial(double d, const ForceParams& p) {
  const double k2 = p.k * p.k;
  const double s = d + p.guard();
  const double first = -k2 / s;         // E_r'
  const double second = k2 / (s * s);   // E_r''
  return {first / d, (second - first / d) / (d * d)};
}

// Distance used for derivative evaluation; handles the exact-model coincidence.
inline double effective_distance(double d, const ForceParams& p, Coincidence mode, int i, int j) {
  if (p.eps_r > 0.0 && d > 0.0) return d;
  if (d >= kMinDistance) return d;
  if (mode == Coincidence::clamp) return kMinDistance;
  if (p.eps_r > 0.0) return kMinDistance;
  throw NumericError("coincident vertices " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                     " with eps_r = 0");
}

}  // namespace detail

// f(X) = sum_{i<j} E_ij(|x_i - x_j|), accumulated in ascending (i, j) order.
template <PositionSource P>
double total_energy(const Graph& g, const P& X, const ForceParams& p) {
  const int n = g.num_vertices();
  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) row[nb.vertex] = nb.weight;
    const Vec2 xi = X[i];
    for (int j = i + 1; j < n; ++j) {
      const double e = pair_energy(norm(xi - Vec2(X[j])), row[j], p);
      if (e == kInfinity) return kInfinity;
      total += e;
    }
    for (const auto& nb : g.neighbors(i)) row[nb.vertex] = 0.0;
  }
  return total;
}

inline double total_energy(const Graph& g, const Layout& X, const ForceParams& p) {
  if (X.size() != static_cast<std::size_t>(g.num_vertices()))
    throw std::invalid_argument("total_energy: layout size does not match graph");
  return total_energy<Layout>(g, X, p);
}

// Gradient of f with respect to x_i (the force sum on vertex i).
template <PositionSource P>
Vec2 vertex_gradient(const Graph& g, const P& X, int i, const ForceParams& p,
                     Coincidence mode = Coincidence::raise) {
  const int n = g.num_vertices();
  const Vec2 xi = X[i];
  Vec2 grad;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const Vec2 v = xi - Vec2(X[j]);
    const double d = detail::effective_distance(norm(v), p, mode, i, j);
    grad += detail::repulsive_radial(d, p).over_d * v;
  }
  for (const auto& nb : g.neighbors(i)) {
    const Vec2 v = xi - Vec2(X[nb.vertex]);
    grad += (nb.weight * norm(v) / p.k) * v;
  }
  return grad;
}

// Hessian of f restricted to x_i.
template <PositionSource P>
Mat2 vertex_hessian(const Graph& g, const P& X, int i, const ForceParams& p,
                    Coincidence mode = Coincidence::raise) {
  const int n = g.num_vertices();
  const Vec2 xi = X[i];
  Mat2 iso;
  Mat2 rank;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const Vec2 v = xi - Vec2(X[j]);
    const double d = detail::effective_distance(norm(v), p, mode, i, j);
    const auto r = detail::repulsive_radial(d, p);
    iso += Mat2::identity(r.over_d);
    rank += r.rank_one * Mat2::outer(v);
  }
  for (const auto& nb : g.neighbors(i)) {
    const Vec2 v = xi - Vec2(X[nb.vertex]);
    const double d = norm(v);
    if (d == 0.0) continue;
    iso += Mat2::identity(nb.weight * d / p.k);
    rank += (nb.weight / (p.k * d)) * Mat2::outer(v);
  }
  return iso + rank;
}

// f^a_i(x_i) = sum over neighbours of a_ij |x_i - x_j|^3 / (3k).
template <PositionSource P>
double attr_energy_vertex(const Graph& g, const P& X, int i, const ForceParams& p) {
  const Vec2 xi = X[i];
  double e = 0.0;
  for (const auto& nb : g.neighbors(i)) {
    const double d = norm(xi - Vec2(X[nb.vertex]));
    e += nb.weight * d * d * d / (3.0 * p.k);
  }
  return e;
}

template <PositionSource P>
Vec2 attr_gradient(const Graph& g, const P& X, int i, const ForceParams& p) {
  const Vec2 xi = X[i];
  Vec2 grad;
  for (const auto& nb : g.neighbors(i)) {
    const Vec2 v = xi - Vec2(X[nb.vertex]);
    grad += (nb.weight * norm(v) / p.k) * v;
  }
  return grad;
}

// Isotropic part plus rank-one part; PSD, and PD once any neighbour is apart.
template <PositionSource P>
Mat2 attr_hessian(const Graph& g, const P& X, int i, const ForceParams& p) {
  const Vec2 xi = X[i];
  Mat2 h;
  for (const auto& nb : g.neighbors(i)) {
    const Vec2 v = xi - Vec2(X[nb.vertex]);
    const double d = norm(v);
    if (d == 0.0) continue;
    h += Mat2::identity(nb.weight * d / p.k);
    h += (nb.weight / (p.k * d)) * Mat2::outer(v);
  }
  return h;
}

// f^a(X) = sum over edges of a_ij |x_i - x_j|^3 / (3k).
template <PositionSource P>
double attractive_energy(const Graph& g, const P& X, const ForceParams& p) {
  double e = 0.0;
  for (const auto& edge : g.edges()) {
    const double d = norm(Vec2(X[edge.u]) - Vec2(X[edge.v]));
    e += edge.weight * d * d * d / (3.0 * p.k);
  }
  return e;
}

// Computes f(X) and the full gradient in one pass over pairs i < j. Under the
// exact model a coincident pair yields +inf energy while its gradient uses the
// clamped distance.
inline double energy_and_gradient(const Graph& g, std::span<const Vec2> X, const ForceParams& p,
                                  std::span<Vec2> grad) {
  const int n = g.num_vertices();
  std::fill(grad.begin(), grad.end(), Vec2{});
  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  bool infinite = false;
  const double k2 = p.k * p.k;
  const double eps = p.guard();
  for (int i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) row[nb.vertex] = nb.weight;
    const Vec2 xi = X[i];
    Vec2 gi;
    for (int j = i + 1; j < n; ++j) {
      const Vec2 v = xi - X[j];
      const double raw = norm(v);
      const double a = row[j];
      if (raw + eps == 0.0) {
        infinite = true;
      } else if (!infinite) {
        total += a * raw * raw * raw / (3.0 * p.k) - k2 * std::log(raw + eps);
      }
      const double d = raw >= kMinDistance ? raw : kMinDistance;
      const double coeff = a * d / p.k - k2 / ((d + eps) * d);
      const Vec2 c = coeff * v;
      gi += c;
      grad[j] -= c;
    }
    grad[i] += gi;
    for (const auto& nb : g.neighbors(i)) row[nb.vertex] = 0.0;
  }
  return infinite ? kInfinity : total;
}

// ---------------------------------------------------------------------------
// Global scaling

// Minimizer over s > 0 of phi(s) = f^a(sX) - k^2 sum_{i<j} log(s d_ij):
// s* = (k^3 n(n-1) / (2 sum_E a_ij d_ij^3))^(1/3). Costs O(|E|).
template <PositionSource P>
double optimal_scale(const Graph& g, const P& X, const ForceParams& p) {
  double cubes = 0.0;
  for (const auto& e : g.edges()) {
    const double d = norm(Vec2(X[e.u]) - Vec2(X[e.v]));
    cubes += e.weight * d * d * d;
  }
  if (!(cubes > 0.0)) throw NumericError("optimal_scale: every edge has zero length");
  const double n = g.num_vertices();
  return std::cbrt(p.k * p.k * p.k * n * (n - 1.0) / (2.0 * cubes));
}

// phi(s), exact model (no repulsion guard). O(n^2).
inline double scaling_objective(const Graph& g, const Layout& X, const ForceParams& p, double s) {
  const ForceParams exact{p.k, 0.0};
  Layout scaled = X;
  for (auto& x : scaled) x *= s;
  return total_energy(g, scaled, exact);
}

// phi'(s) = s^2 sum_E a_ij d_ij^3 / k - k^2 n(n-1) / (2s).
inline double scaling_derivative(const Graph& g, const Layout& X, const ForceParams& p, double s) {
  double cubes = 0.0;
  for (const auto& e : g.edges()) {
    const double d = norm(X[e.u] - X[e.v]);
    cubes += e.weight * d * d * d;
  }
  const double n = g.num_vertices();
  return s * s * cubes / p.k - p.k * p.k * n * (n - 1.0) / (2.0 * s);
}

inline Layout scale_layout(Layout X, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("scale_layout: factor must be positive");
  for (auto& x : X) x *= s;
  return X;
}

// ---------------------------------------------------------------------------
// Gravity for disconnected graphs

struct GravityConfig {
  Vec2 center{0.5, 0.5};
  bool enabled = true;
};

struct GravityTerm {
  double energy = 0.0;
  std::vector<Vec2> gradient;
};

// f_g = sum_j |V_j|/2 |g_j - center|^2 with g_j the centroid of component j;
// every vertex of component j gets gradient row g_j - center.
inline GravityTerm gravity_energy_and_gradient(const Graph& g, std::span<const Vec2> X,
                                               const ComponentPartition& part, const GravityConfig& cfg) {
  GravityTerm out;
  out.gradient.assign(static_cast<std::size_t>(g.num_vertices()), Vec2{});
  if (!cfg.enabled) return out;
  for (const auto& group : part.groups) {
    Vec2 centroid;
    for (int v : group) centroid += X[v];
    centroid *= 1.0 / static_cast<double>(group.size());
    const Vec2 offset = centroid - cfg.center;
    out.energy += 0.5 * static_cast<double>(group.size()) * dot(offset, offset);
    for (int v : group) out.gradient[v] = offset;
  }
  return out;
}

}  // namespace frcn
