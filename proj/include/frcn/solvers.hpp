#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frcn/energy.hpp"
#include "frcn/graph.hpp"

namespace frcn {

struct SolverConfig {
  int n_iter = 50;
  // FR initial temperature; unset means 0.1 * largest side of the initial bounding box.
  std::optional<double> t0;
  int memory = 10;
  // FR: mean per-vertex displacement threshold. L-BFGS: gradient norm threshold.
  // Unset means 1e-6 * k.
  std::optional<double> tol;
  int trace_every = 1;
  // Armijo constant and backtracking limit of the L-BFGS line search.
  double armijo = 1e-4;
  int max_backtracks = 60;
};

enum class Termination { max_iterations, converged, line_search_failure };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::max_iterations: return "max_iterations";
    case Termination::converged: return "converged";
    case Termination::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

struct TraceRecord {
  int iteration = 0;
  double energy = 0.0;
  double elapsed_ms = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;
  Layout layout;
  Termination termination = Termination::max_iterations;
  int iterations = 0;

  double initial_energy() const { return records.front().energy; }
  double final_energy() const { return records.back().energy; }
};

// The minimized objective: f(X), plus the gravity term when the graph has more
// than one connected component.
class LayoutObjective {
 public:
  LayoutObjective(const Graph& g, const ForceParams& p)
      : graph_(&g), params_(p), partition_(connected_components(g)) {
    gravity_.enabled = partition_.count() > 1;
  }

  const ForceParams& params() const { return params_; }
  bool gravity_enabled() const { return gravity_.enabled; }

  double operator()(std::span<const Vec2> X, std::span<Vec2> grad) const {
    double f = energy_and_gradient(*graph_, X, params_, grad);
    if (gravity_.enabled) {
      const auto term = gravity_energy_and_gradient(*graph_, X, partition_, gravity_);
      f += term.energy;
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += term.gradient[i];
    }
    return f;
  }

  double value(std::span<const Vec2> X) const {
    std::vector<Vec2> scratch(X.size());
    return (*this)(X, scratch);
  }

 private:
  const Graph* graph_;
  ForceParams params_;
  ComponentPartition partition_;
  GravityConfig gravity_;
};

namespace detail {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline double bounding_extent(const Layout& X) {
  if (X.empty()) return 0.0;
  double lx = X[0].x, hx = X[0].x, ly = X[0].y, hy = X[0].y;
  for (const auto& p : X) {
    lx = std::min(lx, p.x);
    hx = std::max(hx, p.x);
    ly = std::min(ly, p.y);
    hy = std::max(hy, p.y);
  }
  return std::max(hx - lx, hy - ly);
}

inline bool should_record(int iteration, const SolverConfig& sc) {
  return sc.trace_every <= 1 || iteration % sc.trace_every == 0;
}

inline void validate(const Graph& g, const Layout& X0, const SolverConfig& sc) {
  if (X0.size() != static_cast<std::size_t>(g.num_vertices()))
    throw std::invalid_argument("solver: layout size does not match graph");
  if (sc.n_iter < 1) throw std::invalid_argument("solver: n_iter must be >= 1");
  if (sc.memory < 1) throw std::invalid_argument("solver: memory must be >= 1");
  if (sc.tol && *sc.tol < 0.0) throw std::invalid_argument("solver: tol must be >= 0");
}

}  // namespace detail

// FR step temperature for 0-based iteration m: t0 (1 - m / n_iter).
inline double fr_temperature(int m, int n_iter, double t0) {
  return t0 * (1.0 - static_cast<double>(m) / static_cast<double>(n_iter));
}

// Fruchterman-Reingold simulation: every iteration computes all vertex
// gradients from one snapshot, then moves each vertex a distance t against its
// gradient direction. Stops early when the mean displacement drops below tol.
inline Trace fr_solve(const Graph& g, const Layout& X0, const ForceParams& p, const SolverConfig& sc) {
  p.validate();
  detail::validate(g, X0, sc);
  const detail::Stopwatch clock;
  const LayoutObjective objective(g, p);
  const double tol = sc.tol.value_or(1e-6 * p.k);
  double t0 = sc.t0.value_or(0.1 * detail::bounding_extent(X0));
  if (!(t0 > 0.0)) t0 = p.k;
  const auto n = static_cast<std::size_t>(g.num_vertices());

  Trace trace;
  trace.layout = X0;
  std::vector<Vec2> grad(n);
  double f = objective(trace.layout, grad);
  trace.records.push_back({0, f, clock.elapsed_ms()});

  bool fresh = true;  // grad matches trace.layout
  for (int m = 0; m < sc.n_iter; ++m) {
    const double t = fr_temperature(m, sc.n_iter, t0);
    if (!fresh) f = objective(trace.layout, grad);
    fresh = false;
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double len = norm(grad[i]);
      if (len < 1e-12) continue;
      trace.layout[i] -= (t / len) * grad[i];
      moved += t;
      if (!is_finite(trace.layout[i]))
        throw NumericError("fr_solve: non-finite position at iteration " + std::to_string(m + 1));
    }
    trace.iterations = m + 1;
    const bool converged = n == 0 || moved / static_cast<double>(n) < tol;
    const bool last = converged || m + 1 == sc.n_iter;
    if (last || detail::should_record(m + 1, sc)) {
      f = objective(trace.layout, grad);
      fresh = true;
      trace.records.push_back({m + 1, f, clock.elapsed_ms()});
    }
    if (converged) {
      trace.termination = Termination::converged;
      break;
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// L-BFGS

struct LbfgsOptions {
  int max_iter = 100;
  int memory = 10;
  double grad_tol = 1e-8;
  double armijo = 1e-4;
  int max_backtracks = 60;
  // Length of the first (steepest-descent) trial step.
  double initial_step = 1.0;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  Termination termination = Termination::max_iterations;
};

// Limited-memory BFGS with the two-loop recursion and Armijo backtracking
// (step halving). `f(x, grad)` returns the objective and writes the gradient;
// `on_iteration(it, x, fx)` runs after every accepted step.
template <class Objective, class Callback>
LbfgsResult lbfgs_minimize(Objective&& f, std::vector<double> x, const LbfgsOptions& opt, Callback&& on_iteration) {
  const std::size_t dim = x.size();
  auto dotp = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  std::vector<double> g(dim), g_new(dim), x_new(dim), d(dim);
  double fx = f(std::span<const double>(x), std::span<double>(g));
  if (!std::isfinite(fx)) throw NumericError("lbfgs: non-finite objective at the starting point");

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> alpha(static_cast<std::size_t>(opt.memory));

  LbfgsResult out;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double gnorm = std::sqrt(dotp(g, g));
    if (gnorm < opt.grad_tol) {
      out.termination = Termination::converged;
      break;
    }

    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha[k] = history[k].rho * dotp(history[k].s, d);
      for (std::size_t i = 0; i < dim; ++i) d[i] -= alpha[k] * history[k].y[i];
    }
    if (history.empty()) {
      const double scale = opt.initial_step / gnorm;
      for (auto& di : d) di *= scale;
    } else {
      const auto& last = history.back();
      const double gamma = dotp(last.s, last.y) / dotp(last.y, last.y);
      for (auto& di : d) di *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * dotp(history[k].y, d);
      for (std::size_t i = 0; i < dim; ++i) d[i] += (alpha[k] - beta) * history[k].s[i];
    }
    double slope = dotp(g, d);
    if (!(slope < 0.0)) {
      history.clear();
      for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i] * opt.initial_step / gnorm;
      slope = dotp(g, d);
    }

    double step = 1.0;
    double f_new = kInfinity;
    bool accepted = false;
    for (int b = 0; b <= opt.max_backtracks; ++b, step *= 0.5) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + step * d[i];
      f_new = f(std::span<const double>(x_new), std::span<double>(g_new));
      if (std::isfinite(f_new) && f_new <= fx + opt.armijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.termination = Termination::line_search_failure;
      break;
    }

    Pair pr{std::vector<double>(dim), std::vector<double>(dim), 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
      pr.s[i] = x_new[i] - x[i];
      pr.y[i] = g_new[i] - g[i];
    }
    const double sy = dotp(pr.s, pr.y);
    if (sy > 1e-12 * std::sqrt(dotp(pr.s, pr.s) * dotp(pr.y, pr.y)) && sy > 0.0) {
      pr.rho = 1.0 / sy;
      history.push_back(std::move(pr));
      if (history.size() > static_cast<std::size_t>(opt.memory)) history.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    out.iterations = it;
    on_iteration(it, static_cast<const std::vector<double>&>(x), fx);
  }
  out.grad_norm = std::sqrt(dotp(g, g));
  if (out.termination == Termination::max_iterations && out.grad_norm < opt.grad_tol)
    out.termination = Termination::converged;
  out.value = fx;
  out.x = std::move(x);
  return out;
}

template <class Objective>
LbfgsResult lbfgs_minimize(Objective&& f, std::vector<double> x, const LbfgsOptions& opt) {
  return lbfgs_minimize(std::forward<Objective>(f), std::move(x), opt, [](int, const std::vector<double>&, double) {});
}

// L-BFGS on the flattened layout (x_1, y_1, x_2, y_2, ...). Recorded energies
// are non-increasing by the sufficient-decrease condition.
inline Trace lbfgs_solve(const Graph& g, const Layout& X0, const ForceParams& p, const SolverConfig& sc) {
  p.validate();
  detail::validate(g, X0, sc);
  const detail::Stopwatch clock;
  const LayoutObjective objective(g, p);
  const auto n = static_cast<std::size_t>(g.num_vertices());

  std::vector<double> x(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x[2 * i] = X0[i].x;
    x[2 * i + 1] = X0[i].y;
  }
  Layout buffer(n);
  std::vector<Vec2> grad(n);
  auto evaluate = [&](std::span<const double> flat, std::span<double> flat_grad) {
    for (std::size_t i = 0; i < n; ++i) buffer[i] = {flat[2 * i], flat[2 * i + 1]};
    const double value = objective(buffer, grad);
    for (std::size_t i = 0; i < n; ++i) {
      flat_grad[2 * i] = grad[i].x;
      flat_grad[2 * i + 1] = grad[i].y;
    }
    return value;
  };

  Trace trace;
  const double f0 = objective.value(X0);
  if (!std::isfinite(f0)) throw NumericError("lbfgs_solve: non-finite energy at the initial layout");
  trace.records.push_back({0, f0, clock.elapsed_ms()});

  LbfgsOptions opt;
  opt.max_iter = sc.n_iter;
  opt.memory = sc.memory;
  opt.grad_tol = sc.tol.value_or(1e-6 * p.k);
  opt.armijo = sc.armijo;
  opt.max_backtracks = sc.max_backtracks;
  opt.initial_step = p.k;

  double last_value = f0;
  int last_recorded = 0;
  auto result = lbfgs_minimize(evaluate, std::move(x), opt, [&](int it, const std::vector<double>&, double fx) {
    last_value = fx;
    if (detail::should_record(it, sc)) {
      trace.records.push_back({it, fx, clock.elapsed_ms()});
      last_recorded = it;
    }
  });
  if (result.iterations > last_recorded) trace.records.push_back({result.iterations, last_value, clock.elapsed_ms()});

  trace.layout.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.layout[i] = {result.x[2 * i], result.x[2 * i + 1]};
  trace.termination = result.termination;
  trace.iterations = result.iterations;
  return trace;
}

}  // namespace frcn
