#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "frcn/cn_placement.hpp"
#include "frcn/energy.hpp"
#include "frcn/sa_placement.hpp"
#include "frcn/solvers.hpp"

namespace frcn {

enum class InitKind { random, sa, cn };
enum class SolverKind { fr, lbfgs };

inline std::string_view to_string(InitKind k) {
  switch (k) {
    case InitKind::random: return "random";
    case InitKind::sa: return "sa";
    case InitKind::cn: return "cn";
  }
  return "?";
}

inline std::string_view to_string(SolverKind k) { return k == SolverKind::fr ? "fr" : "lbfgs"; }

inline InitKind parse_init(std::string_view s) {
  if (s == "random") return InitKind::random;
  if (s == "sa") return InitKind::sa;
  if (s == "cn") return InitKind::cn;
  throw ParseError("unknown init '" + std::string(s) + "' (expected random|sa|cn)");
}

inline SolverKind parse_solver(std::string_view s) {
  if (s == "fr") return SolverKind::fr;
  if (s == "lbfgs") return SolverKind::lbfgs;
  throw ParseError("unknown solver '" + std::string(s) + "' (expected fr|lbfgs)");
}

// Solver iteration budget when none is given: 50 after a random start, 45
// after a preprocessing step that costs about as much as a few iterations.
inline int default_solver_iterations(InitKind init) { return init == InitKind::random ? 50 : 45; }

// Uniform sample of the unit square.
inline Layout random_initial_placement(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Layout X(static_cast<std::size_t>(n));
  for (auto& x : X) {
    x.x = unit(rng);
    x.y = unit(rng);
  }
  return X;
}

struct RunConfig {
  std::optional<double> k;  // unset: 1/sqrt(n)
  double eps_r = ForceParams::kDefaultEpsR;
  CnParams cn;
  SaParams sa;
  SolverConfig solver;
  std::optional<int> iters;  // unset: default_solver_iterations(init)

  ForceParams force_params(const Graph& g) const {
    return {k.value_or(ForceParams::default_k(std::max(1, g.num_vertices()))), eps_r};
  }
};

struct RunResult {
  InitKind init = InitKind::random;
  SolverKind solver = SolverKind::fr;
  std::uint64_t seed = 0;
  Layout initial;
  double init_ms = 0.0;
  Trace trace;
};

inline Layout initial_placement(const Graph& g, InitKind init, std::uint64_t seed, const ForceParams& p,
                                const RunConfig& cfg) {
  switch (init) {
    case InitKind::random: return random_initial_placement(g.num_vertices(), seed);
    case InitKind::sa: {
      SaParams sp = cfg.sa;
      sp.seed = seed;
      return sa_initial_placement(g, sp);
    }
    case InitKind::cn: {
      CnParams cp = cfg.cn;
      cp.seed = seed;
      return cn_initial_placement(g, p, cp);
    }
  }
  throw std::logic_error("initial_placement: unreachable");
}

inline RunResult run_once(const Graph& g, InitKind init, SolverKind solver, std::uint64_t seed, const RunConfig& cfg) {
  const ForceParams p = cfg.force_params(g);
  RunResult out;
  out.init = init;
  out.solver = solver;
  out.seed = seed;
  const detail::Stopwatch clock;
  out.initial = initial_placement(g, init, seed, p, cfg);
  out.init_ms = clock.elapsed_ms();
  SolverConfig sc = cfg.solver;
  sc.n_iter = cfg.iters.value_or(default_solver_iterations(init));
  out.trace = solver == SolverKind::fr ? fr_solve(g, out.initial, p, sc) : lbfgs_solve(g, out.initial, p, sc);
  return out;
}

// One run per seed of the (init, solver) combination.
inline std::vector<RunResult> pipeline(const Graph& g, InitKind init, SolverKind solver,
                                       const std::vector<std::uint64_t>& seeds, const RunConfig& cfg) {
  std::vector<RunResult> runs;
  runs.reserve(seeds.size());
  for (auto seed : seeds) runs.push_back(run_once(g, init, solver, seed, cfg));
  return runs;
}

// Mean inter-group pair distance over mean intra-group pair distance.
inline double group_separation_ratio(const Layout& X, const std::vector<int>& group) {
  double inter = 0.0, intra = 0.0;
  std::size_t n_inter = 0, n_intra = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = i + 1; j < X.size(); ++j) {
      const double d = norm(X[i] - X[j]);
      if (group[i] == group[j]) {
        intra += d;
        ++n_intra;
      } else {
        inter += d;
        ++n_inter;
      }
    }
  }
  if (n_inter == 0 || n_intra == 0 || intra == 0.0) throw std::invalid_argument("group_separation_ratio: degenerate grouping");
  return (inter / static_cast<double>(n_inter)) / (intra / static_cast<double>(n_intra));
}

}  // namespace frcn
