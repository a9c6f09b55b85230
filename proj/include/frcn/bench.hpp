#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "frcn/io.hpp"
#include "frcn/pipeline.hpp"

namespace frcn {

// One summary row per (graph, init, solver) over all seeds.
struct BenchRow {
  std::string graph;
  int vertices = 0;
  std::size_t edges = 0;
  InitKind init = InitKind::random;
  SolverKind solver = SolverKind::fr;
  std::size_t seeds = 0;
  double mean_f = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
  // Mean over seeds of f(this init) - f(random init), same solver and seed.
  std::optional<double> mean_diff_vs_random;
  double mean_init_ms = 0.0;
  double mean_solve_ms = 0.0;
  std::string status = "ok";
};

struct BenchSpec {
  std::vector<NamedGraph> graphs;
  std::vector<InitKind> inits{InitKind::random, InitKind::cn};
  std::vector<SolverKind> solvers{SolverKind::fr, SolverKind::lbfgs};
  std::vector<std::uint64_t> seeds{1};
  RunConfig config;
  unsigned jobs = 1;
};

// Runs every (graph, init, solver, seed) cell, optionally on a worker pool.
// A failing run marks its row's status instead of aborting the batch. Rows
// come back sorted by (graph, init, solver) whatever the completion order.
inline std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  if (spec.graphs.empty() || spec.seeds.empty()) throw std::invalid_argument("bench: need >= 1 graph and >= 1 seed");
  struct Cell {
    std::size_t graph, init, solver, seed;
  };
  struct Outcome {
    std::optional<double> final_f;
    double init_ms = 0.0, solve_ms = 0.0;
    std::string error;
  };
  std::vector<Cell> cells;
  for (std::size_t g = 0; g < spec.graphs.size(); ++g)
    for (std::size_t i = 0; i < spec.inits.size(); ++i)
      for (std::size_t s = 0; s < spec.solvers.size(); ++s)
        for (std::size_t k = 0; k < spec.seeds.size(); ++k) cells.push_back({g, i, s, k});

  std::vector<Outcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto& cell = cells[c];
      try {
        const auto run = run_once(spec.graphs[cell.graph].graph, spec.inits[cell.init], spec.solvers[cell.solver],
                                  spec.seeds[cell.seed], spec.config);
        outcomes[c].final_f = run.trace.final_energy();
        outcomes[c].init_ms = run.init_ms;
        outcomes[c].solve_ms = run.trace.records.back().elapsed_ms;
      } catch (const std::exception& e) {
        outcomes[c].error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  auto outcome_of = [&](std::size_t g, std::size_t i, std::size_t s, std::size_t k) -> const Outcome& {
    const std::size_t per_graph = spec.inits.size() * spec.solvers.size() * spec.seeds.size();
    return outcomes[g * per_graph + (i * spec.solvers.size() + s) * spec.seeds.size() + k];
  };
  const auto random_pos = std::find(spec.inits.begin(), spec.inits.end(), InitKind::random);

  std::vector<BenchRow> rows;
  for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
    for (std::size_t i = 0; i < spec.inits.size(); ++i) {
      for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
        BenchRow row;
        row.graph = spec.graphs[g].name;
        row.vertices = spec.graphs[g].graph.num_vertices();
        row.edges = spec.graphs[g].graph.num_edges();
        row.init = spec.inits[i];
        row.solver = spec.solvers[s];
        row.seeds = spec.seeds.size();
        double sum = 0.0, diff = 0.0;
        std::size_t ok = 0, paired = 0;
        row.min_f = kInfinity;
        row.max_f = -kInfinity;
        for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
          const auto& o = outcome_of(g, i, s, k);
          if (!o.final_f) {
            if (row.status == "ok") row.status = "error: " + o.error;
            continue;
          }
          ++ok;
          sum += *o.final_f;
          row.min_f = std::min(row.min_f, *o.final_f);
          row.max_f = std::max(row.max_f, *o.final_f);
          row.mean_init_ms += o.init_ms;
          row.mean_solve_ms += o.solve_ms;
          if (random_pos != spec.inits.end() && spec.inits[i] != InitKind::random) {
            const auto& base = outcome_of(g, static_cast<std::size_t>(random_pos - spec.inits.begin()), s, k);
            if (base.final_f) {
              diff += *o.final_f - *base.final_f;
              ++paired;
            }
          }
        }
        if (ok > 0) {
          row.mean_f = sum / static_cast<double>(ok);
          row.mean_init_ms /= static_cast<double>(ok);
          row.mean_solve_ms /= static_cast<double>(ok);
        } else {
          row.min_f = row.max_f = row.mean_f = kInfinity;
        }
        if (paired > 0) row.mean_diff_vs_random = diff / static_cast<double>(paired);
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tuple(a.graph, static_cast<int>(a.init), static_cast<int>(a.solver)) <
           std::tuple(b.graph, static_cast<int>(b.init), static_cast<int>(b.solver));
  });
  return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool timing = true) {
  out << "graph,n,edges,init,solver,seeds,mean_f,min_f,max_f,mean_diff_vs_random";
  if (timing) out << ",mean_init_ms,mean_solve_ms";
  out << ",status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.graph << ',' << r.vertices << ',' << r.edges << ',' << to_string(r.init) << ',' << to_string(r.solver)
        << ',' << r.seeds << ',' << detail::format_double(r.mean_f) << ',' << detail::format_double(r.min_f) << ','
        << detail::format_double(r.max_f) << ','
        << (r.mean_diff_vs_random ? detail::format_double(*r.mean_diff_vs_random) : std::string());
    if (timing) out << ',' << detail::format_fixed(r.mean_init_ms, 3) << ',' << detail::format_fixed(r.mean_solve_ms, 3);
    out << ',' << status << '\n';
  }
}

}  // namespace frcn
