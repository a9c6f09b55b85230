// frcn: force-directed layouts with coordinate-Newton initial placement.
//
//   frcn layout --gen cycle:300 --init cn --solver lbfgs --iters 45 --seed 1
//   frcn bench  --gen cycle:300 --gen btree:9 --seeds 1-10 --out summary.csv
//   frcn fetch  jagmesh1 HB/dwt_1005

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "frcn/frcn.hpp"
#include "frcn/suitesparse.hpp"

namespace fs = std::filesystem;
using namespace frcn;

namespace {

enum ExitCode { kOk = 0, kBadFlags = 1, kBadInput = 2, kNumericFailure = 3 };

struct ModelFlags {
  std::optional<double> k;
  double eps_r = ForceParams::kDefaultEpsR;
  double cn_t0 = 1.5;
  std::optional<std::uint64_t> cn_iters;
  std::optional<std::uint64_t> sa_iters;
  std::optional<double> fr_t0;
  std::optional<double> tol;
  std::optional<int> iters;
  int trace_every = 1;
  int memory = 10;

  void attach(CLI::App* app) {
    app->add_option("--k", k, "Spring constant (default 1/sqrt(n))")->check(CLI::PositiveNumber);
    app->add_option("--eps-r", eps_r, "Repulsion guard, in units of k")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--t0", cn_t0, "Coordinate-Newton initial temperature")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--cn-iters", cn_iters, "Coordinate-Newton iterations (default ceil(2|V|^3/|E|))");
    app->add_option("--sa-iters", sa_iters, "Simulated-annealing iterations (default: same as --cn-iters)");
    app->add_option("--fr-t0", fr_t0, "FR initial temperature (default 0.1 x layout extent)")
        ->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Convergence tolerance (default 1e-6 k)")->check(CLI::NonNegativeNumber);
    app->add_option("--iters", iters, "Solver iterations (default 50 for random init, 45 otherwise)")
        ->check(CLI::PositiveNumber);
    app->add_option("--trace-every", trace_every, "Record energy every N iterations")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--memory", memory, "L-BFGS history length")->check(CLI::PositiveNumber)->capture_default_str();
  }

  RunConfig config() const {
    RunConfig cfg;
    cfg.k = k;
    cfg.eps_r = eps_r;
    cfg.cn.t0 = cn_t0;
    cfg.cn.n_iter = cn_iters;
    cfg.sa.n_iter = sa_iters ? sa_iters : cn_iters;
    cfg.solver.t0 = fr_t0;
    cfg.solver.tol = tol;
    cfg.solver.trace_every = trace_every;
    cfg.solver.memory = memory;
    cfg.iters = iters;
    return cfg;
  }
};

// "1-10", "1,2,5", "3" or any comma-separated mix.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw ParseError("empty seed range '" + part + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw ParseError("empty seed list");
  return seeds;
}

NamedGraph load_input(const std::string& kind, const std::string& value) {
  if (kind == "gen") return parse_generator_spec(value);
  if (kind == "input") return {fs::path(value).stem().string(), load_graph_file(value), {}};
  const auto cfg = SuiteSparseConfig::from_environment();
  const auto slash = value.find('/');
  return {slash == std::string::npos ? value : value.substr(slash + 1), fetch_suitesparse(value, cfg), {}};
}

int run_layout(const std::string& gen, const std::string& input, const std::string& suitesparse,
               const std::string& init_name, const std::string& solver_name, std::uint64_t seed,
               const ModelFlags& model, std::string svg_path, std::string trace_path, const std::string& out_dir,
               bool no_timing) {
  const int sources = !gen.empty() + !input.empty() + !suitesparse.empty();
  if (sources != 1) {
    std::cerr << "layout: give exactly one of --gen, --input, --suitesparse\n";
    return kBadFlags;
  }
  InitKind init;
  SolverKind solver;
  try {
    init = parse_init(init_name);
    solver = parse_solver(solver_name);
  } catch (const ParseError& e) {
    std::cerr << "layout: " << e.what() << '\n';
    return kBadFlags;
  }

  NamedGraph named;
  try {
    named = !gen.empty() ? load_input("gen", gen) : !input.empty() ? load_input("input", input)
                                                                   : load_input("suitesparse", suitesparse);
  } catch (const std::exception& e) {
    std::cerr << "layout: " << e.what() << '\n';
    return !gen.empty() ? kBadFlags : kBadInput;
  }

  RunResult run;
  try {
    run = run_once(named.graph, init, solver, seed, model.config());
  } catch (const NumericError& e) {
    std::cerr << "layout: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "layout: " << e.what() << '\n';
    return kBadFlags;
  }

  if (svg_path.empty()) svg_path = (fs::path(out_dir) / "layout.svg").string();
  if (trace_path.empty()) trace_path = (fs::path(out_dir) / "trace.csv").string();
  std::ostringstream svg, csv;
  write_svg(svg, named.graph, run.trace.layout);
  write_trace_csv(csv, run.trace, !no_timing);
  try {
    if (!out_dir.empty()) fs::create_directories(out_dir);
    write_file_atomically(svg_path, svg.str());
    write_file_atomically(trace_path, csv.str());
  } catch (const std::exception& e) {
    std::cerr << "layout: " << e.what() << '\n';
    return kBadInput;
  }
  std::cout << named.name << ": n=" << named.graph.num_vertices() << " |E|=" << named.graph.num_edges()
            << " init=" << to_string(init) << " solver=" << to_string(solver) << " iterations=" << run.trace.iterations
            << " (" << to_string(run.trace.termination) << ")\n"
            << "f: " << detail::format_double(run.trace.initial_energy(), 10) << " -> "
            << detail::format_double(run.trace.final_energy(), 10) << '\n'
            << "wrote " << svg_path << " and " << trace_path << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Force-directed graph layout with coordinate-Newton initial placement"};
  app.require_subcommand(1);

  // layout
  auto* layout = app.add_subcommand("layout", "Lay out one graph and write an SVG drawing and an energy trace");
  std::string gen, input, suitesparse, init_name = "cn", solver_name = "lbfgs", svg_path, trace_path, out_dir = ".";
  std::uint64_t seed = 1;
  bool no_timing = false;
  ModelFlags layout_model;
  layout->add_option("--gen", gen, "Generated graph: cycle:N, btree:D, grouped:V,G,E,WIN,WOUT[,SEED]");
  layout->add_option("--input", input, "Matrix Market (.mtx) or edge-list file");
  layout->add_option("--suitesparse", suitesparse, "SuiteSparse matrix, Group/name or a known name");
  layout->add_option("--init", init_name, "Initial placement: random|sa|cn")->capture_default_str();
  layout->add_option("--solver", solver_name, "Solver: fr|lbfgs")->capture_default_str();
  layout->add_option("--seed", seed, "Random seed")->capture_default_str();
  layout->add_option("--svg", svg_path, "SVG output path (default <out>/layout.svg)");
  layout->add_option("--trace", trace_path, "Trace CSV path (default <out>/trace.csv)");
  layout->add_option("--out", out_dir, "Output directory")->capture_default_str();
  layout->add_flag("--no-timing", no_timing, "Omit the elapsed_ms column");
  layout_model.attach(layout);

  // bench
  auto* bench = app.add_subcommand("bench", "Compare initial placements and solvers over seeds");
  std::vector<std::string> bench_gen, bench_input, bench_ss, bench_inits{"random", "cn"}, bench_solvers{"fr", "lbfgs"};
  std::string bench_seeds = "1-10", bench_out = "bench.csv";
  unsigned jobs = 1;
  bool bench_no_timing = false;
  ModelFlags bench_model;
  bench->add_option("--gen", bench_gen, "Generated graph (repeatable)");
  bench->add_option("--input", bench_input, "Graph file (repeatable)");
  bench->add_option("--suitesparse", bench_ss, "SuiteSparse matrix (repeatable)");
  bench->add_option("--init", bench_inits, "Initial placements")->delimiter(',')->capture_default_str();
  bench->add_option("--solver", bench_solvers, "Solvers")->delimiter(',')->capture_default_str();
  bench->add_option("--seeds", bench_seeds, "Seeds, e.g. 1-10 or 1,4,9")->capture_default_str();
  bench->add_option("--out", bench_out, "Summary CSV path")->capture_default_str();
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--no-timing", bench_no_timing, "Omit timing columns");
  bench_model.attach(bench);

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download SuiteSparse matrices into the cache and print their sizes");
  std::vector<std::string> names;
  fetch->add_option("names", names, "Matrices: Group/name or a known name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  if (layout->parsed()) {
    return run_layout(gen, input, suitesparse, init_name, solver_name, seed, layout_model, svg_path, trace_path,
                      out_dir, no_timing);
  }

  if (bench->parsed()) {
    BenchSpec spec;
    try {
      spec.seeds = parse_seeds(bench_seeds);
      spec.inits.clear();
      for (const auto& s : bench_inits) spec.inits.push_back(parse_init(s));
      spec.solvers.clear();
      for (const auto& s : bench_solvers) spec.solvers.push_back(parse_solver(s));
      for (const auto& g : bench_gen) spec.graphs.push_back(parse_generator_spec(g));
    } catch (const ParseError& e) {
      std::cerr << "bench: " << e.what() << '\n';
      return kBadFlags;
    }
    try {
      for (const auto& f : bench_input) spec.graphs.push_back(load_input("input", f));
      for (const auto& s : bench_ss) spec.graphs.push_back(load_input("suitesparse", s));
    } catch (const std::exception& e) {
      std::cerr << "bench: " << e.what() << '\n';
      return kBadInput;
    }
    if (spec.graphs.empty()) {
      std::cerr << "bench: give at least one --gen, --input or --suitesparse\n";
      return kBadFlags;
    }
    spec.config = bench_model.config();
    spec.jobs = jobs;
    const auto rows = run_bench(spec);
    std::ostringstream csv;
    write_bench_csv(csv, rows, !bench_no_timing);
    try {
      write_file_atomically(bench_out, csv.str());
    } catch (const std::exception& e) {
      std::cerr << "bench: " << e.what() << '\n';
      return kBadInput;
    }
    std::cout << csv.str();
    return kOk;
  }

  // fetch
  const auto cfg = SuiteSparseConfig::from_environment();
  int status = kOk;
  for (const auto& name : names) {
    try {
      const auto g = fetch_suitesparse(name, cfg);
      std::cout << name << ": n=" << g.num_vertices() << " |E|=" << g.num_edges()
                << " sparsity=" << detail::format_fixed(100.0 * g.sparsity(), 3) << "%\n";
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << '\n';
      status = kBadInput;
    }
  }
  return status;
}
