#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "frcn/graph.hpp"
#include "frcn/solvers.hpp"

namespace frcn {

// Input that cannot be opened or read.
class InputError : public Error {
 public:
  using Error::Error;
};

struct NamedGraph {
  std::string name;
  Graph graph;
  std::vector<int> groups;  // vertex -> group for generated grouped graphs, else empty
};

namespace detail {

inline std::string format_double(double v, int precision = 17) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", precision, v);
  return buf.data();
}

inline std::string format_fixed(double v, int decimals) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
  return buf.data();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace detail

// Reads a graph file, choosing Matrix Market when the banner is present and
// the edge-list format otherwise.
inline Graph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("cannot read input file '" + path.string() + "'");
  const std::string text = buffer.str();
  if (text.rfind("%%MatrixMarket", 0) == 0) return parse_matrix_market(text);
  return parse_edge_list(text);
}

// Generator specs: `cycle:N`, `btree:DEPTH`,
// `grouped:VERTICES,GROUPS,EDGES,W_IN,W_OUT[,SEED]`.
inline NamedGraph parse_generator_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("generator spec '" + spec + "' lacks ':'");
  const std::string kind = spec.substr(0, colon);
  const auto args = detail::split(spec.substr(colon + 1), ',');
  auto as_int = [&](std::size_t k) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(args.at(k), &used);
      if (used != args[k].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ParseError("generator spec '" + spec + "': bad integer argument " + std::to_string(k + 1));
    }
  };
  auto as_double = [&](std::size_t k) {
    try {
      std::size_t used = 0;
      const double v = std::stod(args.at(k), &used);
      if (used != args[k].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ParseError("generator spec '" + spec + "': bad numeric argument " + std::to_string(k + 1));
    }
  };
  try {
    if (kind == "cycle" && args.size() == 1) {
      const auto n = as_int(0);
      return {"cycle" + std::to_string(n), make_cycle(static_cast<int>(n)), {}};
    }
    if ((kind == "btree" || kind == "binary_tree") && args.size() == 1) {
      const auto d = as_int(0);
      return {"btree" + std::to_string(d), make_binary_tree(static_cast<int>(d)), {}};
    }
    if (kind == "grouped" && (args.size() == 5 || args.size() == 6)) {
      const auto seed = args.size() == 6 ? static_cast<std::uint64_t>(as_int(5)) : 1;
      auto gg = make_grouped_random(static_cast<int>(as_int(0)), static_cast<int>(as_int(1)),
                                    static_cast<std::size_t>(as_int(2)), as_double(3), as_double(4), seed);
      return {"grouped" + std::to_string(as_int(0)) + "_" + std::to_string(seed), std::move(gg.graph),
              std::move(gg.group)};
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError("generator spec '" + spec + "': " + e.what());
  }
  throw ParseError("unknown generator spec '" + spec + "' (expected cycle:N, btree:D or grouped:V,G,E,WIN,WOUT[,SEED])");
}

// ---------------------------------------------------------------------------
// CSV trace

// `iter,f,elapsed_ms`, or `iter,f` without timing. Energies use 17 significant
// digits so identical runs give identical bytes.
inline void write_trace_csv(std::ostream& out, const Trace& trace, bool timing = true) {
  out << (timing ? "iter,f,elapsed_ms\n" : "iter,f\n");
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << detail::format_double(r.energy);
    if (timing) out << ',' << detail::format_fixed(r.elapsed_ms, 3);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

struct Rgb {
  int r, g, b;
};

// Piecewise-linear perceptual ramp (viridis key colours) over [0, 1].
inline Rgb index_color(double t) {
  static constexpr std::array<Rgb, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto lo = std::min(static_cast<std::size_t>(t), stops.size() - 2);
  const double w = t - static_cast<double>(lo);
  auto mix = [w](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * w)); };
  return {mix(stops[lo].r, stops[lo + 1].r), mix(stops[lo].g, stops[lo + 1].g), mix(stops[lo].b, stops[lo + 1].b)};
}

inline std::string hex_color(const Rgb& c) {
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf.data();
}

}  // namespace detail

// SVG 1.1 drawing: one <line> per edge, one <circle> per vertex coloured by
// vertex index, viewBox fitted to the bounding box with a 5% margin. The y
// axis is flipped so the picture matches the usual math orientation.
inline void write_svg(std::ostream& out, const Graph& g, const Layout& X) {
  if (X.size() != static_cast<std::size_t>(g.num_vertices()))
    throw std::invalid_argument("write_svg: layout size does not match graph");
  double lx = 0.0, hx = 1.0, ly = 0.0, hy = 1.0;
  if (!X.empty()) {
    lx = hx = X[0].x;
    ly = hy = X[0].y;
    for (const auto& p : X) {
      lx = std::min(lx, p.x);
      hx = std::max(hx, p.x);
      ly = std::min(ly, p.y);
      hy = std::max(hy, p.y);
    }
  }
  double extent = std::max(hx - lx, hy - ly);
  if (!(extent > 0.0)) extent = 1.0;
  const double margin = 0.05 * extent;
  const double width = (hx - lx) + 2 * margin;
  const double height = (hy - ly) + 2 * margin;
  const double radius = 0.006 * extent;
  const double stroke = 0.0015 * extent;
  auto sx = [&](double x) { return detail::format_double(x - lx + margin, 8); };
  auto sy = [&](double y) { return detail::format_double(hy - y + margin, 8); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
      << std::max(1L, std::lround(800.0 * height / width)) << "\" viewBox=\"0 0 "
      << detail::format_double(width, 8) << ' ' << detail::format_double(height, 8) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << detail::format_double(width, 8) << "\" height=\""
      << detail::format_double(height, 8) << "\" fill=\"white\"/>\n"
      << "<g stroke=\"#9a9a9a\" stroke-width=\"" << detail::format_double(stroke, 6) << "\">\n";
  for (const auto& e : g.edges()) {
    out << "<line x1=\"" << sx(X[e.u].x) << "\" y1=\"" << sy(X[e.u].y) << "\" x2=\"" << sx(X[e.v].x) << "\" y2=\""
        << sy(X[e.v].y) << "\"/>\n";
  }
  out << "</g>\n<g stroke=\"none\">\n";
  const int n = g.num_vertices();
  for (int v = 0; v < n; ++v) {
    const double t = n > 1 ? static_cast<double>(v) / (n - 1) : 0.0;
    out << "<circle cx=\"" << sx(X[v].x) << "\" cy=\"" << sy(X[v].y) << "\" r=\""
        << detail::format_double(radius, 6) << "\" fill=\"" << detail::hex_color(detail::index_color(t)) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

// Writes `content` to a sibling temporary and renames it into place.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace frcn
