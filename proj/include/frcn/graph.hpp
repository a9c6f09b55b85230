#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frcn/common.hpp"

namespace frcn {

struct Edge {
  int u = 0;  // 0-based, u < v
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int vertex = 0;
  double weight = 1.0;
};

// Weighted undirected simple graph. Immutable once built; vertices are
// 0-based internally and 1-based in every file format.
class Graph {
 public:
  Graph() = default;

  // Validates and canonicalizes: every edge must satisfy 0 <= u < v < n after
  // orientation, weights must be positive and finite, pairs must be unique.
  static Graph from_edges(int n, std::vector<Edge> edges) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    for (auto& e : edges) {
      if (e.u == e.v) throw std::invalid_argument("graph: self-loop on vertex " + std::to_string(e.u + 1));
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u < 0 || e.v >= n) throw std::invalid_argument("graph: vertex index out of range");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw std::invalid_argument("graph: edge weight must be positive and finite");
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    for (std::size_t k = 1; k < edges.size(); ++k) {
      if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v)
        throw std::invalid_argument("graph: duplicate edge {" + std::to_string(edges[k].u + 1) + "," +
                                    std::to_string(edges[k].v + 1) + "}");
    }
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.adjacency_.assign(static_cast<std::size_t>(n), {});
    for (const auto& e : g.edges_) {
      g.adjacency_[e.u].push_back({e.v, e.weight});
      g.adjacency_[e.v].push_back({e.u, e.weight});
    }
    return g;
  }

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(int v) const { return adjacency_[v]; }
  std::size_t degree(int v) const { return adjacency_[v].size(); }

  // a_ij, zero for non-adjacent pairs. O(deg).
  double weight(int u, int v) const {
    for (const auto& nb : adjacency_[u])
      if (nb.vertex == v) return nb.weight;
    return 0.0;
  }

  // Same structure with every weight set to 1.
  Graph unweighted() const {
    auto es = edges_;
    for (auto& e : es) e.weight = 1.0;
    return from_edges(n_, std::move(es));
  }

  // Fraction of vertex pairs joined by an edge: 2|E| / (n(n-1)).
  double sparsity() const {
    if (n_ < 2) return 0.0;
    return 2.0 * static_cast<double>(edges_.size()) / (static_cast<double>(n_) * (n_ - 1));
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

struct ComponentPartition {
  std::vector<std::vector<int>> groups;  // each sorted ascending; groups ordered by smallest member
  std::vector<int> component_of;         // vertex -> group index

  std::size_t count() const { return groups.size(); }
};

// ---------------------------------------------------------------------------
// Weight normalization

// Symmetrizes a raw square weight table: a'_ij = (|a_ij| + |a_ji|) / 2.
// Zero entries (and the diagonal) produce no edge.
inline Graph normalize_weights(const std::vector<std::vector<double>>& table) {
  const auto n = table.size();
  for (const auto& row : table)
    if (row.size() != n) throw std::invalid_argument("normalize_weights: table is not square");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = 0.5 * (std::abs(table[i][j]) + std::abs(table[j][i]));
      if (w > 0.0) edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
    }
  }
  return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

namespace detail {

// Sparse accumulation of raw directed entries. Repeated entries of the same
// orientation are averaged; the two orientations are then symmetrized.
class RawWeights {
 public:
  void add(int row, int col, double value) {
    if (row == col) return;
    auto& slot = row < col ? table_[{row, col}].upper : table_[{col, row}].lower;
    slot.sum += std::abs(value);
    slot.count += 1;
  }

  Graph build(int n) const {
    std::vector<Edge> edges;
    for (const auto& [key, entry] : table_) {
      const double w = 0.5 * (entry.upper.mean() + entry.lower.mean());
      if (w > 0.0) edges.push_back({key.first, key.second, w});
    }
    return Graph::from_edges(n, std::move(edges));
  }

 private:
  struct Acc {
    double sum = 0.0;
    int count = 0;
    double mean() const { return count == 0 ? 0.0 : sum / count; }
  };
  struct Entry {
    Acc upper;
    Acc lower;
  };
  std::map<std::pair<int, int>, Entry> table_;
};

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrix Market

// Reads a `%%MatrixMarket matrix coordinate {real|integer|pattern}
// {general|symmetric|skew-symmetric}` stream. Off-diagonal entries become
// edges with weight |value| (1 for pattern), symmetrized by averaging the two
// orientations; diagonal entries are dropped.
inline Graph parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("matrix market: missing %%MatrixMarket banner");
  object = detail::lowercase(object);
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (object != "matrix" || format != "coordinate")
    throw ParseError("matrix market: only 'matrix coordinate' is supported");
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double")
    throw ParseError("matrix market: unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric" || symmetry == "skew-symmetric" || symmetry == "hermitian";
  if (!symmetric && symmetry != "general") throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line)) {
    if (detail::is_blank(line) || line[0] == '%') continue;
    break;
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz)) throw ParseError("matrix market: malformed size line");
  }
  if (rows <= 0 || cols <= 0 || nnz < 0) throw ParseError("matrix market: non-positive dimensions");
  if (rows != cols) throw ParseError("matrix market: adjacency matrix must be square");
  if (rows > std::numeric_limits<int>::max()) throw ParseError("matrix market: dimension too large");

  detail::RawWeights raw;
  long long seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    if (detail::is_blank(line) || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double value = 1.0;
    if (!(entry >> i >> j)) throw ParseError("matrix market: malformed entry '" + line + "'");
    if (!pattern && !(entry >> value)) throw ParseError("matrix market: missing value in '" + line + "'");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError("matrix market: index out of range in '" + line + "'");
    const int r = static_cast<int>(i - 1);
    const int c = static_cast<int>(j - 1);
    raw.add(r, c, value);
    if (symmetric) raw.add(c, r, value);
    ++seen;
  }
  if (seen < nnz) throw ParseError("matrix market: expected " + std::to_string(nnz) + " entries, got " + std::to_string(seen));

  Graph g = raw.build(static_cast<int>(rows));
  if (g.num_edges() == 0) throw ParseError("matrix market: zero edges after filtering");
  return g;
}

inline Graph parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

// ---------------------------------------------------------------------------
// Edge lists

// Lines of `i j [w]` with 1-based indices and `#` comments. An optional first
// line `n m` is taken as a header when exactly m edge lines follow and no
// index exceeds n; otherwise it is read as an edge.
inline Graph parse_edge_list(std::istream& in) {
  struct Row {
    std::vector<std::string> tokens;
    std::size_t line_no;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    Row row{{}, line_no};
    for (std::string tok; ss >> tok;) row.tokens.push_back(tok);
    if (!row.tokens.empty()) rows.push_back(std::move(row));
  }

  auto parse_index = [](const std::string& tok, std::size_t ln) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError("edge list line " + std::to_string(ln) + ": non-numeric token '" + tok + "'");
    if (v < 1 || v > std::numeric_limits<int>::max())
      throw ParseError("edge list line " + std::to_string(ln) + ": index must be >= 1");
    return static_cast<int>(v);
  };
  auto parse_weight = [](const std::string& tok, std::size_t ln) {
    std::size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError("edge list line " + std::to_string(ln) + ": non-numeric token '" + tok + "'");
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("edge list line " + std::to_string(ln) + ": weight must be positive");
    return w;
  };

  std::size_t first = 0;
  int header_n = -1;
  if (!rows.empty() && rows[0].tokens.size() == 2) {
    const int n = parse_index(rows[0].tokens[0], rows[0].line_no);
    long long m = 0;
    try {
      m = std::stoll(rows[0].tokens[1]);
    } catch (const std::exception&) {
      m = -1;
    }
    if (m >= 0 && static_cast<std::size_t>(m) == rows.size() - 1) {
      bool fits = true;
      for (std::size_t k = 1; k < rows.size() && fits; ++k)
        for (std::size_t t = 0; t < std::min<std::size_t>(2, rows[k].tokens.size()); ++t) {
          long long idx = 0;
          try {
            idx = std::stoll(rows[k].tokens[t]);
          } catch (const std::exception&) {
            idx = 0;
          }
          if (idx > n) fits = false;
        }
      if (fits) {
        header_n = n;
        first = 1;
      }
    }
  }

  std::vector<Edge> edges;
  int max_index = 0;
  for (std::size_t k = first; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.tokens.size() < 2 || row.tokens.size() > 3)
      throw ParseError("edge list line " + std::to_string(row.line_no) + ": expected 'i j [w]'");
    const int i = parse_index(row.tokens[0], row.line_no);
    const int j = parse_index(row.tokens[1], row.line_no);
    const double w = row.tokens.size() == 3 ? parse_weight(row.tokens[2], row.line_no) : 1.0;
    if (i == j) throw ParseError("edge list line " + std::to_string(row.line_no) + ": self-loop on vertex " + std::to_string(i));
    max_index = std::max({max_index, i, j});
    edges.push_back({i - 1, j - 1, w});
  }
  const int n = header_n >= 0 ? header_n : max_index;
  try {
    return Graph::from_edges(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

// Writes `n m` followed by one `i j w` line per edge (1-based, full precision).
inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << ' ' << e.weight << '\n';
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Structure

inline ComponentPartition connected_components(const Graph& g) {
  const int n = g.num_vertices();
  ComponentPartition part;
  part.component_of.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (part.component_of[s] != -1) continue;
    const int id = static_cast<int>(part.groups.size());
    part.groups.emplace_back();
    auto& group = part.groups.back();
    part.component_of[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      group.push_back(v);
      for (const auto& nb : g.neighbors(v)) {
        if (part.component_of[nb.vertex] == -1) {
          part.component_of[nb.vertex] = id;
          stack.push_back(nb.vertex);
        }
      }
    }
    std::sort(group.begin(), group.end());
  }
  return part;
}

// Non-adjacent pairs at hop distance exactly 2, as sorted (i, j) with i < j.
inline std::vector<std::pair<int, int>> distance_two_pairs(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    mark[i] = i;
    for (const auto& nb : g.neighbors(i)) mark[nb.vertex] = i;
    std::vector<int> found;
    for (const auto& nb : g.neighbors(i)) {
      for (const auto& nb2 : g.neighbors(nb.vertex)) {
        const int j = nb2.vertex;
        if (mark[j] == i) continue;
        mark[j] = i;
        if (j > i) found.push_back(j);
      }
    }
    std::sort(found.begin(), found.end());
    for (int j : found) pairs.emplace_back(i, j);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Generators

inline Graph make_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: need at least 3 vertices");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return Graph::from_edges(n, std::move(edges));
}

// Perfect binary tree with 2^(depth+1) - 1 vertices in heap order.
inline Graph make_binary_tree(int depth) {
  if (depth < 0 || depth > 24) throw std::invalid_argument("binary_tree: depth must be in [0, 24]");
  const int n = (1 << (depth + 1)) - 1;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (int child = 1; child < n; ++child) edges.push_back({(child - 1) / 2, child, 1.0});
  return Graph::from_edges(n, std::move(edges));
}

struct GroupedGraph {
  Graph graph;
  std::vector<int> group;  // vertex -> group index
};

// Random weighted graph whose vertices are split into contiguous groups of
// near-equal size (the first n % groups groups get one extra vertex).
// edge_count distinct pairs are drawn by rejection sampling; same-group pairs
// get weight w_in, cross-group pairs w_out.
inline GroupedGraph make_grouped_random(int vertices, int groups, std::size_t edge_count, double w_in, double w_out,
                                        std::uint64_t seed) {
  if (vertices < 2 || groups < 1 || groups > vertices)
    throw std::invalid_argument("grouped_random: need vertices >= 2 and 1 <= groups <= vertices");
  if (!(w_in > 0.0) || !(w_out > 0.0)) throw std::invalid_argument("grouped_random: weights must be positive");
  const auto max_edges = static_cast<std::size_t>(vertices) * static_cast<std::size_t>(vertices - 1) / 2;
  if (edge_count > max_edges) throw std::invalid_argument("grouped_random: edge_count exceeds n(n-1)/2");

  GroupedGraph out;
  out.group.resize(static_cast<std::size_t>(vertices));
  const int base = vertices / groups;
  const int extra = vertices % groups;
  int v = 0;
  for (int gi = 0; gi < groups; ++gi) {
    const int size = base + (gi < extra ? 1 : 0);
    for (int k = 0; k < size; ++k) out.group[v++] = gi;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, vertices - 1);
  std::set<std::pair<int, int>> chosen;
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  while (edges.size() < edge_count) {
    int a = pick(rng);
    int b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!chosen.insert({a, b}).second) continue;
    edges.push_back({a, b, out.group[a] == out.group[b] ? w_in : w_out});
  }
  out.graph = Graph::from_edges(vertices, std::move(edges));
  return out;
}

}  // namespace frcn
