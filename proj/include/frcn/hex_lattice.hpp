#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "frcn/common.hpp"

namespace frcn {

// Axial coordinates on the unit hexagonal lattice; the Euclidean image is
// (q + r/2, r * sqrt(3)/2) and distinct points are at least 1 apart.
struct HexCoord {
  int q = 0;
  int r = 0;

  friend constexpr bool operator==(const HexCoord&, const HexCoord&) = default;
  friend constexpr HexCoord operator+(const HexCoord& a, const HexCoord& b) { return {a.q + b.q, a.r + b.r}; }
  friend constexpr HexCoord operator-(const HexCoord& a, const HexCoord& b) { return {a.q - b.q, a.r - b.r}; }
};

struct HexCoordHash {
  std::size_t operator()(const HexCoord& c) const noexcept {
    const auto packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.q)) << 32) |
                        static_cast<std::uint32_t>(c.r);
    return std::hash<std::uint64_t>{}(packed * 0x9E3779B97F4A7C15ULL);
  }
};

inline constexpr double kSqrt3Over2 = 0.86602540378443864676;

inline Vec2 to_euclidean(const HexCoord& c) {
  return {static_cast<double>(c.q) + 0.5 * static_cast<double>(c.r), kSqrt3Over2 * static_cast<double>(c.r)};
}

// Hex (cube) distance: number of lattice steps between two cells.
inline int hex_distance(const HexCoord& a, const HexCoord& b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

// Nearest lattice point. Converts to fractional cube coordinates
// (x = q, z = r, y = -x - z), rounds each, and recomputes the component with
// the largest rounding residual so that x + y + z = 0 holds.
inline HexCoord round_to_hex(const Vec2& p) {
  if (!is_finite(p)) throw std::invalid_argument("round_to_hex: non-finite point");
  const double rf = p.y / kSqrt3Over2;
  const double qf = p.x - 0.5 * rf;
  const double xf = qf;
  const double zf = rf;
  const double yf = -xf - zf;
  double x = std::round(xf);
  double y = std::round(yf);
  double z = std::round(zf);
  const double dx = std::abs(x - xf);
  const double dy = std::abs(y - yf);
  const double dz = std::abs(z - zf);
  if (dx > dy && dx > dz) {
    x = -y - z;
  } else if (dy > dz) {
    y = -x - z;
  } else {
    z = -x - y;
  }
  return {static_cast<int>(x), static_cast<int>(z)};
}

inline std::size_t hex_disk_size(int radius) {
  const auto r = static_cast<std::size_t>(radius);
  return 1 + 3 * r * (r + 1);
}

// All cells within hex distance `radius` of the origin, in (r, q) order.
inline std::vector<HexCoord> hex_disk(int radius) {
  std::vector<HexCoord> cells;
  cells.reserve(hex_disk_size(radius));
  for (int r = -radius; r <= radius; ++r) {
    const int q_lo = std::max(-radius, -r - radius);
    const int q_hi = std::min(radius, -r + radius);
    for (int q = q_lo; q <= q_hi; ++q) cells.push_back({q, r});
  }
  return cells;
}

// n distinct cells drawn uniformly without replacement from the smallest
// origin-centred hex disk holding at least n cells.
template <class Rng>
std::vector<HexCoord> initial_sample(std::size_t n, Rng& rng) {
  if (n == 0) return {};
  int radius = 0;
  while (hex_disk_size(radius) < n) ++radius;
  auto cells = hex_disk(radius);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
    std::swap(cells[i], cells[pick(rng)]);
  }
  cells.resize(n);
  return cells;
}

// Bijection between placed vertices and occupied lattice cells.
class Occupancy {
 public:
  explicit Occupancy(std::size_t n) : cell_of_(n), placed_(n, false) { by_cell_.reserve(2 * n); }

  static Occupancy from_cells(const std::vector<HexCoord>& cells) {
    Occupancy occ(cells.size());
    for (std::size_t v = 0; v < cells.size(); ++v) occ.place(static_cast<int>(v), cells[v]);
    return occ;
  }

  std::size_t size() const { return cell_of_.size(); }
  bool is_placed(int v) const { return placed_[v]; }
  const HexCoord& cell_of(int v) const { return cell_of_[v]; }
  const std::vector<HexCoord>& cells() const { return cell_of_; }

  std::optional<int> occupant(const HexCoord& c) const {
    auto it = by_cell_.find(c);
    if (it == by_cell_.end()) return std::nullopt;
    return it->second;
  }

  // Places an unplaced vertex on a free cell.
  void place(int v, const HexCoord& c) {
    if (placed_[v]) throw std::logic_error("Occupancy::place: vertex already placed");
    if (by_cell_.contains(c)) throw std::logic_error("Occupancy::place: cell already occupied");
    cell_of_[v] = c;
    placed_[v] = true;
    by_cell_.emplace(c, v);
  }

  // Moves v to target; an occupant j of target takes v's old cell.
  void move_or_swap(int v, const HexCoord& target) {
    if (v < 0 || static_cast<std::size_t>(v) >= size() || !placed_[v])
      throw std::logic_error("Occupancy::move_or_swap: vertex is not placed");
    const HexCoord old = cell_of_[v];
    if (old == target) return;
    auto it = by_cell_.find(target);
    if (it != by_cell_.end()) {
      const int other = it->second;
      it->second = v;
      cell_of_[other] = old;
      by_cell_[old] = other;
    } else {
      by_cell_.erase(old);
      by_cell_.emplace(target, v);
    }
    cell_of_[v] = target;
  }

  // Checks that the two maps are mutually inverse over placed vertices.
  bool consistent() const {
    std::size_t placed = 0;
    for (std::size_t v = 0; v < size(); ++v) {
      if (!placed_[v]) continue;
      ++placed;
      auto it = by_cell_.find(cell_of_[v]);
      if (it == by_cell_.end() || it->second != static_cast<int>(v)) return false;
    }
    return placed == by_cell_.size();
  }

  // Lazy Euclidean view usable wherever a PositionSource is expected.
  struct Positions {
    const Occupancy* occ;
    Vec2 operator[](int v) const { return to_euclidean(occ->cell_of_[v]); }
  };
  Positions positions() const { return {this}; }

  Layout to_layout() const {
    Layout out(size());
    for (std::size_t v = 0; v < size(); ++v) out[v] = to_euclidean(cell_of_[v]);
    return out;
  }

 private:
  std::vector<HexCoord> cell_of_;
  std::vector<bool> placed_;
  std::unordered_map<HexCoord, int, HexCoordHash> by_cell_;
};

}  // namespace frcn
