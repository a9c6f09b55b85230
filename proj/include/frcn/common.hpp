#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace frcn {

// Plain 2-D vector. Positions, gradients and displacements all use it.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline bool is_finite(const Vec2& a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static constexpr Mat2 identity(double s = 1.0) { return {s, 0.0, s}; }
  static constexpr Mat2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

  constexpr Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }
  friend constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend constexpr Mat2 operator*(double s, const Mat2& a) { return {s * a.xx, s * a.xy, s * a.yy}; }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;

  constexpr double trace() const { return xx + yy; }
  constexpr double det() const { return xx * yy - xy * xy; }

  double min_eigenvalue() const {
    const double mean = 0.5 * (xx + yy);
    return mean - std::hypot(0.5 * (xx - yy), xy);
  }
  double max_eigenvalue() const {
    const double mean = 0.5 * (xx + yy);
    return mean + std::hypot(0.5 * (xx - yy), xy);
  }

  // Solves M z = b by Cramer's rule; caller guarantees det != 0.
  Vec2 solve(const Vec2& b) const {
    const double d = det();
    return {(yy * b.x - xy * b.y) / d, (xx * b.y - xy * b.x) / d};
  }

  Vec2 operator*(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

// Per-vertex 2-D positions, indexed by internal (0-based) vertex id.
using Layout = std::vector<Vec2>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (Matrix Market, edge lists, CLI specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Non-finite arithmetic or an ill-posed numeric request.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace frcn
