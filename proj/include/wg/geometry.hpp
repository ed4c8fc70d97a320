#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace wg {

using cplx = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Triangle with counter-clockwise vertex order (a, b, c).
struct Triangle {
  Vec2 a, b, c;

  double signed_area() const { return 0.5 * cross(b - a, c - a); }
  double area() const { return std::abs(signed_area()); }
  Vec2 centroid() const { return (1.0 / 3.0) * (a + b + c); }

  Vec2 vertex(int i) const { return i == 0 ? a : (i == 1 ? b : c); }

  // Edge i runs from vertex i to vertex (i+1)%3.
  Vec2 edge_start(int i) const { return vertex(i); }
  Vec2 edge_end(int i) const { return vertex((i + 1) % 3); }
  double edge_length(int i) const { return norm(edge_end(i) - edge_start(i)); }

  /// Outward unit normal of edge i (valid for CCW orientation).
  Vec2 outward_normal(int i) const {
    Vec2 t = edge_end(i) - edge_start(i);
    double len = norm(t);
    return {t.y / len, -t.x / len};
  }

  /// Longest edge length.
  double diameter() const {
    return std::max({edge_length(0), edge_length(1), edge_length(2)});
  }

  double circumradius() const {
    double la = edge_length(0), lb = edge_length(1), lc = edge_length(2);
    return la * lb * lc / (4.0 * area());
  }

  double inradius() const {
    double s = 0.5 * (edge_length(0) + edge_length(1) + edge_length(2));
    return area() / s;
  }
};

}  // namespace wg
