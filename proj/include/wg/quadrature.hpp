#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

/// Quadrature on the reference triangle (0,0)-(1,0)-(0,1); weights sum to
/// the reference area 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Quadrature on [-1, 1]; weights sum to 2.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline EdgeRule gauss_legendre(int n) {
  EdgeRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.points[i] = -x;
    rule.weights[i] = w;
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

constexpr int max_edge_exactness = 41;

/// Gauss-Legendre rule on [-1,1] with the requested degree of exactness.
inline EdgeRule edge_quadrature(int degree_of_exactness) {
  if (degree_of_exactness < 0 || degree_of_exactness > max_edge_exactness)
    throw std::invalid_argument("edge_quadrature: unsupported exactness degree");
  int n = (degree_of_exactness + 2) / 2;  // 2n-1 >= degree
  if (n < 1) n = 1;
  return detail::gauss_legendre(n);
}

constexpr int max_triangle_exactness = 20;

/// Symmetric rules up to degree 5 (including the classic 7-point rule);
/// higher degrees use a collapsed Gauss product rule, exact for the
/// requested total degree.
inline TriangleRule triangle_quadrature(int degree_of_exactness) {
  if (degree_of_exactness < 0 || degree_of_exactness > max_triangle_exactness)
    throw std::invalid_argument(
        "triangle_quadrature: unsupported exactness degree");
  TriangleRule rule;
  auto push = [&rule](double x, double y, double w) {
    rule.points.push_back({x, y});
    rule.weights.push_back(0.5 * w);  // normalized weights sum to 1
  };
  if (degree_of_exactness <= 1) {
    rule.exactness = 1;
    push(1.0 / 3.0, 1.0 / 3.0, 1.0);
  } else if (degree_of_exactness == 2) {
    rule.exactness = 2;
    push(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0);
    push(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
    push(1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0);
  } else if (degree_of_exactness <= 4) {
    rule.exactness = 4;
    const double b1 = 0.445948490915965;
    const double w1 = 0.223381589678011;
    const double b2 = 0.091576213509771;
    const double w2 = 0.109951743655322;
    push(1.0 - 2.0 * b1, b1, w1);
    push(b1, 1.0 - 2.0 * b1, w1);
    push(b1, b1, w1);
    push(1.0 - 2.0 * b2, b2, w2);
    push(b2, 1.0 - 2.0 * b2, w2);
    push(b2, b2, w2);
  } else if (degree_of_exactness == 5) {
    rule.exactness = 5;
    const double s15 = std::sqrt(15.0);
    const double b1 = (6.0 + s15) / 21.0;
    const double w1 = (155.0 + s15) / 1200.0;
    const double b2 = (6.0 - s15) / 21.0;
    const double w2 = (155.0 - s15) / 1200.0;
    push(1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0);
    push(1.0 - 2.0 * b1, b1, w1);
    push(b1, 1.0 - 2.0 * b1, w1);
    push(b1, b1, w1);
    push(1.0 - 2.0 * b2, b2, w2);
    push(b2, 1.0 - 2.0 * b2, w2);
    push(b2, b2, w2);
  } else {
    // Collapsed (Duffy) product rule: x = u(1-v), y = v, Jacobian (1-v).
    // A monomial x^a y^b maps to degree a in u and a+b+1 in v.
    rule.exactness = degree_of_exactness;
    int n = (degree_of_exactness + 3) / 2;  // 2n-1 >= degree+1
    EdgeRule g = detail::gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      double u = 0.5 * (g.points[i] + 1.0);
      double wu = 0.5 * g.weights[i];
      for (int j = 0; j < n; ++j) {
        double v = 0.5 * (g.points[j] + 1.0);
        double wv = 0.5 * g.weights[j];
        push(u * (1.0 - v), v, 2.0 * wu * wv * (1.0 - v));
      }
    }
  }
  return rule;
}

/// Composite rule over 4^levels congruent sub-triangles. Polynomial
/// exactness is unchanged; accuracy for non-polynomial (oscillatory)
/// integrands improves with each level.
inline TriangleRule subdivide(const TriangleRule& rule, int levels) {
  TriangleRule out = rule;
  for (int l = 0; l < levels; ++l) {
    TriangleRule next;
    next.exactness = out.exactness;
    // The four children of (a,b,c): affine maps with Jacobian 1/4.
    const Vec2 corners[4][3] = {
        {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}},
        {{0.5, 0.0}, {1.0, 0.0}, {0.5, 0.5}},
        {{0.0, 0.5}, {0.5, 0.5}, {0.0, 1.0}},
        {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}},
    };
    for (const auto& tri : corners) {
      for (int q = 0; q < out.size(); ++q) {
        Vec2 p = out.points[q];
        Vec2 mapped = tri[0] + p.x * (tri[1] - tri[0]) + p.y * (tri[2] - tri[0]);
        next.points.push_back(mapped);
        next.weights.push_back(0.25 * out.weights[q]);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Composite edge rule over 2^levels equal sub-intervals of [-1,1].
inline EdgeRule subdivide(const EdgeRule& rule, int levels) {
  EdgeRule out = rule;
  for (int l = 0; l < levels; ++l) {
    EdgeRule next;
    next.exactness = out.exactness;
    for (double shift : {-0.5, 0.5}) {
      for (int q = 0; q < out.size(); ++q) {
        next.points.push_back(shift + 0.5 * out.points[q]);
        next.weights.push_back(0.5 * out.weights[q]);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Quadrature points/weights mapped to a physical triangle; weights sum
/// to the triangle area.
struct MappedRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

inline MappedRule map_to(const TriangleRule& rule, const Triangle& t) {
  MappedRule out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  double jac = 2.0 * t.signed_area();
  for (int q = 0; q < rule.size(); ++q) {
    Vec2 p = rule.points[q];
    out.points.push_back(t.a + p.x * (t.b - t.a) + p.y * (t.c - t.a));
    out.weights.push_back(rule.weights[q] * jac);
  }
  return out;
}

/// Edge rule mapped to the segment from p to q; weights sum to |q - p|.
inline MappedRule map_to(const EdgeRule& rule, Vec2 p, Vec2 q) {
  MappedRule out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  double half_len = 0.5 * norm(q - p);
  Vec2 mid = 0.5 * (p + q);
  Vec2 half = 0.5 * (q - p);
  for (int i = 0; i < rule.size(); ++i) {
    out.points.push_back(mid + rule.points[i] * half);
    out.weights.push_back(rule.weights[i] * half_len);
  }
  return out;
}

}  // namespace wg
