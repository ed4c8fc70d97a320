#include <catch_amalgamated.hpp>
#include <cmath>

#include "wg/quadrature.hpp"

using namespace wg;

namespace {

// Exact monomial integral over the reference triangle {x,y>=0, x+y<=1}:
// int x^a y^b = a! b! / (a+b+2)!.
double ref_monomial(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

double integrate_ref(const TriangleRule& rule, int a, int b) {
  Triangle ref{{0, 0}, {1, 0}, {0, 1}};
  MappedRule m = map_to(rule, ref);
  double s = 0.0;
  for (int q = 0; q < m.size(); ++q)
    s += m.weights[q] * std::pow(m.points[q].x, a) * std::pow(m.points[q].y, b);
  return s;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials to their stated degree",
          "[quadrature]") {
  for (int deg = 1; deg <= 20; ++deg) {
    TriangleRule rule = triangle_quadrature(deg);
    for (int a = 0; a + 0 <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        CAPTURE(deg, a, b);
        CHECK(integrate_ref(rule, a, b) ==
              Catch::Approx(ref_monomial(a, b)).margin(1e-15));
      }
  }
}

TEST_CASE("degree-5 rule: x^2 y^3 = 1/420 but x^6 misses", "[quadrature]") {
  TriangleRule rule = triangle_quadrature(5);
  CHECK(integrate_ref(rule, 2, 3) == Catch::Approx(1.0 / 420.0).margin(1e-15));
  // 7-point rule is exact only through degree 5.
  CHECK(std::abs(integrate_ref(rule, 6, 0) - ref_monomial(6, 0)) > 1e-6);
}

TEST_CASE("edge rules: Gauss-Legendre exactness on [-1,1]", "[quadrature]") {
  EdgeRule r5 = edge_quadrature(5);
  auto integrate = [](const EdgeRule& r, int p) {
    double s = 0.0;
    for (size_t q = 0; q < r.points.size(); ++q)
      s += r.weights[q] * std::pow(r.points[q], p);
    return s;
  };
  CHECK(integrate(r5, 4) == Catch::Approx(2.0 / 5.0).margin(1e-15));
  CHECK(integrate(r5, 5) == Catch::Approx(0.0).margin(1e-15));

  EdgeRule r3 = edge_quadrature(3);  // 2-point rule, exact through degree 3
  CHECK(integrate(r3, 3) == Catch::Approx(0.0).margin(1e-15));
  CHECK(std::abs(integrate(r3, 6) - 2.0 / 7.0) > 1e-3);
}

TEST_CASE("mapped edge rule integrates arclength polynomials", "[quadrature]") {
  // int over the segment (0,0)-(3,4) of x ds with length 5: x = 3t, ds = 5 dt,
  // t in [0,1] -> 15/2.
  EdgeRule rule = edge_quadrature(5);
  MappedRule m = map_to(rule, Vec2{0, 0}, Vec2{3, 4});
  double s = 0.0;
  for (int q = 0; q < m.size(); ++q) s += m.weights[q] * m.points[q].x;
  CHECK(s == Catch::Approx(7.5).epsilon(1e-14));
}

TEST_CASE("high-degree product rules stay exact (Duffy path)", "[quadrature]") {
  for (int deg : {6, 8, 11, 14, 20}) {
    TriangleRule rule = triangle_quadrature(deg);
    CAPTURE(deg);
    CHECK(integrate_ref(rule, deg, 0) ==
          Catch::Approx(ref_monomial(deg, 0)).epsilon(1e-13));
    CHECK(integrate_ref(rule, deg / 2, deg - deg / 2) ==
          Catch::Approx(ref_monomial(deg / 2, deg - deg / 2)).epsilon(1e-13));
  }
}

TEST_CASE("composite subdivision preserves exactness and adds points",
          "[quadrature]") {
  TriangleRule rule = triangle_quadrature(5);
  TriangleRule sub = subdivide(rule, 1);
  CHECK(sub.points.size() == 4 * rule.points.size());
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      CAPTURE(a, b);
      CHECK(integrate_ref(sub, a, b) ==
            Catch::Approx(ref_monomial(a, b)).margin(1e-15));
    }

  EdgeRule er = edge_quadrature(5);
  EdgeRule esub = subdivide(er, 2);
  CHECK(esub.points.size() == 4 * er.points.size());
  double s = 0.0;
  for (size_t q = 0; q < esub.points.size(); ++q)
    s += esub.weights[q] * std::pow(esub.points[q], 4);
  CHECK(s == Catch::Approx(2.0 / 5.0).margin(1e-14));
}

TEST_CASE("weights are positive and sum to the domain measure", "[quadrature]") {
  for (int deg = 1; deg <= 20; ++deg) {
    TriangleRule rule = triangle_quadrature(deg);
    double s = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == Catch::Approx(0.5).epsilon(1e-14));  // reference triangle area
  }
}

TEST_CASE("mapping scales weights by the Jacobian", "[quadrature]") {
  Triangle t{{1, 1}, {4, 1}, {1, 5}};  // area 6
  MappedRule m = map_to(triangle_quadrature(3), t);
  double s = 0.0;
  for (int q = 0; q < m.size(); ++q) s += m.weights[q];
  CHECK(s == Catch::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("invalid degrees are rejected", "[quadrature]") {
  CHECK_THROWS_AS(triangle_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(triangle_quadrature(max_triangle_exactness + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(edge_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(edge_quadrature(max_edge_exactness + 1),
                  std::invalid_argument);
}
