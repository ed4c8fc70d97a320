#pragma once

#include <cmath>
#include <stdexcept>

#include "wg/assembly.hpp"
#include "wg/bessel.hpp"
#include "wg/geometry.hpp"

namespace wg {

/// Smooth radial dielectric: permittivity eps1 inside r<a blending to eps2
/// outside r>b via a cubic smoothstep in t = (b-r)/(b-a). The PDE
/// coefficient is d(r) = S(r)/eps1 + (1-S(r))/eps2.
struct DielectricProfile {
  double eps1 = 2.0;
  double eps2 = 80.0;
  double a = 1.0;
  double b = 3.0;
  double R = 5.0;

  void validate() const {
    if (!(eps1 > 0 && eps2 > 0))
      throw std::invalid_argument("DielectricProfile: permittivities must be positive");
    if (!(a > 0 && a < b && b < R))
      throw std::invalid_argument("DielectricProfile: need 0 < a < b < R");
  }

  double S(double r) const {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    double t = (b - r) / (b - a);
    return t * t * (3.0 - 2.0 * t);
  }

  double Sprime(double r) const {
    if (r <= a || r >= b) return 0.0;
    double t = (b - r) / (b - a);
    return (6.0 * t * t - 6.0 * t) / (b - a);  // chain rule: dt/dr = -1/(b-a)
  }

  double d(double r) const { return S(r) / eps1 + (1.0 - S(r)) / eps2; }
  double dprime(double r) const { return (1.0 / eps1 - 1.0 / eps2) * Sprime(r); }
};

/// Impedance problem on the unit hexagon: d=1, f = sin(kr)/r, and the exact
/// radial field u = cos(kr)/k - C J0(kr) with C chosen so the Robin data
/// reproduces u.
inline ProblemSpec convex_problem(double k) {
  if (!(k > 0)) throw std::invalid_argument("convex_problem: k must be positive");
  const cplx C = cplx(std::cos(k), std::sin(k)) /
                 (k * cplx(bessel_j(0, k), bessel_j(1, k)));

  ProblemSpec p;
  p.kappa = k;
  p.bc = BCType::robin;
  p.d = [](Vec2) { return 1.0; };
  p.f = [k](Vec2 x) -> cplx {
    double r = norm(x);
    return r == 0.0 ? k : std::sin(k * r) / r;
  };
  auto grad = [k, C](Vec2 x) -> std::array<cplx, 2> {
    double r = norm(x);
    if (r == 0.0) return {cplx(0), cplx(0)};
    cplx ur = -std::sin(k * r) + C * k * bessel_j(1, k * r);
    return {ur * (x.x / r), ur * (x.y / r)};
  };
  p.exact.value = [k, C](Vec2 x) -> cplx {
    double r = norm(x);
    return std::cos(k * r) / k - C * bessel_j(0, k * r);
  };
  p.exact.gradient = grad;
  p.robin_g = [k, grad, value = p.exact.value](Vec2 x, Vec2 n) -> cplx {
    auto g = grad(x);
    return g[0] * n.x + g[1] * n.y + cplx(0, k) * value(x);
  };
  return p;
}

/// Singular corner problem on the slit disk: f=0, Dirichlet data from the
/// exact field u = J_xi(kr) cos(xi theta), theta = atan2(y,x) in (-pi,pi].
/// For fractional xi the field is discontinuous across the excluded ray
/// (negative x-axis); evaluating exactly on it is an error.
inline ProblemSpec pacman_problem(double k, double xi) {
  if (!(k > 0)) throw std::invalid_argument("pacman_problem: k must be positive");
  if (!(xi > 0)) throw std::invalid_argument("pacman_problem: xi must be positive");
  const bool integer_order = xi == std::round(xi);

  auto angle = [integer_order](Vec2 x) -> double {
    if (!integer_order && x.y == 0.0 && x.x < 0.0)
      throw std::domain_error(
          "pacman_problem: evaluation on the excluded ray (negative x-axis)");
    return std::atan2(x.y, x.x);
  };

  ProblemSpec p;
  p.kappa = k;
  p.bc = BCType::dirichlet;
  p.d = [](Vec2) { return 1.0; };
  p.f = [](Vec2) -> cplx { return 0.0; };
  p.exact.value = [k, xi, angle](Vec2 x) -> cplx {
    double r = norm(x);
    if (r == 0.0) return 0.0;  // J_xi(0) = 0 for xi > 0
    return bessel_j(xi, k * r) * std::cos(xi * angle(x));
  };
  p.exact.gradient = [k, xi, angle](Vec2 x) -> std::array<cplx, 2> {
    double r = norm(x);
    if (r == 0.0) {
      if (xi == 1.0) return {cplx(0.5 * k), cplx(0)};  // J1(kr)cos(t) ~ kx/2
      if (xi > 1.0) return {cplx(0), cplx(0)};
      throw std::domain_error("pacman_problem: gradient singular at the origin");
    }
    double th = angle(x);
    double ur = k * bessel_j_derivative(xi, k * r) * std::cos(xi * th);
    double ut_r = -xi * bessel_j(xi, k * r) * std::sin(xi * th) / r;
    double c = std::cos(th), s = std::sin(th);
    return {cplx(ur * c - ut_r * s), cplx(ur * s + ut_r * c)};
  };
  p.dirichlet_g = p.exact.value;
  return p;
}

/// Variable-coefficient problem on the disk of radius profile.R: the source
/// f = kappa^2 (d-1) J0(kr) + k d' J1(kr) manufactures the exact solution
/// u = J0(kr) for -div(d grad u) - kappa^2 u = f.
inline ProblemSpec inhomogeneous_problem(double k, DielectricProfile profile = {}) {
  if (!(k > 0))
    throw std::invalid_argument("inhomogeneous_problem: k must be positive");
  profile.validate();

  ProblemSpec p;
  p.kappa = k;
  p.bc = BCType::dirichlet;
  p.d = [profile](Vec2 x) { return profile.d(norm(x)); };
  p.f = [k, profile](Vec2 x) -> cplx {
    double r = norm(x);
    return k * k * (profile.d(r) - 1.0) * bessel_j(0, k * r) +
           k * profile.dprime(r) * bessel_j(1, k * r);
  };
  p.exact.value = [k](Vec2 x) -> cplx { return bessel_j(0, k * norm(x)); };
  p.exact.gradient = [k](Vec2 x) -> std::array<cplx, 2> {
    double r = norm(x);
    if (r == 0.0) return {cplx(0), cplx(0)};
    double ur = -k * bessel_j(1, k * r);
    return {cplx(ur * x.x / r), cplx(ur * x.y / r)};
  };
  p.dirichlet_g = p.exact.value;
  return p;
}

}  // namespace wg
