#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wg {
namespace detail {

/// Minimal double-double arithmetic (~31 significant digits). The Bessel
/// power series suffers catastrophic cancellation for moderate arguments
/// (terms reach ~1e12 near x=30 while the result is O(1)), so the series
/// accumulation runs in this extended precision.
struct dd {
  double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline dd dd_mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = dd_add(a, dd_mul({-q1, 0.0}, b));
  double q2 = r.hi / b.hi;
  r = dd_add(r, dd_mul({-q2, 0.0}, b));
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return dd_add(q, {q3, 0.0});
}

/// Ascending series J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_m t_m with
/// t_0 = 1, t_m = -t_{m-1} * (x^2/4) / (m (nu+m)). Reliable for x <= ~35.
inline double bessel_j_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  dd x2 = two_prod(x, x);
  dd q = dd_div(x2, {4.0, 0.0});  // x^2/4
  dd term{1.0, 0.0};
  dd sum{1.0, 0.0};
  for (int m = 1; m < 400; ++m) {
    dd denom = dd_mul({static_cast<double>(m), 0.0},
                      dd_add({nu, 0.0}, {static_cast<double>(m), 0.0}));
    term = dd_div(dd_mul(term, q), denom);
    term.hi = -term.hi;
    term.lo = -term.lo;
    sum = dd_add(sum, term);
    if (std::abs(term.hi) < 1e-40 && m > x / 2) break;
  }
  double pref = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
  return pref * (sum.hi + sum.lo);
}

/// Hankel large-argument expansion
///   J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
///   chi = x - (nu/2 + 1/4) pi,
/// with P, Q the standard even/odd a_k(nu)/x^k sums, truncated at the
/// smallest term. Accurate to well below 1e-12 relative for x >= 30.
inline double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double a = 1.0;  // a_k(nu) / x^k
  double prev = 1.0;
  for (int k = 1; k <= 40; ++k) {
    double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(a) >= prev) break;  // asymptotic tail started growing
    prev = std::abs(a);
    int r = k % 4;
    if (r == 0) p += a;
    else if (r == 1) q += a;
    else if (r == 2) p -= a;
    else q -= a;
    if (std::abs(a) < 1e-20) break;
  }
  double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind, validated for nu in [0,4] and
/// x in [0, 1e4]. Power series below x=30, Hankel expansion above.
inline double bessel_j(double nu, double x) {
  if (!(nu >= 0.0 && nu <= 4.0))
    throw std::domain_error("bessel_j: order outside validated range [0,4]");
  if (!(x >= 0.0 && x <= 1e4))
    throw std::domain_error("bessel_j: argument outside validated range [0,1e4]");
  return x <= 30.0 ? detail::bessel_j_series(nu, x)
                   : detail::bessel_j_asymptotic(nu, x);
}

/// d/dx J_nu(x) = (nu/x) J_nu(x) - J_{nu+1}(x).
inline double bessel_j_derivative(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return 0.0;
    if (nu == 1.0) return 0.5;
    if (nu > 1.0) return 0.0;
    throw std::domain_error("bessel_j_derivative: singular at x=0 for 0<nu<1");
  }
  return (nu / x) * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

}  // namespace wg
