#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "wg/bessel.hpp"

using namespace wg;

namespace {
struct Ref {
  double nu, x, value;
};
}  // namespace

TEST_CASE("bessel_j against a frozen high-precision table", "[bessel]") {
  // Reference values computed once with 30-digit arithmetic and frozen here.
  const Ref table[] = {
      {0.0, 0.5, 0.9384698072408129},
      {0.0, 1.0, 0.76519768655796655},
      {0.0, 5.0, -0.1775967713143383},
      {0.0, 29.9, -0.097811150066062446},
      {0.0, 30.1, -0.074101372324018583},
      {0.0, 100.0, 0.019985850304223122},
      {0.0, 1000.0, 0.024786686152420175},
      {1.0, 0.5, 0.24226845767487389},
      {1.0, 2.0, 0.57672480775687339},
      {1.0, 29.9, -0.10991681070937226},
      {1.0, 30.1, -0.12637268272143993},
      {1.0, 500.0, 0.010472613470372293},
      {0.5, 1.0, 0.67139670714180309},
      {1.5, 2.0, 0.49129377868716235},
      {2.0 / 3.0, 1.0, 0.59794997367362852},
      {2.0 / 3.0, 10.0, -0.080149603304315784},
      {1.5, 25.0, -0.15901789538603658},
      {1.5, 35.0, 0.12022841672736797},
      {4.0, 10.0, -0.21960268610200854},
      {4.0, 10000.0, -0.0070990766107396627},
      {2.0, 7.0, -0.30141722008594012},
      {3.0, 29.0, 0.013524690018261826},
      {3.0, 31.0, 0.12530943159753818},
  };
  for (const Ref& r : table) {
    INFO("nu=" << r.nu << " x=" << r.x);
    CHECK(bessel_j(r.nu, r.x) == Catch::Approx(r.value).margin(2e-13));
  }
  // J_{1/2}(pi) = sqrt(2/pi^2) sin(pi) = 0.
  CHECK(std::abs(bessel_j(0.5, std::numbers::pi)) < 1e-15);
}

TEST_CASE("half-integer closed forms", "[bessel]") {
  // J_{1/2}(x) = sqrt(2/(pi x)) sin x, J_{3/2}(x) = sqrt(2/(pi x)) (sin x / x - cos x).
  for (double x : {0.3, 1.7, 6.2, 19.4, 28.0, 44.0, 120.0}) {
    double c = std::sqrt(2.0 / (std::numbers::pi * x));
    CHECK(bessel_j(0.5, x) == Catch::Approx(c * std::sin(x)).margin(2e-13));
    CHECK(bessel_j(1.5, x) ==
          Catch::Approx(c * (std::sin(x) / x - std::cos(x))).margin(2e-13));
  }
}

TEST_CASE("series and asymptotic branches agree near the splice", "[bessel]") {
  for (double nu : {0.0, 0.5, 2.0 / 3.0, 1.0, 1.5, 3.0, 4.0})
    for (double x : {29.0, 29.5, 30.0, 31.0, 33.0, 35.0}) {
      INFO("nu=" << nu << " x=" << x);
      CHECK(detail::bessel_j_series(nu, x) ==
            Catch::Approx(detail::bessel_j_asymptotic(nu, x)).margin(5e-13));
    }
}

TEST_CASE("first zero of J0", "[bessel]") {
  const double z = 2.4048255576957728;
  CHECK(std::abs(bessel_j(0.0, z)) < 1e-14);
  CHECK(bessel_j(0.0, z - 0.01) > 0.0);
  CHECK(bessel_j(0.0, z + 0.01) < 0.0);
}

TEST_CASE("x = 0 values and recurrence at the origin", "[bessel]") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(1.0, 0.0) == 0.0);
  CHECK(bessel_j(0.5, 0.0) == 0.0);
  CHECK(bessel_j(4.0, 0.0) == 0.0);
}

TEST_CASE("derivative against frozen values and identities", "[bessel]") {
  const Ref table[] = {
      {0.0, 1.0, -0.44005058574493352},
      {1.0, 2.0, -0.064471624737201026},
      {0.5, 2.5, -0.46467928345153001},
      {1.5, 31.0, -0.051467060116901352},
      {2.0 / 3.0, 4.0, -0.29433581674155361},
  };
  for (const Ref& r : table) {
    INFO("nu=" << r.nu << " x=" << r.x);
    CHECK(bessel_j_derivative(r.nu, r.x) ==
          Catch::Approx(r.value).margin(2e-13));
  }
  // J0' = -J1 everywhere.
  for (double x : {0.2, 3.3, 17.0, 64.0})
    CHECK(bessel_j_derivative(0.0, x) == Catch::Approx(-bessel_j(1.0, x)));

  // Central differences, interior of both branches.
  for (double nu : {0.0, 2.0 / 3.0, 1.5})
    for (double x : {2.0, 21.0, 40.0}) {
      double s = 1e-6;
      double fd = (bessel_j(nu, x + s) - bessel_j(nu, x - s)) / (2.0 * s);
      CHECK(bessel_j_derivative(nu, x) == Catch::Approx(fd).margin(1e-9));
    }
}

TEST_CASE("derivative at x = 0", "[bessel]") {
  CHECK(bessel_j_derivative(0.0, 0.0) == 0.0);
  CHECK(bessel_j_derivative(1.0, 0.0) == 0.5);
  CHECK(bessel_j_derivative(2.0, 0.0) == 0.0);
  CHECK(bessel_j_derivative(4.0, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j_derivative(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j_derivative(2.0 / 3.0, 0.0), std::domain_error);
}

TEST_CASE("validated ranges are enforced", "[bessel]") {
  CHECK_THROWS_AS(bessel_j(-0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(4.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(bessel_j(1.0, 1.0001e4), std::domain_error);
  CHECK_THROWS_AS(bessel_j(std::nan(""), 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(1.0, std::nan("")), std::domain_error);
}
