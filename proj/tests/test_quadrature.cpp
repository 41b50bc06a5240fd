#include "doctest.h"

#include <cmath>
#include <random>

#include "nibbled/quadrature.hpp"
#include "support/oracle_quadrature.hpp"

using namespace nibbled;

namespace {

const ConicFamily kFam(2.0, 1.0);

double oracle_xi(double a, double b, double s, Interval D) {
  auto f = [&](double t) { return oracle::weight_e(a, b, s, t); };
  auto singular = [&](double c) { return c == a || c == b || c == s; };
  if (D.left_infinite) return oracle::integrate_left_tail(f, D.hi, singular(D.hi));
  return oracle::integrate_endpoint_singular(f, D.lo, D.hi, singular(D.lo), singular(D.hi));
}

}  // namespace

TEST_CASE("length identity in the elliptic regime") {
  double s = 0.5;
  Quad lhs = xi(kFam, Interval::finite(1.0, 2.0), s);
  Quad rhs = xi(kFam, Interval::tail(0.5), s);
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-8));
  CHECK(lhs.value == doctest::Approx(oracle_xi(2, 1, s, Interval::finite(1, 2))).epsilon(1e-10));
}

TEST_CASE("length identity in the hyperbolic regime") {
  double s = 1.5;
  Quad lhs = xi(kFam, Interval::finite(1.5, 2.0), s);
  Quad rhs = xi(kFam, Interval::tail(1.0), s);
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-8));
  CHECK(rhs.value == doctest::Approx(oracle_xi(2, 1, s, Interval::tail(1.0))).epsilon(1e-10));
}

TEST_CASE("nested domains order the values") {
  double s = 0.5;
  CHECK(xi(kFam, Interval::finite(1.0, 1.5), s).value < xi(kFam, Interval::finite(1.0, 2.0), s).value);
}

TEST_CASE("production quadrature matches the oracle across both regimes") {
  std::mt19937 rng(20260822);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 24; ++trial) {
    bool elliptic = trial % 2 == 0;
    double s = elliptic ? 0.1 + 0.8 * unit(rng) : 1.05 + 0.85 * unit(rng);
    Interval D;
    switch (trial % 4) {
      case 0: {  // interior piece of (b, a)
        double lo = 1.0 + 0.6 * unit(rng);
        D = Interval::finite(lo, lo + 0.3 * unit(rng) + 1e-3);
        if (D.hi > 2.0) D.hi = 2.0;
        break;
      }
      case 1:  // full singular span
        D = elliptic ? Interval::finite(1.0, 2.0) : Interval::finite(s, 2.0);
        break;
      case 2:  // tail with a plain endpoint
        D = Interval::tail(elliptic ? -0.2 - unit(rng) : 0.3 * unit(rng));
        break;
      default:  // tail ending at a singular endpoint
        D = Interval::tail(elliptic ? s : 1.0);
        break;
    }
    if (!elliptic && trial % 4 == 0 && D.hi > s) continue;  // keep D inside Delta_s
    if (!elliptic && trial % 4 == 0) continue;               // (s, a) pieces covered by case 1
    double want = oracle_xi(2, 1, s, D);
    Quad got = xi(kFam, D, s);
    CHECK(got.value == doctest::Approx(want).epsilon(1e-10));
    CHECK(got.value > 0.0);
  }
}

TEST_CASE("derivatives match central finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double h = 1e-5;
  for (int trial = 0; trial < 10; ++trial) {
    bool elliptic = trial % 2 == 0;
    double s = elliptic ? 0.15 + 0.6 * unit(rng) : 1.2 + 0.6 * unit(rng);
    Interval D = elliptic ? Interval::finite(1.0, 2.0) : Interval::tail(1.0);
    for (int k : {1, 2}) {
      double up = xi(kFam, D, s + h, k - 1).value;
      double dn = xi(kFam, D, s - h, k - 1).value;
      double fd = (up - dn) / (2.0 * h);
      double got = xi(kFam, D, s, k).value;
      CHECK(got == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivative sign for a domain right of the parameter") {
  CHECK(xi(kFam, Interval::finite(1.0, 2.0), 0.5, 1).value > 0.0);
  // Domain left of the parameter: odd orders negative, even positive.
  CHECK(xi(kFam, Interval::tail(1.0), 1.5, 1).value < 0.0);
  CHECK(xi(kFam, Interval::tail(1.0), 1.5, 2).value > 0.0);
}

TEST_CASE("additivity over adjacent pieces") {
  double s = 0.4;
  double whole = xi(kFam, Interval::finite(1.0, 2.0), s).value;
  double split = xi(kFam, Interval::finite(1.0, 1.3), s).value +
                 xi(kFam, Interval::finite(1.3, 2.0), s).value;
  CHECK(whole == doctest::Approx(split).epsilon(1e-10));
}

TEST_CASE("invariant length helper cross-checks and matches the oracle") {
  Quad l = ell(kFam, 0.5);
  CHECK(l.value == doctest::Approx(oracle_xi(2, 1, 0.5, Interval::finite(1, 2))).epsilon(1e-10));
  Quad lh = ell(kFam, 1.5);
  CHECK(lh.value == doctest::Approx(oracle_xi(2, 1, 1.5, Interval::tail(1.0))).epsilon(1e-10));
  CHECK_THROWS_AS(ell(kFam, 1.0), Error);
  CHECK_THROWS_AS(ell(kFam, -0.1), Error);
  CHECK_THROWS_AS(ell(kFam, 2.5), Error);
}

TEST_CASE("invariant length is smooth on a sample grid") {
  // Second divided differences stay bounded on each regime.
  for (double lo : {0.1, 1.1}) {
    double h = 0.02;
    for (double s = lo; s < lo + 0.7; s += h) {
      double f0 = ell(kFam, s).value;
      double f1 = ell(kFam, s + h).value;
      double f2 = ell(kFam, s + 2 * h).value;
      CHECK(std::abs(f2 - 2 * f1 + f0) < 0.15);
    }
  }
}

TEST_CASE("ell derivative matches finite differences of ell") {
  for (double s : {0.3, 0.7, 1.3, 1.7}) {
    double h = 1e-5;
    double fd = (ell(kFam, s + h).value - ell(kFam, s - h).value) / (2 * h);
    CHECK(ell_derivative(kFam, s, 1).value == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("domain violations are rejected") {
  CHECK_THROWS_AS(xi(kFam, Interval::finite(0.0, 1.0), 0.5), Error);   // s inside
  CHECK_THROWS_AS(xi(kFam, Interval::finite(0.5, 1.5), 0.2), Error);   // b inside
  CHECK_THROWS_AS(xi(kFam, Interval::finite(-2.0, -1.0), -3.0), Error);  // wrong sign
  CHECK_THROWS_AS(xi(kFam, Interval::finite(1.5, 1.2), 0.5), Error);   // empty
  // s just off an endpoint is refused, s exactly on it is fine for k = 0.
  CHECK_THROWS_AS(xi(kFam, Interval::tail(0.5), 0.5 + 1e-11), Error);
  CHECK_NOTHROW(xi(kFam, Interval::tail(0.5), 0.5));
  // Derivatives need s strictly outside the closure.
  CHECK_THROWS_AS(xi(kFam, Interval::tail(0.5), 0.5, 1), Error);
}

TEST_CASE("high order derivatives stay consistent order to order") {
  // d/ds of the k-th derivative equals the (k+1)-th, checked by FD at k=3.
  double s = 0.45, h = 1e-5;
  Interval D = Interval::finite(1.0, 2.0);
  double fd = (xi(kFam, D, s + h, 3).value - xi(kFam, D, s - h, 3).value) / (2 * h);
  CHECK(xi(kFam, D, s, 4).value == doctest::Approx(fd).epsilon(1e-6));
}
