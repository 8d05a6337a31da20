#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hslab/bessel.hpp"
#include "hslab/error.hpp"
#include "hslab/grid.hpp"

using namespace hslab;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Power series in 50-digit arithmetic; converges for every x used here.
big i0_oracle(double xd) {
  const big x = xd;
  const big q = x * x / 4;
  big term = 1, sum = 1;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (big(k) * k);
    sum += term;
    if (term < sum * big("1e-45")) break;
  }
  return sum;
}

double rel_err(double v, const big& ref) { return static_cast<double>(abs((big(v) - ref) / ref)); }

}  // namespace

TEST_CASE("i0 examples") {
  CHECK(i0(0.0) == 1.0);
  CHECK(std::abs(i0(2.0) - 2.2795853023360673) <= 1e-10);
  CHECK(rel_err(i0(2.0), i0_oracle(2.0)) < 1e-14);
  for (double x : {0.5, 3.0, 20.0}) CHECK(i0(-x) == i0(x));
}

TEST_CASE("i0 and i0_scaled agree with the extended-precision series") {
  for (double x : {1e-3, 0.1, 1.0, 4.0, 8.0, 11.5, 11.999, 12.0, 12.001, 12.5, 15.0, 20.0, 30.0, 50.0, 100.0, 300.0,
                   690.0}) {
    CAPTURE(x);
    const big ref = i0_oracle(x);
    CHECK(rel_err(i0(x), ref) <= 1e-10);
    CHECK(rel_err(i0_scaled(x), ref * exp(-big(x))) <= 1e-10);
  }
}

TEST_CASE("branch agreement at the switch point") {
  const double below = i0_scaled(12.0);
  const double above = i0_scaled(std::nextafter(12.0, 13.0));
  CHECK(std::abs(above - below) / below <= 1e-9);
}

TEST_CASE("i0_scaled examples") {
  CHECK(i0_scaled(0.0) == 1.0);
  const double a = i0_scaled(40.0) * std::sqrt(2 * std::numbers::pi * 40.0);
  CHECK(a >= 1.0025);
  CHECK(a <= 1.0040);
  double prev = i0_scaled(1.0);
  for (double x = 2.0; x <= 512.0; x *= 2) {
    const double v = i0_scaled(x);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(std::isfinite(i0_scaled(1e6)));
}

TEST_CASE("errors") {
  try {
    i0(701.0);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  try {
    i0_scaled(-1.0);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
  CHECK_THROWS_AS(envelope(1.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(envelope(800.0, 0.5, 1.0), Error);
}

TEST_CASE("envelope examples and monotonicity") {
  CHECK(envelope(3.0, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(envelope(3.0, 0.0, 2.0) == doctest::Approx(1.0 / i0(6.0)).epsilon(1e-13));
  double prev = 0.0;
  for (double d = 0.0; d <= 5.0; d += 0.05) {
    const double v = envelope(3.7, d, 5.0);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v >= prev);
    prev = v;
  }
  // log envelope(gamma, R - rho, R) + gamma rho drifts like -log(rho)/2 only.
  const double gamma = 4.0, R = 100.0;
  for (double rho = 2.0; rho <= 64.0; rho *= 2) {
    const double s = std::log(envelope(gamma, R - rho, R)) + gamma * rho;
    CHECK(std::abs(s) < 1.0 + 0.5 * std::log(rho));
  }
}

TEST_CASE("envelope solves the modified Helmholtz equation to second order") {
  const double gamma = 3.0, R = 1.0;
  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    const Grid2D g(0.0, 1.0, n);
    const ScalarField v = sample(g, [&](cplx z) { return std::abs(z) <= R ? envelope(gamma, std::abs(z), R) : 0.0; });
    const ScalarField lap = laplacian(v);
    double err = 0.0;
    for (int k = 1; k < n - 1; ++k)
      for (int j = 1; j < n - 1; ++j)
        if (std::abs(g.node(j, k)) < 0.8 * R) err = std::max(err, std::abs(lap(j, k) - gamma * gamma * v(j, k)));
    if (prev > 0) {
      CHECK(prev / err >= 3.5);
      CHECK(prev / err <= 4.5);
    }
    prev = err;
  }
}
