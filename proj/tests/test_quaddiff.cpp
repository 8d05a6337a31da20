#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hslab/error.hpp"
#include "hslab/flat_metric.hpp"
#include "hslab/polynomial.hpp"

using namespace hslab;

namespace {

PolynomialQD from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
  std::vector<cplx> c{lead};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  return PolynomialQD(c);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an hslab::Error");
  return ErrorKind::DomainError;
}

// Midpoint rule for the integral of sqrt(1 - x^2) over [a, b].
double semicircle_quadrature(double a, double b) {
  const int m = 200000;
  const double dx = (b - a) / m;
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = a + (i + 0.5) * dx;
    s += std::sqrt(1.0 - x * x);
  }
  return s * dx;
}

}  // namespace

TEST_CASE("eval_qd derivatives") {
  CHECK(eval_qd(PolynomialQD({-1.0, 0.0, 1.0}), 2.0, 0) == cplx(3.0));
  CHECK(eval_qd(PolynomialQD({0.0, 1.0}), cplx(5, 1), 1) == cplx(1.0));
  CHECK(eval_qd(PolynomialQD({0.0, 0.0, 0.0, 1.0}), 2.0, 2) == cplx(12.0));
  CHECK(eval_qd(PolynomialQD({1.0}), 3.0, 2) == cplx(0.0));
  CHECK(kind_of([] { eval_qd(PolynomialQD({1.0}), 0.0, 3); }) == ErrorKind::DomainError);
}

TEST_CASE("coefficient trimming and degree limit") {
  const PolynomialQD p({1.0, 2.0, 1e-20});
  CHECK(p.degree() == 1);
  CHECK(PolynomialQD({0.0, 0.0}).is_zero());
  std::vector<cplx> big(18, 1.0);
  CHECK(kind_of([&] { PolynomialQD q(big); }) == ErrorKind::ValidationError);
}

TEST_CASE("find_zeros examples") {
  auto z = find_zeros(PolynomialQD({-1.0, 0.0, 1.0}));
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0].location - cplx(-1.0)) < 1e-14);
  CHECK(std::abs(z[1].location - cplx(1.0)) < 1e-14);
  CHECK(z[0].simple);
  CHECK(z[1].simple);

  z = find_zeros(PolynomialQD({0.0, 1.0}));
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0].location) == 0.0);
  CHECK(z[0].simple);

  z = find_zeros(PolynomialQD({-1.0, cplx(0, -2), 1.0}));
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0].location - cplx(0, 1)) < 1e-7);
  CHECK_FALSE(z[0].simple);
  CHECK(z[0].multiplicity == 2);

  CHECK(kind_of([] { find_zeros(PolynomialQD({0.0})); }) == ErrorKind::ZeroDifferential);
  CHECK(find_zeros(PolynomialQD({2.0})).empty());
}

TEST_CASE("find_zeros recovers prescribed roots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 3 + trial % 6;
    std::vector<cplx> roots;
    while (static_cast<int>(roots.size()) < d) {
      const cplx r(U(rng), U(rng));
      bool ok = true;
      for (const cplx& q : roots) ok = ok && std::abs(q - r) >= 0.1;
      if (ok) roots.push_back(r);
    }
    const auto found = find_zeros(from_roots(roots, cplx(0.7, 0.3)));
    REQUIRE(found.size() == roots.size());
    for (const cplx& r : roots) {
      double best = 1e9;
      for (const Zero& z : found) best = std::min(best, std::abs(z.location - r));
      CHECK(best < 1e-8);
    }
    for (std::size_t i = 1; i < found.size(); ++i) {
      const bool ordered = found[i - 1].location.real() < found[i].location.real() ||
                           (found[i - 1].location.real() == found[i].location.real() &&
                            found[i - 1].location.imag() <= found[i].location.imag());
      CHECK(ordered);
    }
  }
}

TEST_CASE("triple root is merged") {
  const auto z = find_zeros(from_roots({0.5, 0.5, 0.5, -1.0}));
  REQUIRE(z.size() == 2);
  CHECK(z[0].simple);
  CHECK_FALSE(z[1].simple);
  CHECK(std::abs(z[1].location - cplx(0.5)) < 1e-4);
}

TEST_CASE("lie_derivative examples") {
  const PolynomialQD z({0.0, 1.0});
  CHECK(lie_derivative(PolynomialVF({1.0}), z).coeffs() == std::vector<cplx>{1.0});
  CHECK(lie_derivative(PolynomialVF({0.0, 1.0}), z).coeffs() == std::vector<cplx>{0.0, 3.0});
  const auto psi = lie_derivative(PolynomialVF({0.0, 0.0, 0.2}), z);
  REQUIRE(psi.degree() == 2);
  CHECK(std::abs(psi.coeffs()[2] - 1.0) < 1e-15);
  CHECK(std::abs(psi.coeffs()[0]) == 0.0);
  CHECK(kind_of([&] { lie_derivative(PolynomialVF({1.0}, "w"), z); }) == ErrorKind::ChartMismatch);
}

TEST_CASE("chi_for_variation examples") {
  CHECK(chi_for_variation(PolynomialQD({1.0}), 1.0).coeffs() == std::vector<cplx>{1.0});
  const auto c2 = chi_for_variation(PolynomialQD({0.0, 0.0, 1.0}), 1.0).coeffs();
  REQUIRE(c2.size() == 3);
  CHECK(std::abs(c2[2] - 0.2) < 1e-16);
  CHECK(chi_for_variation(PolynomialQD({1.0}), 2.0).coeffs() == std::vector<cplx>{0.5});
  CHECK(kind_of([] { chi_for_variation(PolynomialQD({1.0}), 0.0); }) == ErrorKind::DegenerateChart);
}

TEST_CASE("chi_for_variation round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0), M(0.5, 2.0), A(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> a(static_cast<std::size_t>(1 + trial % 9));
    for (auto& x : a) x = {U(rng), U(rng)};
    a.back() += cplx(1.5, 0.0);
    const cplx c = std::polar(M(rng), A(rng));
    const PolynomialQD pdot(a);
    const auto back = lie_derivative(chi_for_variation(pdot, c), PolynomialQD({0.0, c}));
    REQUIRE(back.coeffs().size() == a.size());
    double scale = 0.0;
    for (const cplx& x : a) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(back.coeffs()[i] - a[i]) <= 1e-12 * scale);
  }
}

TEST_CASE("radius_field for P = z") {
  const int n = 129;
  const double L = 2.0, h = 2 * L / (n - 1);
  const Grid2D g(cplx(0.0, 0.5 * h), L, n);
  const PolynomialQD p({0.0, 1.0});
  for (Stencil s : {Stencil::Eight, Stencil::Sixteen}) {
    const ScalarField r = radius_field(p, g, s);
    const double tol = s == Stencil::Eight ? 0.083 : 0.028;
    // Node nearest to z = 1 on the real axis: (1, h/2).
    const int j = static_cast<int>(std::lround((1.0 + L) / h));
    const cplx z = g.node(j, 64);
    const double exact = (2.0 / 3.0) * std::pow(std::abs(z), 1.5);
    CHECK(r(j, 64) >= exact * (1 - 1e-3));
    CHECK(r(j, 64) <= exact * (1 + tol) + 2 * h);
    double mn = 1e9;
    for (std::size_t i = 0; i < g.size(); ++i) mn = std::min(mn, r[i]);
    CHECK(mn >= 0.0);
  }
  CHECK(kind_of([&] { radius_field(PolynomialQD({1.0}), g); }) == ErrorKind::NoZeros);
}

TEST_CASE("radius_field for z^2 - 1 at the origin") {
  const Grid2D g(0.0, 2.1, 129);
  const PolynomialQD p({-1.0, 0.0, 1.0});
  const double oracle = semicircle_quadrature(0.0, 1.0);
  CHECK(oracle == doctest::Approx(std::numbers::pi / 4).epsilon(1e-8));
  const ScalarField r = radius_field(p, g, Stencil::Sixteen);
  CHECK(r(64, 64) == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("radius_field is 1-Lipschitz in the weighted graph metric") {
  const Grid2D g(cplx(0.013, 0.021), 2.0, 65);
  const PolynomialQD p({-1.0, 0.0, 1.0});
  const ScalarField r = radius_field(p, g, Stencil::Eight);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j + 1 < n; ++j) {
      const double wa = std::sqrt(std::abs(eval_qd(p, g.node(j, k))));
      const double wb = std::sqrt(std::abs(eval_qd(p, g.node(j + 1, k))));
      CHECK(std::abs(r(j, k) - r(j + 1, k)) <= 0.5 * (wa + wb) * g.h() + 1e-12);
    }
}

TEST_CASE("threshold") {
  const Grid2D g(cplx(0.0, 0.0), 2.1, 257);
  const PolynomialQD p({-1.0, 0.0, 1.0});
  const double oracle = semicircle_quadrature(-1.0, 1.0);
  const auto m = threshold(p, g, Stencil::Sixteen);
  REQUIRE(m.has_value());
  CHECK(*m == doctest::Approx(oracle).epsilon(0.05));
  for (double t : {2.0, 4.0, 9.0}) {
    const auto mt = threshold(p.scaled(t), g, Stencil::Sixteen);
    REQUIRE(mt.has_value());
    CHECK(*mt / *m == doctest::Approx(std::sqrt(t)).epsilon(2 * 0.028));
  }
  const double h = g.h();
  CHECK_FALSE(threshold(PolynomialQD({0.0, 1.0}), Grid2D(cplx(0.5 * h, 0.0), 2.1, 257)).has_value());
  CHECK(kind_of([&] { threshold(PolynomialQD({1.0}), g); }) == ErrorKind::NoZeros);
}
