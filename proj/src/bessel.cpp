#include "hslab/bessel.hpp"

#include <cmath>
#include <numbers>

#include "hslab/error.hpp"

namespace hslab {

namespace {

constexpr double kSwitch = 12.0;

double series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// sqrt(2 pi x) e^{-x} I_0(x) for large x, summed until the terms stop shrinking.
double asymptotic_factor(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double next = term * (2.0 * k + 1) * (2.0 * k + 1) / (8.0 * (k + 1) * x);
    if (std::abs(next) >= std::abs(term) || next < 1e-17 * sum) break;
    term = next;
    sum += term;
  }
  return sum;
}

}  // namespace

double i0_scaled(double x) {
  if (!(x >= 0.0)) throw Error(ErrorKind::DomainError, "i0_scaled needs x >= 0");
  if (x <= kSwitch) return std::exp(-x) * series(x);
  return asymptotic_factor(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double i0(double x) {
  const double ax = std::abs(x);
  if (!(ax <= 700.0)) throw Error(ErrorKind::Overflow, "i0 argument beyond 700");
  if (ax <= kSwitch) return series(ax);
  return std::exp(ax) * i0_scaled(ax);
}

double envelope(double gamma, double dist_center, double R) {
  if (!(gamma > 0.0) || !(R > 0.0) || !(dist_center >= 0.0) || dist_center > R)
    throw Error(ErrorKind::DomainError, "envelope needs gamma > 0, R > 0, 0 <= d <= R");
  if (gamma * R > 700.0) throw Error(ErrorKind::Overflow, "envelope needs gamma R <= 700");
  return i0_scaled(gamma * dist_center) / i0_scaled(gamma * R) * std::exp(-gamma * (R - dist_center));
}

}  // namespace hslab
