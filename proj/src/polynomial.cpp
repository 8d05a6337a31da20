#include "hslab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hslab/error.hpp"

namespace hslab {

namespace detail {

Polynomial::Polynomial(std::vector<cplx> coeffs, std::string chart_label, int max_degree)
    : coeffs_(std::move(coeffs)), chart_(std::move(chart_label)) {
  if (coeffs_.empty()) throw Error(ErrorKind::ValidationError, "polynomial needs at least one coefficient");
  double scale = 0.0;
  for (const cplx& a : coeffs_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error(ErrorKind::ValidationError, "non-finite polynomial coefficient");
    scale = std::max(scale, std::abs(a));
  }
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-14 * scale) coeffs_.pop_back();
  if (scale == 0.0) coeffs_.assign(1, cplx{});
  if (degree() > max_degree)
    throw Error(ErrorKind::ValidationError,
                "degree " + std::to_string(degree()) + " exceeds maximum " + std::to_string(max_degree));
}

bool Polynomial::is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }

cplx Polynomial::derivative(cplx z, int order) const {
  if (order < 0) throw Error(ErrorKind::DomainError, "negative derivative order");
  const int d = degree();
  if (order > d) return {};
  // Horner on the order-th derivative coefficients n!/(n-order)! a_n.
  cplx acc{};
  for (int n = d; n >= order; --n) {
    double f = 1.0;
    for (int k = 0; k < order; ++k) f *= static_cast<double>(n - k);
    acc = acc * z + f * coeffs_[static_cast<std::size_t>(n)];
  }
  return acc;
}

}  // namespace detail

PolynomialQD PolynomialQD::scaled(cplx factor) const {
  std::vector<cplx> c = coeffs();
  for (cplx& a : c) a *= factor;
  return PolynomialQD(std::move(c), chart_label());
}

cplx eval_qd(const PolynomialQD& p, cplx z, int order) {
  if (order < 0 || order > 2) throw Error(ErrorKind::DomainError, "eval order must be 0, 1 or 2");
  return p.derivative(z, order);
}

cplx eval_vf(const PolynomialVF& chi, cplx z, int order) {
  if (order < 0 || order > 2) throw Error(ErrorKind::DomainError, "eval order must be 0, 1 or 2");
  return chi.derivative(z, order);
}

namespace {

// Aberth-Ehrlich simultaneous iteration from points on a Cauchy-bound circle.
std::vector<cplx> aberth(const std::vector<cplx>& a) {
  const int d = static_cast<int>(a.size()) - 1;
  auto eval = [&](cplx z, cplx& dp) {
    cplx p = a[static_cast<std::size_t>(d)];
    dp = 0.0;
    for (int n = d - 1; n >= 0; --n) {
      dp = dp * z + p;
      p = p * z + a[static_cast<std::size_t>(n)];
    }
    return p;
  };
  // Cauchy-type bound for the starting radius.
  double radius = 0.0;
  const double lead = std::abs(a.back());
  for (int n = 0; n < d; ++n)
    radius = std::max(radius, std::pow(std::abs(a[static_cast<std::size_t>(n)]) / lead, 1.0 / (d - n)));
  if (radius == 0.0) radius = 1.0;
  std::vector<cplx> z(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k)
    z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * (k + 0.25) / d + 0.4);

  std::vector<bool> done(z.size(), false);
  for (int it = 0; it < 500; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      cplx dp;
      const cplx p = eval(z[k], dp);
      if (p == cplx{}) {
        done[k] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx sum{};
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z[k]))) done[k] = true;
      else all_done = false;
    }
    if (all_done) return z;
  }
  // Clustered (multiple) roots converge linearly; accept them when the
  // polynomial value is at the rounding floor.
  for (const cplx& r : z) {
    cplx dp;
    const cplx p = eval(r, dp);
    double mag = 0.0;
    for (int n = d; n >= 0; --n) mag = mag * std::abs(r) + std::abs(a[static_cast<std::size_t>(n)]);
    if (!(std::abs(p) <= 1e-10 * mag)) throw Error(ErrorKind::RootFindFailure, "Aberth iteration did not converge");
  }
  return z;
}

}  // namespace

std::vector<Zero> find_zeros(const PolynomialQD& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroDifferential, "find_zeros on the zero differential");
  const auto& a = p.coeffs();
  const int d = p.degree();
  std::vector<cplx> roots;
  if (d == 1) {
    roots.push_back(-a[0] / a[1]);
  } else if (d == 2) {
    const cplx disc = std::sqrt(a[1] * a[1] - 4.0 * a[2] * a[0]);
    // Pick the sign that avoids cancellation, then use Vieta for the other.
    const cplx q = -0.5 * (a[1] + (std::real(std::conj(a[1]) * disc) >= 0.0 ? disc : -disc));
    if (q == cplx{}) {
      roots.assign(2, cplx{});
    } else {
      roots.push_back(q / a[2]);
      roots.push_back(a[0] / q);
    }
  } else if (d > 2) {
    roots = aberth(a);
  }

  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  // A root is numerically simple when |P_z| clears 1e-8 of the derivative scale.
  auto simple_at = [&](cplx z) {
    double dscale = 0.0;
    for (int n = 1; n <= d; ++n)
      dscale += n * std::abs(a[static_cast<std::size_t>(n)]) * std::pow(std::abs(z), n - 1);
    return std::abs(eval_qd(p, z, 1)) > 1e-8 * dscale;
  };
  std::vector<bool> simple(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) simple[i] = simple_at(roots[i]);

  // Merge roots closer than 1e-6. A root of multiplicity m is only resolved
  // to about eps^{1/m}, so non-simple roots within 1e-4 also merge.
  std::vector<Zero> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> cluster{i};
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      const std::size_t q = cluster[c];
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        const double dist = std::abs(roots[j] - roots[q]);
        if (dist < 1e-6 || (!simple[j] && !simple[q] && dist < 1e-4 * (1.0 + std::abs(roots[q])))) {
          used[j] = true;
          cluster.push_back(j);
        }
      }
    }
    cplx sum{};
    for (std::size_t q : cluster) sum += roots[q];
    Zero zr;
    zr.location = sum / static_cast<double>(cluster.size());
    zr.multiplicity = static_cast<int>(cluster.size());
    zr.simple = zr.multiplicity == 1 && simple[i];
    out.push_back(zr);
  }
  std::sort(out.begin(), out.end(), [](const Zero& x, const Zero& y) {
    return x.location.real() != y.location.real() ? x.location.real() < y.location.real()
                                                  : x.location.imag() < y.location.imag();
  });
  return out;
}

PolynomialQD lie_derivative(const PolynomialVF& chi, const PolynomialQD& p) {
  if (chi.chart_label() != p.chart_label())
    throw Error(ErrorKind::ChartMismatch, "vector field chart '" + chi.chart_label() +
                                              "' differs from differential chart '" + p.chart_label() + "'");
  const auto& b = chi.coeffs();
  const auto& a = p.coeffs();
  std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
  // chi * P_z
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t n = 1; n < a.size(); ++n) out[i + n - 1] += b[i] * (static_cast<double>(n) * a[n]);
  // 2 chi_z * P
  for (std::size_t i = 1; i < b.size(); ++i)
    for (std::size_t n = 0; n < a.size(); ++n) out[i - 1 + n] += (2.0 * static_cast<double>(i)) * b[i] * a[n];
  return PolynomialQD(std::move(out), p.chart_label(), 2 * kDefaultMaxDegree);
}

PolynomialVF chi_for_variation(const PolynomialQD& pdot, cplx c) {
  if (c == cplx{}) throw Error(ErrorKind::DegenerateChart, "chart constant c must be nonzero");
  std::vector<cplx> b = pdot.coeffs();
  for (std::size_t n = 0; n < b.size(); ++n) b[n] /= c * static_cast<double>(2 * n + 1);
  return PolynomialVF(std::move(b), pdot.chart_label());
}

}  // namespace hslab
