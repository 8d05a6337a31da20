#include "hslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hslab/error.hpp"
#include "hslab/kernels.hpp"

namespace hslab {

Grid2D::Grid2D(cplx center, double half_width, int n) : center_(center), L_(half_width), n_(n), h_(0.0) {
  if (n < 33 || n % 2 == 0)
    throw Error(ErrorKind::ValidationError, "grid needs odd n >= 33, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorKind::ValidationError, "grid half-width must be positive");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
    throw Error(ErrorKind::ValidationError, "grid center must be finite");
  h_ = 2.0 * L_ / (n - 1);
}

template <typename T>
Field<T>::Field(const Grid2D& g, std::vector<T> values) : grid_(g), v_(std::move(values)) {
  if (v_.size() != g.size()) throw Error(ErrorKind::ValidationError, "field length does not match grid");
}

template class Field<double>;
template class Field<cplx>;

ScalarField sample(const Grid2D& g, const std::function<double(cplx)>& f) {
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.node(i));
  return out;
}

ComplexField sample_complex(const Grid2D& g, const std::function<cplx(cplx)>& f) {
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.node(i));
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid());
  kernels::laplacian(f.grid().n(), f.grid().h(), f.data(), out.data());
  return out;
}

ComplexField laplacian(const ComplexField& f) {
  const Grid2D& g = f.grid();
  ScalarField re(g), im(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  const ScalarField lr = laplacian(re), li = laplacian(im);
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = {lr[i], li[i]};
  return out;
}

double interior_max_abs(const ScalarField& f) {
  return kernels::interior_max_abs(f.grid().n(), f.data());
}

double interior_max_abs(const ComplexField& f) {
  const int n = f.grid().n();
  double m = 0.0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) m = std::max(m, std::abs(f(j, k)));
  return m;
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const int n = g.n();
  const double h = g.h();
  ScalarField fx(g), fy(g);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == 0) fx(j, k) = (-3.0 * f(0, k) + 4.0 * f(1, k) - f(2, k)) / (2.0 * h);
      else if (j == n - 1) fx(j, k) = (3.0 * f(n - 1, k) - 4.0 * f(n - 2, k) + f(n - 3, k)) / (2.0 * h);
      else fx(j, k) = (f(j + 1, k) - f(j - 1, k)) / (2.0 * h);

      if (k == 0) fy(j, k) = (-3.0 * f(j, 0) + 4.0 * f(j, 1) - f(j, 2)) / (2.0 * h);
      else if (k == n - 1) fy(j, k) = (3.0 * f(j, n - 1) - 4.0 * f(j, n - 2) + f(j, n - 3)) / (2.0 * h);
      else fy(j, k) = (f(j, k + 1) - f(j, k - 1)) / (2.0 * h);
    }
  }
  return {std::move(fx), std::move(fy)};
}

ComplexField dz(const ScalarField& f) {
  auto [fx, fy] = gradient(f);
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * cplx(fx[i], -fy[i]);
  return out;
}

bool Region::contains(cplx z) const {
  bool in = std::visit(
      [z](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeInterior>) {
          return true;
        } else if constexpr (std::is_same_v<S, Disk>) {
          return std::abs(z - s.center) <= s.radius;
        } else {
          const double r = std::abs(z - s.center);
          return r > s.inner && r <= s.outer;
        }
      },
      shape);
  if (!in) return false;
  for (const Disk& d : exclusions)
    if (std::abs(z - d.center) <= d.radius) return false;
  return true;
}

void check_disk_inside(const Grid2D& g, cplx center, double radius) {
  const cplx rel = center - g.center();
  const double lim = g.half_width() - g.h() + 1e-12 * g.half_width();
  if (!(radius >= 0.0) || std::abs(rel.real()) + radius > lim || std::abs(rel.imag()) + radius > lim)
    throw Error(ErrorKind::RegionOutOfBounds, "disk of radius " + std::to_string(radius) + " leaves the grid interior");
}

std::vector<unsigned char> region_mask(const Grid2D& g, const Region& region) {
  if (const auto* d = std::get_if<Disk>(&region.shape)) check_disk_inside(g, d->center, d->radius);
  if (const auto* a = std::get_if<Annulus>(&region.shape)) {
    if (!(a->inner >= 0.0 && a->inner < a->outer))
      throw Error(ErrorKind::ValidationError, "annulus needs 0 <= inner < outer");
    check_disk_inside(g, a->center, a->outer);
  }
  std::vector<unsigned char> mask(g.size(), 0);
  const int n = g.n();
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) mask[g.index(j, k)] = region.contains(g.node(j, k)) ? 1 : 0;
  return mask;
}

double integrate_mask(const ScalarField& density, const std::vector<unsigned char>& mask) {
  const Grid2D& g = density.grid();
  return g.h() * g.h() * kernels::masked_sum(g.n(), density.data(), mask.data());
}

double integrate_region(const ScalarField& density, const Region& region) {
  return integrate_mask(density, region_mask(density.grid(), region));
}

double circle_integral(const OneForm& omega, cplx center, double rho, int m) {
  if (m < 16) throw Error(ErrorKind::DomainError, "circle integral needs at least 16 samples");
  std::vector<double> terms(static_cast<std::size_t>(m));
  const double dth = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i) {
    const double th = i * dth;
    const double c = std::cos(th), s = std::sin(th);
    const auto [wx, wy] = omega(center + rho * cplx(c, s));
    terms[static_cast<std::size_t>(i)] = (wx * (-rho * s) + wy * (rho * c)) * dth;
  }
  return kernels::pairwise_sum(terms.data(), terms.size());
}

cplx circle_integral_dz(const std::function<cplx(cplx)>& f, cplx center, double rho, int m) {
  if (m < 16) throw Error(ErrorKind::DomainError, "circle integral needs at least 16 samples");
  std::vector<double> re(static_cast<std::size_t>(m)), im(static_cast<std::size_t>(m));
  const double dth = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i) {
    const cplx e = std::polar(1.0, i * dth);
    const cplx term = f(center + rho * e) * (cplx(0.0, rho) * e) * dth;
    re[static_cast<std::size_t>(i)] = term.real();
    im[static_cast<std::size_t>(i)] = term.imag();
  }
  return {kernels::pairwise_sum(re.data(), re.size()), kernels::pairwise_sum(im.data(), im.size())};
}

int default_circle_samples(const Grid2D& g, double rho) {
  return std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho / g.h())));
}

namespace {

template <typename T>
T bilinear(const Field<T>& f, cplx z) {
  const Grid2D& g = f.grid();
  const int n = g.n();
  const cplx rel = z - g.center();
  const double s = (rel.real() + g.half_width()) / g.h();
  const double t = (rel.imag() + g.half_width()) / g.h();
  const double tol = 1e-12 * n;
  if (!(s >= -tol && s <= n - 1 + tol && t >= -tol && t <= n - 1 + tol))
    throw Error(ErrorKind::SampleOutOfBounds, "sample point outside the grid hull");
  const int j = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
  const int k = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
  const double a = std::clamp(s - j, 0.0, 1.0), b = std::clamp(t - k, 0.0, 1.0);
  return (1 - a) * (1 - b) * f(j, k) + a * (1 - b) * f(j + 1, k) + (1 - a) * b * f(j, k + 1) + a * b * f(j + 1, k + 1);
}

}  // namespace

double bilinear_sample(const ScalarField& f, cplx z) { return bilinear(f, z); }
cplx bilinear_sample(const ComplexField& f, cplx z) { return bilinear(f, z); }

}  // namespace hslab
