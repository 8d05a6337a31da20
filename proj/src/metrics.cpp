#include "hslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hslab/error.hpp"
#include "hslab/variation.hpp"

namespace hslab {

namespace {

// C-infinity cutoff: 1 on [0, 1/2], 0 from 1 on. The transition is
// symmetric about 3/4, so its integral over [0, 1] is exactly 3/4.
double cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double x = 2.0 * (s - 0.5);
  const double a = std::exp(-1.0 / (1.0 - x)), b = std::exp(-1.0 / x);
  return a / (a + b);
}
constexpr double kCutoffMass = 0.75;

void require_off_zeros(const PolynomialQD& p, const Grid2D& g) { validate_problem({p, g}); }

struct SingularTerm {
  cplx z0;
  double c0;  // 2|Pdot(z0)|^2 / |P_z(z0)|
  double eps;
};

double distance_to_region_edge(const Region& region, const Grid2D& g, cplx z) {
  double d = std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeInterior>) {
          const cplx rel = z - g.center();
          return g.half_width() - g.h() - std::max(std::abs(rel.real()), std::abs(rel.imag()));
        } else if constexpr (std::is_same_v<S, Disk>) {
          return s.radius - std::abs(z - s.center);
        } else {
          const double r = std::abs(z - s.center);
          return std::min(r - s.inner, s.outer - r);
        }
      },
      region.shape);
  for (const Disk& e : region.exclusions) d = std::min(d, std::abs(z - e.center) - e.radius);
  return d;
}

std::vector<SingularTerm> singular_terms(const PolynomialQD& p, const PolynomialQD& pdot, const Region& region,
                                         const Grid2D& g) {
  std::vector<SingularTerm> out;
  if (p.degree() == 0) return out;
  const double h = g.h();
  for (const Zero& z : find_zeros(p)) {
    const cplx rel = z.location - g.center();
    if (std::abs(rel.real()) > g.half_width() - h || std::abs(rel.imag()) > g.half_width() - h) continue;
    if (!region.contains(z.location)) continue;
    if (!z.simple) throw Error(ErrorKind::ValidationError, "non-simple zero of P inside the integration region");
    const double edge = distance_to_region_edge(region, g, z.location);
    if (edge < 4.0 * h)
      throw Error(ErrorKind::ValidationError, "zero of P lies within 4h of the integration region edge");
    const double c0 = 2.0 * std::norm(eval_qd(pdot, z.location)) / std::abs(eval_qd(p, z.location, 1));
    out.push_back({z.location, c0, std::min(16.0 * h, edge)});
  }
  return out;
}

double model_at(const std::vector<SingularTerm>& terms, cplx z) {
  double m = 0.0;
  for (const SingularTerm& s : terms) {
    const double r = std::abs(z - s.z0);
    if (r < s.eps) m += s.c0 * cutoff(r / s.eps) / r;
  }
  return m;
}

double model_mass(const std::vector<SingularTerm>& terms) {
  double c = 0.0;
  for (const SingularTerm& s : terms) c += 2.0 * std::numbers::pi * s.c0 * s.eps * kCutoffMass;
  return c;
}

}  // namespace

ScalarField delta_field(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F) {
  const Grid2D& g = u.grid();
  require_off_zeros(p, g);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    const cplx P = eval_qd(p, z), Pd = eval_qd(pdot, z);
    const double pd2 = std::norm(Pd);
    out[i] = 4.0 * std::exp(-2.0 * u[i]) * (pd2 - std::real(F[i] * P * std::conj(Pd))) - 2.0 * pd2 / std::abs(P);
  }
  return out;
}

ScalarField delta_shifted(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& w, const ComplexField& mu) {
  const Grid2D& g = w.grid();
  require_off_zeros(p, g);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    const cplx P = eval_qd(p, z), Pd = eval_qd(pdot, z);
    const double aP = std::abs(P);
    const double e = std::exp(-2.0 * w[i]);
    out[i] = 2.0 * (std::norm(Pd) / aP) * (e - 1.0) - 4.0 * (e / aP) * std::real(P * std::conj(Pd) * mu[i]);
  }
  return out;
}

ScalarField delta_holo(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, const ComplexField& u_z) {
  const Grid2D& g = u.grid();
  require_off_zeros(p, g);
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    const cplx P = eval_qd(p, z), Pz = eval_qd(p, z, 1);
    const cplx c = eval_vf(chi, z), cz = eval_vf(chi, z, 1);
    const cplx uz = u_z[i];
    const double aP = std::abs(P), P2 = std::norm(P);
    const double cPz2 = std::norm(c * Pz), czP2 = std::norm(cz * P);
    const double mixed = std::real(c * std::conj(cz) * Pz * std::conj(P));
    const double bracket = cPz2 + 2.0 * czP2 + 3.0 * mixed - 2.0 * std::real(std::norm(c) * P * std::conj(Pz) * uz) -
                           4.0 * std::real(c * std::conj(cz) * P2 * uz);
    out[i] = 4.0 * std::exp(-2.0 * u[i]) * bracket - 2.0 * cPz2 / aP - 8.0 * mixed / aP - 8.0 * std::norm(cz) * aP;
  }
  return out;
}

double beta_circle(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, cplx center, double rho,
                   int m) {
  const Grid2D& g = u.grid();
  check_disk_inside(g, center, rho);
  require_off_zeros(p, g);
  ScalarField w(g);
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = u[i] - 0.5 * std::log(std::abs(eval_qd(p, g.node(i))));
  if (m == 0) m = default_circle_samples(g, rho);
  const cplx I = circle_integral_dz(
      [&](cplx z) {
        const cplx P = eval_qd(p, z), Pz = eval_qd(p, z, 1);
        const cplx c = eval_vf(chi, z), cz = eval_vf(chi, z, 1);
        const double aP = std::abs(P);
        const double pref = (std::exp(-2.0 * bilinear_sample(w, z)) - 1.0) / aP;
        return pref * (2.0 * std::norm(P) * cz * std::conj(c) + std::norm(c) * Pz * std::conj(P));
      },
      center, rho, m);
  return 2.0 * I.imag();
}

double pairing_gsf(const PolynomialQD& p, const PolynomialQD& pdot, const Region& region, const Grid2D& g) {
  require_off_zeros(p, g);
  const auto terms = singular_terms(p, pdot, region, g);
  ScalarField dens(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    dens[i] = 2.0 * std::norm(eval_qd(pdot, z)) / std::abs(eval_qd(p, z)) - model_at(terms, z);
  }
  return integrate_region(dens, region) + model_mass(terms);
}

double pairing_g(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F,
                 const Region& region) {
  const Grid2D& g = u.grid();
  ScalarField dens(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    const cplx P = eval_qd(p, z), Pd = eval_qd(pdot, z);
    dens[i] = 4.0 * std::exp(-2.0 * u[i]) * (std::norm(Pd) - std::real(F[i] * P * std::conj(Pd)));
  }
  return integrate_region(dens, region);
}

namespace {

// Integral of a delta density: node values delta + model, minus the model mass.
double integrate_with_model(ScalarField dens, const std::vector<SingularTerm>& terms, const Region& region) {
  const Grid2D& g = dens.grid();
  for (std::size_t i = 0; i < g.size(); ++i) dens[i] += model_at(terms, g.node(i));
  return integrate_region(dens, region) - model_mass(terms);
}

}  // namespace

double integrate_delta(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F,
                       const Region& region) {
  return integrate_with_model(delta_field(p, pdot, u, F), singular_terms(p, pdot, region, u.grid()), region);
}

double integrate_delta_holo(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u,
                            const ComplexField& u_z, const Region& region) {
  const PolynomialQD psi = lie_derivative(chi, p);
  return integrate_with_model(delta_holo(p, chi, u, u_z), singular_terms(p, psi, region, u.grid()), region);
}

StokesResult stokes_residual(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u,
                             const ComplexField& u_z, const Disk& disk, int m) {
  StokesResult s;
  s.int_delta = integrate_delta_holo(p, chi, u, u_z, Region{disk, {}});
  s.beta = beta_circle(p, chi, u, disk.center, disk.radius, m);
  s.residual = s.int_delta - s.beta;
  s.scale = std::max({std::abs(s.int_delta), std::abs(s.beta), 1e-30});
  return s;
}

StokesResult stokes_residual(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, const Disk& disk,
                             int m) {
  return stokes_residual(p, chi, u, dz(u), disk, m);
}

double near_disk_radius(const PolynomialQD& p0, double rho) {
  return (2.0 / 3.0) * std::sqrt(std::abs(eval_qd(p0, 0.0, 1))) * std::pow(rho, 1.5);
}

Grid2D ray_grid(const RayGeometry& geo) {
  const double h = 2.0 * geo.half_width / (geo.n - 1);
  return Grid2D(geo.center.value_or(cplx(0.5 * h, 0.0)), geo.half_width, geo.n);
}

namespace {

RayRow ray_row(const PolynomialQD& p0, const PolynomialQD& pdot, double t, const Grid2D& g, double rho,
               const SolveConfig& config) {
  RayRow row;
  row.t = t;
  row.R = std::sqrt(t) * near_disk_radius(p0, rho);
  try {
    const PolynomialQD p = p0.scaled(t);
    SolveResult sol = solve_u_unchecked({p, g}, config);
    row.iterations = sol.report.iterations;
    row.final_residual = sol.report.final_residual_inf;
    row.converged = sol.report.converged;
    if (!row.converged) throw Error(ErrorKind::ConvergenceFailure, "Newton did not converge");
    const ScalarField& u = sol.u;

    const ComplexField F = solve_F(p, pdot, u, config);
    const Region model{WholeInterior{}, {}};
    row.g_value = pairing_g(p, pdot, u, F, model);
    row.gsf_value = pairing_gsf(p, pdot, model, g);
    row.diff = row.g_value - row.gsf_value;

    const Disk near{cplx(0.0, 0.0), rho};
    row.near_integral = integrate_delta(p, pdot, u, F, Region{near, {}});

    const PolynomialVF chi = chi_for_variation(pdot, eval_qd(p, 0.0, 1));
    const ComplexField u_z = dz(u);
    const StokesResult st = stokes_residual(p, chi, u, u_z, near);
    row.beta_boundary = st.beta;
    row.stokes_residual = st.residual;

    const ComplexField FX = F_from_vectorfield(chi, u, u_z);
    const auto mask = region_mask(g, Region{near, {}});
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mask[i]) row.mu_max = std::max(row.mu_max, std::abs(FX[i] - F[i]));
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<RayRow> ray_scan(const PolynomialQD& p0, const PolynomialQD& pdot, const std::vector<double>& t_list,
                             const RayGeometry& geo, const SolveConfig& config, int workers) {
  if (p0.degree() != 1 || p0.coeffs()[0] != cplx{})
    throw Error(ErrorKind::ValidationError, "ray scan needs P0 = c z with a single zero at the origin");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0)) throw Error(ErrorKind::ValidationError, "ray scan needs positive t");
    if (i > 0 && !(t_list[i] > t_list[i - 1])) throw Error(ErrorKind::ValidationError, "t list must increase");
  }
  if (workers < 1) throw Error(ErrorKind::ValidationError, "worker count must be positive");
  const Grid2D g = ray_grid(geo);
  check_disk_inside(g, 0.0, geo.near_rho);
  validate_problem({p0, g});

  std::vector<RayRow> rows(t_list.size());
  const auto count = static_cast<int>(t_list.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (int i = 0; i < count; ++i)
    rows[static_cast<std::size_t>(i)] = ray_row(p0, pdot, t_list[static_cast<std::size_t>(i)], g, geo.near_rho, config);
  return rows;
}

RaySlope ray_slope(const std::vector<RayRow>& rows) {
  std::vector<double> x, y, yc;
  for (const RayRow& r : rows) {
    if (r.failed || r.near_integral == 0.0) continue;
    x.push_back(r.R);
    y.push_back(std::log(std::abs(r.near_integral)));
    yc.push_back(y.back() + std::log(r.t) + 0.5 * std::log(r.R));
  }
  RaySlope out;
  out.points = static_cast<int>(x.size());
  if (x.size() < 2) {
    out.slope = out.corrected = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  auto fit = [&](const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += ys[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
  };
  out.slope = fit(y);
  out.corrected = fit(yc);
  return out;
}

}  // namespace hslab
