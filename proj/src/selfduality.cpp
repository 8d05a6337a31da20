#include "hslab/selfduality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hslab/cg.hpp"
#include "hslab/kernels.hpp"

namespace hslab {

namespace {

std::vector<double> abs_p_squared(const PolynomialQD& p, const Grid2D& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::norm(eval_qd(p, g.node(i)));
  return out;
}

double energy_impl(const Grid2D& g, const double* u, const std::vector<double>& p2) {
  const int n = g.n();
  const double h2 = g.h() * g.h();
  std::vector<double> term(g.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const std::size_t i = g.index(j, k);
      const bool in = !g.is_boundary(j, k);
      double t = 0.0;
      if (j + 1 < n && (in || !g.is_boundary(j + 1, k))) {
        const double d = u[i + 1] - u[i];
        t += 0.5 * d * d;
      }
      if (k + 1 < n && (in || !g.is_boundary(j, k + 1))) {
        const double d = u[i + static_cast<std::size_t>(n)] - u[i];
        t += 0.5 * d * d;
      }
      if (in) t += h2 * (2.0 * std::exp(2.0 * u[i]) + 2.0 * std::exp(-2.0 * u[i]) * p2[i]);
      term[i] = t;
    }
  }
  std::vector<unsigned char> all(g.size(), 1);
  return kernels::masked_sum(n, term.data(), all.data());
}

void residual_impl(const Grid2D& g, const double* u, const std::vector<double>& p2, double* res) {
  const int n = g.n();
  kernels::laplacian(n, g.h(), u, res);
#pragma omp parallel for schedule(static)
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) {
      const std::size_t i = g.index(j, k);
      res[i] -= 4.0 * (std::exp(2.0 * u[i]) - std::exp(-2.0 * u[i]) * p2[i]);
    }
}

}  // namespace

void SolveConfig::validate() const {
  if (!(newton_tol > 0.0) || max_newton <= 0 || !(cg_rel_tol > 0.0) || cg_max_iters < 0 || !(armijo_c1 > 0.0) ||
      !(armijo_c1 < 1.0) || !(backtrack > 0.0) || !(backtrack < 1.0) || max_halvings <= 0)
    throw Error(ErrorKind::ValidationError, "solver settings must be positive (c1 and backtrack in (0,1))");
}

void validate_problem(const SelfDualityProblem& problem) {
  const PolynomialQD& p = problem.p;
  const Grid2D& g = problem.grid;
  if (p.is_zero()) throw Error(ErrorKind::ZeroDifferential, "self-duality problem with P = 0");
  if (p.degree() == 0) return;
  const double L = g.half_width(), h = g.h();
  for (const Zero& z : find_zeros(p)) {
    const cplx rel = z.location - g.center();
    if (std::abs(rel.real()) > L + 1e-3 * h || std::abs(rel.imag()) > L + 1e-3 * h) continue;
    if (!z.simple) throw Error(ErrorKind::ValidationError, "P has a non-simple zero inside the chart");
    const double s = (rel.real() + L) / h, t = (rel.imag() + L) / h;
    const cplx nearest = g.node(static_cast<int>(std::lround(s)), static_cast<int>(std::lround(t)));
    if (std::abs(nearest - z.location) < 1e-3 * h)
      throw Error(ErrorKind::ValidationError, "a grid node sits on a zero of P; shift the grid center");
  }
}

ScalarField semiflat_logdensity(const PolynomialQD& p, const Grid2D& g) {
  validate_problem({p, g});
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = 0.5 * std::log(std::abs(eval_qd(p, g.node(i))));
  return out;
}

ScalarField residual_u(const ScalarField& u, const PolynomialQD& p) {
  const Grid2D& g = u.grid();
  ScalarField res(g);
  residual_impl(g, u.data(), abs_p_squared(p, g), res.data());
  return res;
}

double energy(const ScalarField& u, const PolynomialQD& p) {
  return energy_impl(u.grid(), u.data(), abs_p_squared(p, u.grid()));
}

SolveResult solve_u_unchecked(const SelfDualityProblem& problem, const SolveConfig& config) {
  config.validate();
  const Grid2D& g = problem.grid;
  const int n = g.n();
  const std::size_t N = g.size();
  const double h2 = g.h() * g.h();
  const auto p2 = abs_p_squared(problem.p, g);

  ScalarField u = semiflat_logdensity(problem.p, g);
  double ring_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (g.is_boundary(j, k)) ring_min = std::min(ring_min, u(j, k));
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) u(j, k) = std::max(u(j, k), ring_min - 5.0);

  SolveReport rep;
  std::vector<double> res(N), kdiag(N, 0.0), step(N), trial(N);
  double E = energy_impl(g, u.data(), p2);
  rep.energy_history.push_back(E);
  const int cg_cap = config.cg_iteration_cap(g);

  for (int it = 0;; ++it) {
    residual_impl(g, u.data(), p2, res.data());
    const double rinf = kernels::interior_max_abs(n, res.data());
    rep.iterations = it;
    rep.final_residual_inf = rinf;
    rep.energy = E;
    if (rinf <= config.newton_tol) {
      rep.converged = true;
      break;
    }
    if (it >= config.max_newton || !std::isfinite(rinf)) break;

    for (int k = 1; k < n - 1; ++k)
      for (int j = 1; j < n - 1; ++j) {
        const std::size_t i = g.index(j, k);
        kdiag[i] = 8.0 * std::exp(2.0 * u[i]) + 8.0 * std::exp(-2.0 * u[i]) * p2[i];
      }
    std::fill(step.begin(), step.end(), 0.0);
    const CgResult cg = solve_shifted_laplacian(g, kdiag, res, step, config.cg_rel_tol, cg_cap);
    rep.cg_iterations += cg.iterations;

    // Energy gradient is -h^2 res, so the directional derivative along step is:
    const double slope = -h2 * kernels::interior_dot(n, res.data(), step.data());
    // Tolerance for rounding in E once the decrease reaches machine level.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(E);
    double alpha = 1.0;
    bool accepted = false;
    double E_new = E;
    for (int hv = 0; hv <= config.max_halvings; ++hv) {
      trial = u.values();
      kernels::axpy(N, alpha, step.data(), trial.data());
      E_new = energy_impl(g, trial.data(), p2);
      if (E_new <= E + config.armijo_c1 * alpha * slope + noise) {
        accepted = true;
        break;
      }
      alpha *= config.backtrack;
    }
    if (!accepted) break;
    u.values().swap(trial);
    E = E_new;
    rep.energy_history.push_back(E);
  }
  return {std::move(u), std::move(rep)};
}

SolveResult solve_u(const SelfDualityProblem& problem, const SolveConfig& config) {
  SolveResult r = solve_u_unchecked(problem, config);
  if (!r.report.converged) {
    const std::string msg = "Newton stopped after " + std::to_string(r.report.iterations) +
                            " iterations with residual " + std::to_string(r.report.final_residual_inf);
    throw SolveFailure(msg, std::move(r));
  }
  return r;
}

}  // namespace hslab
