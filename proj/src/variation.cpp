#include "hslab/variation.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/cg.hpp"
#include "hslab/error.hpp"

namespace hslab {

ComplexField semiflat_F(const PolynomialQD& p, const PolynomialQD& pdot, const Grid2D& g) {
  validate_problem({p, g});
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    out[i] = 0.5 * eval_qd(pdot, z) / eval_qd(p, z);
  }
  return out;
}

ComplexField solve_F(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const SolveConfig& config,
                     const ComplexField* boundary) {
  config.validate();
  const Grid2D& g = u.grid();
  if (boundary && !(boundary->grid() == g)) throw Error(ErrorKind::ValidationError, "boundary field on another grid");
  const int n = g.n();
  const std::size_t N = g.size();
  const double inv_h2 = 1.0 / (g.h() * g.h());

  ComplexField F = boundary ? *boundary : semiflat_F(p, pdot, g);
  std::vector<double> kdiag(N, 0.0), rhs_re(N, 0.0), rhs_im(N, 0.0);
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) {
      const std::size_t i = g.index(j, k);
      const cplx z = g.node(j, k);
      const cplx P = eval_qd(p, z);
      const double em = std::exp(-2.0 * u[i]);
      kdiag[i] = 8.0 * (std::exp(2.0 * u[i]) + em * std::norm(P));
      cplx b = 8.0 * em * std::conj(P) * eval_qd(pdot, z);
      // Known ring neighbours move to the right-hand side.
      if (j == 1) b += F(0, k) * inv_h2;
      if (j == n - 2) b += F(n - 1, k) * inv_h2;
      if (k == 1) b += F(j, 0) * inv_h2;
      if (k == n - 2) b += F(j, n - 1) * inv_h2;
      rhs_re[i] = b.real();
      rhs_im[i] = b.imag();
    }

  const int cap = config.cg_iteration_cap(g);
  std::vector<double> xr(N, 0.0), xi(N, 0.0);
  const CgResult cr = solve_shifted_laplacian(g, kdiag, rhs_re, xr, config.cg_rel_tol, cap);
  const CgResult ci = solve_shifted_laplacian(g, kdiag, rhs_im, xi, config.cg_rel_tol, cap);
  if (!cr.converged || !ci.converged)
    throw Error(ErrorKind::ConvergenceFailure, "CG for the variation equation did not reach cg_rel_tol");
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) F(j, k) = {xr[g.index(j, k)], xi[g.index(j, k)]};
  return F;
}

ComplexField F_from_vectorfield(const PolynomialVF& chi, const ScalarField& u, const ComplexField& u_z) {
  const Grid2D& g = u.grid();
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.node(i);
    out[i] = eval_vf(chi, z, 1) + 2.0 * eval_vf(chi, z) * u_z[i];
  }
  return out;
}

ComplexField F_from_vectorfield(const PolynomialVF& chi, const ScalarField& u) {
  return F_from_vectorfield(chi, u, dz(u));
}

ComplexField residual_F(const ComplexField& F, const ScalarField& u, const PolynomialQD& p, const PolynomialQD& pdot) {
  const Grid2D& g = F.grid();
  const int n = g.n();
  ComplexField res = laplacian(F);
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) {
      const std::size_t i = g.index(j, k);
      const cplx z = g.node(j, k);
      const cplx P = eval_qd(p, z);
      const double em = std::exp(-2.0 * u[i]);
      res[i] += -8.0 * (std::exp(2.0 * u[i]) + em * std::norm(P)) * F[i] + 8.0 * em * std::conj(P) * eval_qd(pdot, z);
    }
  return res;
}

double collar_max_abs(const ComplexField& f, int collar) {
  const int n = f.grid().n();
  double m = 0.0;
  for (int k = collar; k < n - collar; ++k)
    for (int j = collar; j < n - collar; ++j) m = std::max(m, std::abs(f(j, k)));
  return m;
}

}  // namespace hslab
