#include "hslab/cg.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/kernels.hpp"

namespace hslab {

CgResult solve_shifted_laplacian(const Grid2D& g, const std::vector<double>& k, const std::vector<double>& rhs,
                                 std::vector<double>& x, double rel_tol, int max_iters) {
  const int n = g.n();
  const std::size_t N = g.size();
  const double h2 = g.h() * g.h();
  x.resize(N, 0.0);
  for (int j = 0; j < n; ++j) {
    x[g.index(j, 0)] = x[g.index(j, n - 1)] = 0.0;
    x[g.index(0, j)] = x[g.index(n - 1, j)] = 0.0;
  }

  std::vector<double> dinv(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) dinv[i] = 1.0 / (4.0 / h2 + k[i]);

  std::vector<double> r(N), z(N), p(N), q(N);
  kernels::apply_shifted(n, g.h(), k.data(), x.data(), q.data());
  for (std::size_t i = 0; i < N; ++i) r[i] = rhs[i] - q[i];
  // Ring entries of r are junk (rhs may be nonzero there); zero them.
  for (int j = 0; j < n; ++j) {
    r[g.index(j, 0)] = r[g.index(j, n - 1)] = 0.0;
    r[g.index(0, j)] = r[g.index(n - 1, j)] = 0.0;
  }

  const double bnorm = std::sqrt(kernels::interior_dot(n, rhs.data(), rhs.data()));
  CgResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  double rnorm = std::sqrt(kernels::interior_dot(n, r.data(), r.data()));
  if (rnorm <= rel_tol * bnorm) {
    res.relative_residual = rnorm / bnorm;
    res.converged = true;
    return res;
  }

  kernels::multiply(N, dinv.data(), r.data(), z.data());
  p = z;
  double rz = kernels::interior_dot(n, r.data(), z.data());
  for (int it = 1; it <= max_iters; ++it) {
    kernels::apply_shifted(n, g.h(), k.data(), p.data(), q.data());
    const double alpha = rz / kernels::interior_dot(n, p.data(), q.data());
    kernels::axpy(N, alpha, p.data(), x.data());
    kernels::axpy(N, -alpha, q.data(), r.data());
    rnorm = std::sqrt(kernels::interior_dot(n, r.data(), r.data()));
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    if (rnorm <= rel_tol * bnorm) {
      res.converged = true;
      return res;
    }
    kernels::multiply(N, dinv.data(), r.data(), z.data());
    const double rz_new = kernels::interior_dot(n, r.data(), z.data());
    kernels::xpby(N, z.data(), rz_new / rz, p.data());
    rz = rz_new;
  }
  return res;
}

}  // namespace hslab
