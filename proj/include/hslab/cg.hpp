#pragma once

#include <vector>

#include "hslab/grid.hpp"

namespace hslab {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned CG for (-Delta_h + k) x = rhs on interior nodes with
// homogeneous Dirichlet ring (k >= 0). x holds the initial guess on entry;
// its ring is forced to zero. Stops once |r| <= rel_tol |rhs|.
CgResult solve_shifted_laplacian(const Grid2D& g, const std::vector<double>& k, const std::vector<double>& rhs,
                                 std::vector<double>& x, double rel_tol, int max_iters);

}  // namespace hslab
