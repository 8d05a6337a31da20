#pragma once

#include <vector>

#include "hslab/error.hpp"
#include "hslab/grid.hpp"
#include "hslab/polynomial.hpp"

namespace hslab {

// Delta u = 4(e^{2u} - e^{-2u}|P|^2) on a square chart, u = (1/2)log|P| on the ring.
struct SelfDualityProblem {
  PolynomialQD p;
  Grid2D grid;
};

struct SolveConfig {
  double newton_tol = 1e-10;  // infinity norm of the residual
  int max_newton = 50;
  double cg_rel_tol = 1e-12;
  int cg_max_iters = 0;  // 0 means 10 n^2
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_halvings = 40;

  int cg_iteration_cap(const Grid2D& g) const { return cg_max_iters > 0 ? cg_max_iters : 10 * g.n() * g.n(); }
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double final_residual_inf = 0.0;
  double energy = 0.0;
  bool converged = false;
  long cg_iterations = 0;
  std::vector<double> energy_history;  // energy of every Newton iterate, starting guess first
};

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

class SolveFailure : public Error {
 public:
  SolveFailure(const std::string& what, SolveResult result)
      : Error(ErrorKind::ConvergenceFailure, what), result_(std::move(result)) {}
  const SolveResult& result() const noexcept { return result_; }

 private:
  SolveResult result_;
};

// Throws ValidationError when a node lies within 1e-3 h of a zero, or a
// zero inside the chart is not simple.
void validate_problem(const SelfDualityProblem& problem);

ScalarField semiflat_logdensity(const PolynomialQD& p, const Grid2D& g);

// Damped Newton on the convex discrete energy, CG for each step.
// Throws SolveFailure (carrying the last iterate and report) when
// max_newton is exhausted.
SolveResult solve_u(const SelfDualityProblem& problem, const SolveConfig& config = {});

// Same, but reports non-convergence through report.converged instead of throwing.
SolveResult solve_u_unchecked(const SelfDualityProblem& problem, const SolveConfig& config = {});

// Interior residual Delta_h u - 4(e^{2u} - e^{-2u}|P|^2); NaN on the ring.
ScalarField residual_u(const ScalarField& u, const PolynomialQD& p);

// sum over grid edges of (1/2)(u_a - u_b)^2 plus h^2 sum over interior nodes
// of 2e^{2u} + 2e^{-2u}|P|^2. Ring-to-ring edges are constant and left out.
double energy(const ScalarField& u, const PolynomialQD& p);

}  // namespace hslab
