#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hslab/grid.hpp"
#include "hslab/polynomial.hpp"
#include "hslab/selfduality.hpp"

namespace hslab {

// 4e^{-2u}(|Pdot|^2 - Re(F P conj(Pdot))) - 2|Pdot|^2/|P|, per unit dx dy.
ScalarField delta_field(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F);

// The same density written in w = u - (1/2)log|P| and mu = F - (1/2)Pdot/P.
ScalarField delta_shifted(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& w, const ComplexField& mu);

// delta for Pdot = L_X P and F = F_X, expanded in chi, P and the supplied u_z.
ScalarField delta_holo(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, const ComplexField& u_z);

// Counterclockwise integral of beta = 2 Im((e^{-2u} - 1/|P|)(2|P|^2 chi_z conj(chi) + |chi|^2 P_z conj(P)) dz).
// The prefactor is formed as (e^{-2w} - 1)/|P| with w = u - (1/2)log|P| interpolated
// bilinearly and |P| exact. m = 0 picks default_circle_samples.
double beta_circle(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, cplx center, double rho,
                   int m = 0);

// Integral of 2|Pdot|^2/|P| over the region. Near each simple zero z0 in the
// region the model m(z) = 2|Pdot(z0)|^2/(|P_z(z0)||z - z0|) times a smooth cutoff of
// radius eps = min(16h, distance to the region edge) is subtracted at the
// nodes and its exact integral 1.5 pi |Pdot(z0)|^2 eps/|P_z(z0)| added back.
// A zero closer than 4h to the region edge, or a non-simple zero in the
// region, is a ValidationError.
double pairing_gsf(const PolynomialQD& p, const PolynomialQD& pdot, const Region& region, const Grid2D& g);

// Integral of 4e^{-2u}(|Pdot|^2 - Re(F P conj(Pdot))); plain node quadrature.
double pairing_g(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F,
                 const Region& region);

// Integral of delta_field over the region, bounded part and singular part
// each with its own rule (same node set, so region-edge errors cancel).
double integrate_delta(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u, const ComplexField& F,
                       const Region& region);

// Same for delta_holo.
double integrate_delta_holo(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u,
                            const ComplexField& u_z, const Region& region);

struct StokesResult {
  double int_delta = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // int_delta - beta
  double scale = 0.0;     // max(|int_delta|, |beta|, 1e-30)
  double relative() const { return std::abs(residual) / scale; }
};

// u_z from central differences of u unless supplied.
StokesResult stokes_residual(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u, const Disk& disk,
                             int m = 0);
StokesResult stokes_residual(const PolynomialQD& p, const PolynomialVF& chi, const ScalarField& u,
                             const ComplexField& u_z, const Disk& disk, int m = 0);

struct RayGeometry {
  double half_width = 6.0;
  int n = 257;
  std::optional<cplx> center;  // unset means (h/2, 0), so no node sits on the zero
  double near_rho = 1.5;  // chart radius of the near disk
};

struct RayRow {
  double t = 0.0;
  double R = 0.0;  // |phi|-radius of the near disk, t^{1/2} r0
  double g_value = 0.0;
  double gsf_value = 0.0;
  double diff = 0.0;
  double near_integral = 0.0;  // integral of delta over the near disk with the solved F
  double beta_boundary = 0.0;
  double stokes_residual = 0.0;
  double mu_max = 0.0;  // max |F_X - F| over the near disk
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

// Flat radius of the near disk for P0 = c z: (2/3)|c|^{1/2} rho^{3/2}.
double near_disk_radius(const PolynomialQD& p0, double rho);

Grid2D ray_grid(const RayGeometry& geo);

// One row per t with P = t P0 (P0 = c z only). Rows run concurrently on up to
// `workers` threads and come back in t order; a failing row is flagged.
std::vector<RayRow> ray_scan(const PolynomialQD& p0, const PolynomialQD& pdot, const std::vector<double>& t_list,
                             const RayGeometry& geo, const SolveConfig& config = {}, int workers = 1);

struct RaySlope {
  double slope = 0.0;      // least squares of log|near| against R
  double corrected = 0.0;  // same after adding log t + (1/2) log R
  int points = 0;
};

RaySlope ray_slope(const std::vector<RayRow>& rows);

}  // namespace hslab
