#pragma once

#include "hslab/grid.hpp"
#include "hslab/polynomial.hpp"
#include "hslab/selfduality.hpp"

namespace hslab {

// (1/2) Pdot / P at every node.
ComplexField semiflat_F(const PolynomialQD& p, const PolynomialQD& pdot, const Grid2D& g);

// (Delta_h - 8(e^{2u} + e^{-2u}|P|^2)) F = -8 e^{-2u} conj(P) Pdot inside, with
// F = (1/2) Pdot/P on the ring, or the ring of *boundary when given.
// Real and imaginary parts are separate SPD solves.
ComplexField solve_F(const PolynomialQD& p, const PolynomialQD& pdot, const ScalarField& u,
                     const SolveConfig& config = {}, const ComplexField* boundary = nullptr);

// F_X = chi_z + 2 chi u_z with u_z from central differences.
ComplexField F_from_vectorfield(const PolynomialVF& chi, const ScalarField& u);
ComplexField F_from_vectorfield(const PolynomialVF& chi, const ScalarField& u, const ComplexField& u_z);

// Interior residual of the variation equation; NaN on the ring.
ComplexField residual_F(const ComplexField& F, const ScalarField& u, const PolynomialQD& p, const PolynomialQD& pdot);

// Max |residual| over nodes at least `collar` rings in from the boundary.
double collar_max_abs(const ComplexField& f, int collar);

}  // namespace hslab
