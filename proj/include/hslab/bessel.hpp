#pragma once

namespace hslab {

// Modified Bessel function I_0. Power series up to |x| = 12, optimally
// truncated asymptotic expansion beyond. Throws Overflow for |x| > 700.
double i0(double x);

// e^{-x} I_0(x) for x >= 0, never overflows. Throws DomainError for x < 0.
double i0_scaled(double x);

// I_0(gamma d) / I_0(gamma R): the Dirichlet solution of (Delta - gamma^2) v = 0
// on the disk of radius R with unit boundary values, at distance d from the centre.
double envelope(double gamma, double dist_center, double R);

}  // namespace hslab
