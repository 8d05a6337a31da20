#pragma once

#include <optional>

#include "hslab/grid.hpp"
#include "hslab/polynomial.hpp"

namespace hslab {

enum class Stencil { Eight = 8, Sixteen = 16 };

// Graph shortest-path distance to the zero set in the metric |P|^{1/2}|dz|.
// Nodes within 2h of a zero start from the local analytic distance. Dijkstra
// gives an upper bound: up to 8.3% (8-neighbour) or 2.8% (16-neighbour)
// anisotropy overshoot plus O(h).
ScalarField radius_field(const PolynomialQD& p, const Grid2D& g, Stencil stencil = Stencil::Sixteen);

// Shortest distance between distinct zeros inside the chart; none when the
// chart holds a single zero.
std::optional<double> threshold(const PolynomialQD& p, const Grid2D& g, Stencil stencil = Stencil::Sixteen);

// Local flat distance from z to a zero z0 of order m: |a|^{1/2} |z - z0|^{m/2+1} / (m/2+1)
// with a = P^{(m)}(z0)/m!.
double local_zero_distance(const PolynomialQD& p, const Zero& z0, cplx z);

}  // namespace hslab
