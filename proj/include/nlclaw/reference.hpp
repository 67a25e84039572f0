#pragma once

#include <cstddef>
#include <vector>

#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"
#include "nlclaw/solver.hpp"

namespace nlclaw {

/// Entropy solution of the Burgers Riemann problem at xi = x/t.
double burgers_riemann_exact(const RiemannData& d, double xi);

/// Burgers entropy solution by the Lax-Oleinik formula
///   u(t, x) = (x - y*) / t,  y* = argmin_y U0(y) + (x - y)^2 / (2t),
/// with u0 the piecewise-linear interpolant of the samples (constant beyond the
/// ends) and U0 its exact antiderivative. The minimiser is found exactly on
/// each cell; the search uses monotonicity of y* in x. Ties go to the smaller y.
GridFunction1D lax_oleinik_solve(const GridFunction1D& u0, double t, const GridSpec& grid);

/// First-order Godunov scheme with the exact convex Riemann flux. Ghost cells
/// repeat the end values. Throws InvalidFlux for a non-convex flux and
/// InvalidArgument for cfl outside (0, 0.9].
Trajectory godunov_solve(const GridFunction1D& u0, const FluxSpec& flux, double T,
                         double cfl = 0.9, std::size_t max_snapshots = 200);

} // namespace nlclaw
