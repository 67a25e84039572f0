#pragma once

#include <utility>
#include <vector>

#include "nlclaw/grid.hpp"
#include "nlclaw/solver.hpp"

namespace nlclaw {

/// Riemann invariants of isentropic gas dynamics with pressure rho^3/3:
/// mu = rho + v, lam = rho - v.
struct EulerState {
  GridFunction1D mu;
  GridFunction1D lam;

  GridFunction1D rho() const;
  GridFunction1D vel() const;
  /// Throws GridMismatch unless mu and lam share a grid.
  void validate() const;
};

/// Throws GridMismatch when the grids differ.
EulerState to_invariants(const GridFunction1D& rho, const GridFunction1D& vel);
std::pair<GridFunction1D, GridFunction1D> from_invariants(const EulerState& s);

struct EulerTrajectory {
  std::vector<double> times;
  std::vector<EulerState> states;
  double epsilon = 0.0;
  double dt = 0.0;
  /// The two scalar runs the states were assembled from.
  Trajectory mu;
  Trajectory lam;
  /// Some stored state has rho < 0 somewhere (vacuum is not excluded).
  bool negative_density = false;
};

struct EulerOptions {
  /// Evolves lam with the wrong sign of its velocity (mutation testing only).
  bool flip_lambda = false;
};

/// mu_t + (eta * mu) mu_x = 0 and lam_t - (eta * lam) lam_x = 0 on a common
/// step dt = cfl dx / max(sup|mu0|, sup|lam0|) (or cfg.fixed_dt). The two runs
/// are independent and may execute concurrently.
EulerTrajectory solve_isentropic(const ScalarFn& rho0, const ScalarFn& vel0, const GridSpec& grid,
                                 double epsilon, double T, const SolverConfig& cfg,
                                 const EulerOptions& opt = {});

/// Grid-data overload: values between nodes are linear interpolants.
EulerTrajectory solve_isentropic(const GridFunction1D& rho0, const GridFunction1D& vel0,
                                 double epsilon, double T, const SolverConfig& cfg,
                                 const EulerOptions& opt = {});

/// Test functions phi(t, x) = B((t - tc)/tau) B((x - xc)/w), B(s) = exp(-1/(1 - s^2)).
struct ResidualBank {
  /// Spatial window holding the bumps; a >= b picks the middle half of the grid.
  double a = 0.0;
  double b = 0.0;
  int space_bumps = 5;
};

/// Max over the bank of |int int rho phi_t + m phi_x| and
/// |int int m phi_t + (m v + rho^3/3) phi_x|, m = rho v. Rectangle rule in x,
/// trapezoid weights over the stored times, and phi_t, phi_x replaced by
/// central differences of phi on the same nodes, so constants give exactly 0.
/// Needs >= 3 states.
std::pair<double, double> conservative_residual(const std::vector<EulerState>& states,
                                                const std::vector<double>& times,
                                                const ResidualBank& bank = {});

} // namespace nlclaw
