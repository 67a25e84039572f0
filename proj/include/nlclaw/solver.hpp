#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"
#include "nlclaw/kernel.hpp"

namespace nlclaw {

/// Which nonlocal equation a trajectory solves.
enum class Mode {
  NN,           ///< u_t + (eta * u) u_x = 0
  Conservative, ///< u_t + ((eta * u) u)_x = 0
  VelocityReg,  ///< u_t + (eta * f'(u)) u_x = 0
  FluxReg       ///< u_t + f'(eta * u) u_x = 0
};

std::string to_string(Mode mode);
/// Accepts "nn", "conservative", "velocity_reg", "flux_reg". Throws InvalidArgument.
Mode parse_mode(const std::string& name);

struct SolverConfig {
  double dx = 1e-3;
  double cfl = 0.5;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  /// Extra padding, in spatial units, added beyond sup|u0| * T + epsilon.
  double margin = 1.0;
  /// Store every `stride`-th step; 0 picks a stride giving at most
  /// `max_snapshots` stored states. The final state is always stored.
  std::size_t stride = 0;
  std::size_t max_snapshots = 200;
  /// Positive value overrides the CFL-derived step (it must still satisfy the
  /// CFL bound).
  double fixed_dt = 0.0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Time-stamped states on one fixed grid, plus per-step bookkeeping.
struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction1D> states;
  double epsilon = 0.0;
  Mode mode = Mode::NN;
  /// Nominal step (the last step may be shorter; conservative runs adapt it).
  double dt = 0.0;

  /// Per executed step: fixed-point iterations used (empty for conservative runs).
  std::vector<int> picard_iterations;
  /// Steps whose fixed-point iteration hit a two-cycle between discrete
  /// states at an expansive discontinuity and was settled by velocity averaging.
  int ambiguous_steps = 0;
  /// TV, min and max after every executed step; index 0 is the initial state.
  std::vector<double> step_tv;
  std::vector<double> step_min;
  std::vector<double> step_max;

  const GridFunction1D& initial() const { return states.front(); }
  const GridFunction1D& final() const { return states.back(); }
  double final_time() const { return times.back(); }
  /// Index of the stored state whose time is closest to t.
  std::size_t nearest_index(double t) const;
};

/// Grid on [a - pad, b + pad] with pad = sup_u0 * T + epsilon + cfg.margin,
/// where [a, b] is the interval on which the data varies.
GridSpec padded_grid(double a, double b, double sup_u0, double T, double epsilon,
                     const SolverConfig& cfg);

/// One self-consistent semi-Lagrangian step of the nonlocal equation:
/// Picard iteration on the new-time velocity eta * u^{n+1}, trapezoidal feet
/// x_i - dt/2 (v^{n+1}(x_i) + v^n(foot_i)), and piecewise-linear interpolation
/// of u_n at the feet. Throws CflViolation or PicardDivergence.
GridFunction1D step_nn(const GridFunction1D& u_n, const Mollifier& m, double dt,
                       const SolverConfig& cfg, int* iterations = nullptr);

/// Solves u_t + orientation * (eta * u) u_x = 0 to time T. The solver carries
/// the backward characteristic map x -> y_{t,x}(0) on the grid and sets
/// u(t, x_i) = u0(y_{t,x_i}(0)), so values are always samples of the initial
/// profile. orientation = -1 gives the mirrored equation used by the second
/// Euler invariant.
Trajectory solve_nn(const InitialData1D& u0, double epsilon, double T, const SolverConfig& cfg,
                    double orientation = 1.0);

/// Velocity- or flux-regularised nonlocal transport for a general flux
/// (mode must be NN, VelocityReg or FluxReg).
Trajectory solve_general(const InitialData1D& u0, const FluxSpec& flux, double epsilon, double T,
                         const SolverConfig& cfg, Mode mode);

/// Conservative nonlocal comparison equation, first-order upwind finite
/// volumes with interface velocity averaged from eta * u. No maximum principle.
Trajectory solve_conservative_nonlocal(const GridFunction1D& u0, double epsilon, double T,
                                       const SolverConfig& cfg);

/// Traces characteristics dy/ds = (eta * u)(s, y) backwards through a stored
/// NN trajectory (velocity linearly interpolated between stored times).
class CharacteristicTracer {
public:
  CharacteristicTracer(const Trajectory& traj, const Mollifier& m);
  /// y_{t,x}(0) by the explicit midpoint method with `substeps` steps (0: one
  /// step per stored interval, at least 200).
  double foot_at_zero(double t, double x, std::size_t substeps = 0) const;
  double velocity(double s, double y) const;

private:
  std::vector<double> times_;
  std::vector<std::vector<double>> velocities_;
  double x0_;
  double dx_;
};

double backward_characteristic(const Trajectory& traj, const Mollifier& m, double t, double x);

} // namespace nlclaw
