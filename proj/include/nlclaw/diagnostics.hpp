#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"
#include "nlclaw/kernel.hpp"
#include "nlclaw/solver.hpp"

namespace nlclaw {

/// Closed intervals [first, second].
using Intervals = std::vector<std::pair<double, double>>;

/// One named check: measured value against threshold. `required` is false
/// when the contract of the trajectory's mode waives the check (it is still
/// evaluated and reported).
struct CheckResult {
  std::string name;
  bool passed = false;
  bool required = true;
  double measured = 0.0;
  double threshold = 0.0;
  std::string realises; ///< property the check stands for
};

struct DiagnosticsReport {
  std::string contract; ///< "nn" (max principle) or "conservative" (mass)
  std::vector<CheckResult> checks;

  bool all_required_pass() const;
  /// nullptr when absent.
  const CheckResult* find(const std::string& name) const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void append(const DiagnosticsReport& other);
};

/// Every tolerance used by the checks.
struct DiagnosticTolerances {
  /// Slack on the max principle, relative to max(1, sup|u0|).
  double max_principle = 1e-12;
  /// Slack on stepwise TV growth, relative to max(1, TV(u0)).
  double tv_step = 1e-9;
  /// Allowed terminal TV loss as a fraction of TV(u0).
  double tv_deficit = 0.01;
  double lipschitz_factor = 1.05;
  /// The L1 time-Lipschitz ratio uses stored states at least this fraction of
  /// the final time apart.
  double lipschitz_span = 0.1;
  double stability_factor = 1.05;
  /// Conservative runs: allowed mass drift after the far-field flux correction.
  double mass = 1e-8;
  double oleinik = 1e-9;
};

/// 1/max(-u0') from forward differences; infinity when u0 never decreases.
double catastrophe_time(const GridFunction1D& u0);

/// Lower bound D / (2 sup|u0|) on the time before the fronts issued from
/// breakpoints at minimum gap D can interact.
double secondary_horizon(double min_gap, double sup_u0);

struct FrontSpeed {
  double speed = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Position where u crosses `level` (linear interpolation between the
/// bracketing nodes). Throws NoCrossing / MultipleCrossings.
double level_crossing(const GridFunction1D& u, double level);

/// Least-squares slope of level_crossing over the stored states with time in
/// [t0, t1]. Needs at least three such states (InvalidArgument otherwise).
FrontSpeed measure_front_speed(const Trajectory& traj, double level, double t0, double t1);

/// Max principle, stepwise TV, terminal TV deficit and the L1 time-Lipschitz
/// bound (over consecutive stored states). Conservative trajectories get a mass
/// check instead of a required max principle.
DiagnosticsReport check_invariants(const Trajectory& traj,
                                   const DiagnosticTolerances& tol = {});

struct StabilityReport {
  double constant = 0.0; ///< C = sup eta * (TV u0 + TV v0)
  std::vector<double> times;
  std::vector<double> distances;
  std::vector<double> bounds; ///< e^{C t} * d0 * factor
  CheckResult check;
};

/// Compares two trajectories stored at the same times on the same grid.
/// Throws GridMismatch / InvalidArgument when they are not comparable.
StabilityReport stability_envelope(const Trajectory& u, const Trajectory& v, const Mollifier& m,
                                   const DiagnosticTolerances& tol = {});

/// Forward differences (u_{i+1} - u_i)/dx <= C + tol outside `excluded`; a
/// difference is skipped when its cell meets an excluded interval.
CheckResult oleinik_check(const GridFunction1D& u, double C, const Intervals& excluded,
                          const DiagnosticTolerances& tol = {});

/// Midpoints of the runs of consecutive cells where u drops by at least
/// min_drop in total, for locating shocks in a reference profile.
std::vector<double> find_shocks(const GridFunction1D& u, double min_drop);

/// [x - half_width, x + half_width] around each position.
Intervals tubes(const std::vector<double>& centres, double half_width);

/// L1 and sup distances over [a, b] minus the excluded intervals (a node is
/// skipped when it lies in one).
double l1_distance_excluding(const GridFunction1D& u, const GridFunction1D& v, double a, double b,
                             const Intervals& excluded);
double sup_distance_excluding(const GridFunction1D& u, const GridFunction1D& v, double a,
                              double b, const Intervals& excluded);

struct ConvergenceRow {
  double epsilon = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double error_l1 = 0.0;
  double error_sup = 0.0;
  /// L1 error at or below the problem's grid floor.
  bool floor_dominated = false;
};

enum class ErrorMetric { L1, Sup };

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows; ///< decreasing epsilon
  ErrorMetric metric = ErrorMetric::Sup;
  /// Slope of log(error) against log(epsilon) over the three smallest epsilons.
  double fitted_rate = 0.0;
  /// False when the fitted rows are floor dominated; fitted_rate is then 0.
  bool rate_reported = false;
  std::string reference;
};

/// A scenario prepared for an epsilon sweep. `setup` builds the initial data on
/// a grid; `reference` returns the oracle solution at time T on that grid.
struct ConvergenceProblem {
  double a = -1.0; ///< interval where the data varies
  double b = 1.0;
  double sup_u0 = 1.0;
  double T = 1.0;
  double window_a = -2.0; ///< L1 and sup errors are measured here
  double window_b = 2.0;
  /// Rows with error_l1 <= floor_l1_per_dx * dx are flagged floor dominated
  /// (use for data whose error is set by front placement on the grid).
  double floor_l1_per_dx = 0.0;
  /// When positive, errors skip tubes of half-width tube_factor * epsilon
  /// around the shocks of the reference (drops of at least shock_drop).
  double tube_factor = 0.0;
  double shock_drop = 0.1;
  Mode mode = Mode::NN;
  FluxSpec flux = FluxSpec::burgers();
  std::function<InitialData1D(const GridSpec&)> setup;
  std::function<GridFunction1D(const GridFunction1D& u0, const GridSpec&)> reference;
};

struct ConvergenceOptions {
  double dx_max = 1e-3;
  ErrorMetric metric = ErrorMetric::Sup;
  std::size_t threads = 0; ///< 0: thread_budget()
};

/// Solves for each epsilon with dx = min(dx_max, epsilon/8) and tabulates the
/// errors against the reference. `trajectories`, when given, receives the runs
/// in the order of `epsilons`.
ConvergenceTable convergence_study(const ConvergenceProblem& problem,
                                   const std::vector<double>& epsilons,
                                   const std::string& reference_name, const SolverConfig& cfg,
                                   const ConvergenceOptions& opt = {},
                                   std::vector<Trajectory>* trajectories = nullptr);

/// Least-squares slope of log(y) against log(x); points with y <= 0 are skipped.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace nlclaw
