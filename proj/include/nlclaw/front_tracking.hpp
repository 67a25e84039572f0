#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"

namespace nlclaw {

/// states[0] left of jumps[0], states[k] on (jumps[k-1], jumps[k]), states[n]
/// right of the last jump.
struct PiecewiseConstant {
  std::vector<double> jumps;
  std::vector<double> states;

  /// Throws InvalidArgument unless jumps increase and states.size() = jumps.size()+1.
  void validate() const;
  /// Left-continuous evaluation (a jump point takes the left state).
  double operator()(double x) const;
  double total_variation() const;
  GridFunction1D sample(const GridSpec& grid) const;
};

/// Rounds grid values to the nearest multiple of delta and places a jump at the
/// midpoint between nodes whose rounded values differ.
PiecewiseConstant quantize(const GridFunction1D& u, double delta);

/// Discontinuity moving at constant speed between two interactions.
struct WaveFront {
  double position = 0.0; ///< at birth_time
  double left_state = 0.0;
  double right_state = 0.0;
  double speed = 0.0;
  double birth_time = 0.0;
  double death_time = std::numeric_limits<double>::infinity();

  double at(double t) const { return position + speed * (t - birth_time); }
};

struct Interaction {
  double time = 0.0;
  double position = 0.0;
  std::size_t incoming = 0;
  std::size_t outgoing = 0;
  double tv_before = 0.0;
  double tv_after = 0.0;
};

/// Output of a front-tracking run: every front ever created, and the
/// interaction log. Evaluation replays the fronts alive at the requested time.
class FrontTrackingResult {
public:
  FrontTrackingResult(std::vector<WaveFront> fronts, std::vector<Interaction> events,
                      double far_left, double final_time);

  const std::vector<WaveFront>& fronts() const { return fronts_; }
  const std::vector<Interaction>& events() const { return events_; }
  double final_time() const { return final_time_; }

  /// Piecewise-constant profile at time t in [0, final_time].
  PiecewiseConstant at(double t) const;
  double value(double t, double x) const;

private:
  std::vector<WaveFront> fronts_;
  std::vector<Interaction> events_;
  double far_left_;
  double final_time_;
};

/// Exact evolution for the delta-approximate flux (piecewise-linear
/// interpolation of a convex f on the lattice delta*Z). Decreasing jumps are
/// shocks at Rankine-Hugoniot speed; increasing jumps split into fans of
/// jumps of size at most delta. delta <= 0 picks 1e-2 times the data range.
/// Throws InvalidFlux for a non-convex flux.
FrontTrackingResult front_tracking_solve(const PiecewiseConstant& u0, const FluxSpec& flux,
                                         double T, double delta = 0.0);

/// Grid overload: the samples must already be piecewise constant, meaning at
/// most a quarter of adjacent pairs differ. Otherwise InvalidArgument (use
/// quantize first).
FrontTrackingResult front_tracking_solve(const GridFunction1D& u0, const FluxSpec& flux, double T,
                                         double delta = 0.0);

} // namespace nlclaw
