#pragma once

#include <string>

#include "nlclaw/grid.hpp"

namespace nlclaw {

/// Scalar flux f with derivative f', validated on a data range [lo, hi].
class FluxSpec {
public:
  /// Spot-checks f' against central differences of f at five points of the
  /// range (relative 1e-6) and estimates the Lipschitz constant of f' there.
  /// Throws InvalidFlux on mismatch.
  FluxSpec(std::string name, ScalarFn f, ScalarFn fprime, double lo, double hi);

  static FluxSpec burgers(double lo = -1.0, double hi = 1.0);
  static FluxSpec cubic(double lo = -1.0, double hi = 1.0);
  static FluxSpec zero(double lo = -1.0, double hi = 1.0);

  /// Same flux re-validated on another range.
  FluxSpec on_range(double lo, double hi) const;

  const std::string& name() const { return name_; }
  double f(double u) const { return f_(u); }
  double fprime(double u) const { return fprime_(u); }
  const ScalarFn& fprime_fn() const { return fprime_; }
  double lipschitz_M() const { return lipschitz_M_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Max |f'| on [lo, hi] (sampled).
  double max_speed() const;
  /// f' non-decreasing on the range (sampled).
  bool is_convex() const;
  /// True when f' is the identity map (Burgers).
  bool is_burgers() const { return name_ == "burgers"; }

  /// Godunov interface flux: min of f over [a, b] if a <= b, max over [b, a]
  /// otherwise. Requires a convex flux.
  double godunov_flux(double a, double b) const;

private:
  std::string name_;
  ScalarFn f_;
  ScalarFn fprime_;
  double lo_;
  double hi_;
  double lipschitz_M_ = 0.0;
};

} // namespace nlclaw
