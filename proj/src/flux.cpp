#include "nlclaw/flux.hpp"

#include <algorithm>
#include <cmath>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

constexpr int kSamples = 201;

} // namespace

FluxSpec::FluxSpec(std::string name, ScalarFn f, ScalarFn fprime, double lo, double hi)
    : name_(std::move(name)), f_(std::move(f)), fprime_(std::move(fprime)), lo_(lo), hi_(hi) {
  if (!f_ || !fprime_) {
    throw InvalidFlux("flux and its derivative must both be given");
  }
  if (hi_ < lo_) {
    std::swap(lo_, hi_);
  }
  if (hi_ == lo_) {
    hi_ = lo_ + 1.0;
  }
  const double span = hi_ - lo_;
  for (int k = 0; k < 5; ++k) {
    const double u = lo_ + span * (0.1 + 0.2 * k);
    const double h = 1e-5 * std::max(1.0, std::abs(u));
    const double fd = (f_(u + h) - f_(u - h)) / (2.0 * h);
    const double exact = fprime_(u);
    if (!std::isfinite(exact) || std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact))) {
      throw InvalidFlux("flux derivative does not match the flux (" + name_ + ")");
    }
  }
  double m = 0.0;
  const double h = span / (kSamples - 1);
  for (int k = 0; k + 1 < kSamples; ++k) {
    const double a = lo_ + k * h;
    m = std::max(m, std::abs(fprime_(a + h) - fprime_(a)) / h);
  }
  lipschitz_M_ = m;
}

FluxSpec FluxSpec::burgers(double lo, double hi) {
  return {"burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; }, lo, hi};
}

FluxSpec FluxSpec::cubic(double lo, double hi) {
  return {"cubic", [](double u) { return u * u * u / 3.0; }, [](double u) { return u * u; }, lo,
          hi};
}

FluxSpec FluxSpec::zero(double lo, double hi) {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }, lo, hi};
}

FluxSpec FluxSpec::on_range(double lo, double hi) const { return {name_, f_, fprime_, lo, hi}; }

double FluxSpec::max_speed() const {
  double s = 0.0;
  const double h = (hi_ - lo_) / (kSamples - 1);
  for (int k = 0; k < kSamples; ++k) {
    s = std::max(s, std::abs(fprime_(lo_ + k * h)));
  }
  return std::max(s, std::abs(fprime_(hi_)));
}

bool FluxSpec::is_convex() const {
  const double h = (hi_ - lo_) / (kSamples - 1);
  double prev = fprime_(lo_);
  for (int k = 1; k < kSamples; ++k) {
    const double cur = fprime_(lo_ + k * h);
    if (cur < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
      return false;
    }
    prev = cur;
  }
  return true;
}

double FluxSpec::godunov_flux(double a, double b) const {
  if (a <= b) {
    // Minimum of a convex function: at the sonic point if it lies inside.
    if (fprime_(a) >= 0.0) {
      return f_(a);
    }
    if (fprime_(b) <= 0.0) {
      return f_(b);
    }
    double lo = a;
    double hi = b;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (fprime_(mid) < 0.0 ? lo : hi) = mid;
    }
    return f_(0.5 * (lo + hi));
  }
  return std::max(f_(a), f_(b));
}

} // namespace nlclaw
