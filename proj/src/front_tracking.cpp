#include "nlclaw/front_tracking.hpp"

#include <algorithm>
#include <cmath>

#include "nlclaw/errors.hpp"

namespace nlclaw {

void PiecewiseConstant::validate() const {
  if (states.size() != jumps.size() + 1) {
    throw InvalidArgument("piecewise-constant data needs one more state than jumps");
  }
  for (std::size_t k = 1; k < jumps.size(); ++k) {
    if (!(jumps[k] > jumps[k - 1])) {
      throw InvalidArgument("jump positions must be strictly increasing");
    }
  }
  for (double s : states) {
    if (!std::isfinite(s)) {
      throw InvalidArgument("states must be finite");
    }
  }
}

double PiecewiseConstant::operator()(double x) const {
  const auto it = std::lower_bound(jumps.begin(), jumps.end(), x);
  return states[static_cast<std::size_t>(it - jumps.begin())];
}

double PiecewiseConstant::total_variation() const {
  double tv = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    tv += std::abs(states[k] - states[k - 1]);
  }
  return tv;
}

GridFunction1D PiecewiseConstant::sample(const GridSpec& grid) const {
  std::vector<double> v(grid.n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    while (k < jumps.size() && jumps[k] < x) {
      ++k;
    }
    v[i] = states[k];
  }
  return {grid, std::move(v)};
}

PiecewiseConstant quantize(const GridFunction1D& u, double delta) {
  if (!(delta > 0.0)) {
    throw InvalidArgument("quantization step must be positive");
  }
  PiecewiseConstant pc;
  double prev = delta * std::round(u[0] / delta);
  pc.states.push_back(prev);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double q = delta * std::round(u[i] / delta);
    if (q != prev) {
      pc.jumps.push_back(u.x(i - 1) + 0.5 * u.dx());
      pc.states.push_back(q);
      prev = q;
    }
  }
  return pc;
}

FrontTrackingResult::FrontTrackingResult(std::vector<WaveFront> fronts,
                                         std::vector<Interaction> events, double far_left,
                                         double final_time)
    : fronts_(std::move(fronts)), events_(std::move(events)), far_left_(far_left),
      final_time_(final_time) {}

PiecewiseConstant FrontTrackingResult::at(double t) const {
  std::vector<const WaveFront*> alive;
  for (const auto& f : fronts_) {
    if (f.birth_time <= t && t < f.death_time) {
      alive.push_back(&f);
    }
  }
  std::sort(alive.begin(), alive.end(), [t](const WaveFront* a, const WaveFront* b) {
    const double xa = a->at(t);
    const double xb = b->at(t);
    return xa != xb ? xa < xb : a->speed < b->speed;
  });
  PiecewiseConstant pc;
  pc.states.push_back(far_left_);
  for (const WaveFront* f : alive) {
    const double x = f->at(t);
    // Fronts born together share a position at their birth time; keep the
    // jump list strictly increasing by nudging by one ulp.
    const double pos = pc.jumps.empty() || x > pc.jumps.back()
                           ? x
                           : std::nextafter(pc.jumps.back(), INFINITY);
    pc.jumps.push_back(pos);
    pc.states.push_back(f->right_state);
  }
  return pc;
}

double FrontTrackingResult::value(double t, double x) const { return at(t)(x); }

namespace {

class Tracker {
public:
  Tracker(const FluxSpec& f, double delta) : f_(f), delta_(delta) {}

  // Riemann problem for the delta-approximate flux at (t, x).
  std::vector<WaveFront> riemann(double uL, double uR, double t, double x) const {
    std::vector<WaveFront> out;
    if (uL == uR) {
      return out;
    }
    if (uL > uR) {
      out.push_back(make(uL, uR, t, x));
      return out;
    }
    std::vector<double> w{uL};
    for (double j = std::floor(uL / delta_) + 1.0; j * delta_ < uR; j += 1.0) {
      const double s = j * delta_;
      if (s > w.back() + 1e-12 * delta_) {
        w.push_back(s);
      }
    }
    if (uR - w.back() <= 1e-12 * delta_ && w.size() > 1) {
      w.back() = uR;
    } else {
      w.push_back(uR);
    }
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      out.push_back(make(w[k], w[k + 1], t, x));
    }
    return out;
  }

private:
  WaveFront make(double l, double r, double t, double x) const {
    WaveFront wf;
    wf.position = x;
    wf.left_state = l;
    wf.right_state = r;
    wf.speed = (f_.f(l) - f_.f(r)) / (l - r);
    wf.birth_time = t;
    return wf;
  }

  const FluxSpec& f_;
  double delta_;
};

} // namespace

FrontTrackingResult front_tracking_solve(const PiecewiseConstant& u0, const FluxSpec& flux,
                                         double T, double delta) {
  u0.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("final time must be finite and nonnegative");
  }
  const auto [lo, hi] = std::minmax_element(u0.states.begin(), u0.states.end());
  const FluxSpec f = flux.on_range(*lo, *hi);
  if (!f.is_convex()) {
    throw InvalidFlux("front tracking requires a convex flux");
  }
  if (!(delta > 0.0)) {
    delta = 1e-2 * std::max(*hi - *lo, 1e-12);
  }
  const Tracker tracker(f, delta);

  std::vector<WaveFront> fronts;
  std::vector<std::size_t> alive;
  for (std::size_t k = 0; k < u0.jumps.size(); ++k) {
    for (auto& wf : tracker.riemann(u0.states[k], u0.states[k + 1], 0.0, u0.jumps[k])) {
      alive.push_back(fronts.size());
      fronts.push_back(wf);
    }
  }

  const auto tv_of = [&](const std::vector<std::size_t>& ids) {
    double tv = 0.0;
    for (std::size_t id : ids) {
      tv += std::abs(fronts[id].left_state - fronts[id].right_state);
    }
    return tv;
  };

  std::vector<Interaction> events;
  double t = 0.0;
  const std::size_t max_events = 50'000'000;
  while (true) {
    double tc = INFINITY;
    std::size_t p = 0;
    for (std::size_t k = 0; k + 1 < alive.size(); ++k) {
      const WaveFront& a = fronts[alive[k]];
      const WaveFront& b = fronts[alive[k + 1]];
      if (a.speed > b.speed) {
        const double gap = b.at(t) - a.at(t);
        const double cand = t + std::max(gap, 0.0) / (a.speed - b.speed);
        if (cand < tc) {
          tc = cand;
          p = k;
        }
      }
    }
    if (!(tc <= T)) {
      break;
    }
    if (events.size() >= max_events) {
      throw InvalidArgument("front tracking exceeded the interaction budget");
    }
    const double xc = 0.5 * (fronts[alive[p]].at(tc) + fronts[alive[p + 1]].at(tc));
    const double tol = 1e-9 * std::max(1.0, std::abs(xc));
    std::size_t first = p;
    std::size_t last = p + 1;
    while (first > 0 && std::abs(fronts[alive[first - 1]].at(tc) - xc) <= tol) {
      --first;
    }
    while (last + 1 < alive.size() && std::abs(fronts[alive[last + 1]].at(tc) - xc) <= tol) {
      ++last;
    }
    const double uL = fronts[alive[first]].left_state;
    const double uR = fronts[alive[last]].right_state;
    std::vector<std::size_t> incoming(alive.begin() + static_cast<std::ptrdiff_t>(first),
                                      alive.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    for (std::size_t id : incoming) {
      fronts[id].death_time = tc;
    }
    std::vector<std::size_t> outgoing;
    for (auto& wf : tracker.riemann(uL, uR, tc, xc)) {
      outgoing.push_back(fronts.size());
      fronts.push_back(wf);
    }
    Interaction ev;
    ev.time = tc;
    ev.position = xc;
    ev.incoming = incoming.size();
    ev.outgoing = outgoing.size();
    ev.tv_before = tv_of(incoming);
    ev.tv_after = tv_of(outgoing);
    events.push_back(ev);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(first),
                alive.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    alive.insert(alive.begin() + static_cast<std::ptrdiff_t>(first), outgoing.begin(),
                 outgoing.end());
    t = tc;
  }
  return {std::move(fronts), std::move(events), u0.states.front(), T};
}

FrontTrackingResult front_tracking_solve(const GridFunction1D& u0, const FluxSpec& flux, double T,
                                         double delta) {
  std::size_t changes = 0;
  for (std::size_t i = 1; i < u0.size(); ++i) {
    changes += u0[i] != u0[i - 1] ? 1 : 0;
  }
  if (4 * changes > u0.size() - 1) {
    throw InvalidArgument("grid data is not piecewise constant; quantize it first");
  }
  PiecewiseConstant pc;
  pc.states.push_back(u0[0]);
  for (std::size_t i = 1; i < u0.size(); ++i) {
    if (u0[i] != u0[i - 1]) {
      pc.jumps.push_back(u0.x(i - 1) + 0.5 * u0.dx());
      pc.states.push_back(u0[i]);
    }
  }
  return front_tracking_solve(pc, flux, T, delta);
}

} // namespace nlclaw
