#include <cmath>

#include "doctest.h"
#include "nlclaw/errors.hpp"
#include "nlclaw/front_tracking.hpp"
#include "nlclaw/reference.hpp"

using namespace nlclaw;

TEST_CASE("exact Burgers Riemann solution") {
  CHECK(burgers_riemann_exact({1.0, 0.0}, 0.49) == 1.0);
  CHECK(burgers_riemann_exact({1.0, 0.0}, 0.51) == 0.0);
  CHECK(burgers_riemann_exact({-1.0, 1.0}, 0.0) == 0.0);
  CHECK(burgers_riemann_exact({-1.0, 1.0}, 0.3) == 0.3);
  CHECK(burgers_riemann_exact({-1.0, 1.0}, -4.0) == -1.0);
  for (double xi : {-3.0, 0.0, 2.5}) {
    CHECK(burgers_riemann_exact({0.2, 0.2}, xi) == 0.2);
  }
}

TEST_CASE("Lax-Oleinik: constants, shocks, fans") {
  const GridSpec g = GridSpec::from_domain(-3.0, 3.0, 1e-3);
  const auto c = lax_oleinik_solve(GridFunction1D(g, 0.37), 0.8, g);
  for (double v : c.values()) {
    CHECK(std::abs(v - 0.37) < 1e-10);
  }
  const RiemannData shock{1.0, 0.0};
  const auto s = lax_oleinik_solve(sample(shock, g), 1.0, g);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (std::abs(x - 0.5) > g.dx) {
      CHECK(std::abs(s[i] - burgers_riemann_exact(shock, x)) < 1e-9);
    }
  }
  const RiemannData fan{-1.0, 1.0};
  const auto r = lax_oleinik_solve(sample(fan, g), 1.0, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    worst = std::max(worst, std::abs(r[i] - burgers_riemann_exact(fan, g.x(i))));
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("Lax-Oleinik is second-order accurate before the shock") {
  // u0 = -tanh: characteristics x = y - tanh(y) t.
  const double t = 0.5;
  const auto exact = [t](double x) {
    double y = x;
    for (int k = 0; k < 100; ++k) {
      const double th = std::tanh(y);
      y -= (y - th * t - x) / (1.0 - t * (1.0 - th * th));
    }
    return -std::tanh(y);
  };
  double errs[2];
  int j = 0;
  for (double dx : {4e-3, 2e-3}) {
    const GridSpec g = GridSpec::from_domain(-10.0, 10.0, dx);
    const auto u = lax_oleinik_solve(sample([](double x) { return -std::tanh(x); }, g), t, g);
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      if (std::abs(g.x(i)) < 5.0) {
        e = std::max(e, std::abs(u[i] - exact(g.x(i))));
      }
    }
    errs[j++] = e;
  }
  CHECK(errs[1] < 1e-5);
  CHECK(errs[0] / errs[1] > 3.0);
}

TEST_CASE("Lax-Oleinik satisfies the Oleinik bound") {
  const GridSpec g = GridSpec::from_domain(-5.0, 5.0, 1e-3);
  const double t = 2.0;
  const auto u = lax_oleinik_solve(sample([](double x) { return -std::tanh(x) + 0.3 * std::sin(3 * x); }, g), t, g);
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    CHECK((u[i + 1] - u[i]) / g.dx <= 1.0 / t + 1e-9);
  }
}

TEST_CASE("Godunov basics") {
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 1e-3);
  const auto f = FluxSpec::burgers();
  const auto c = godunov_solve(GridFunction1D(g, 0.4), f, 1.0);
  CHECK(sup_distance(c.final(), GridFunction1D(g, 0.4)) < 1e-14);
  const auto s = godunov_solve(sample(RiemannData{1.0, 0.0}, g), f, 1.0);
  // front position from mass: the shock sits where the area balances
  double mass = 0.0;
  for (double v : s.final().values()) {
    mass += v * g.dx;
  }
  const double front = mass - 2.0; // u = 1 on [-2, front]
  CHECK(std::abs(front - 0.5) < 0.01);
  for (std::size_t k = 1; k < s.step_tv.size(); ++k) {
    CHECK(s.step_tv[k] <= s.step_tv[k - 1] + 1e-12);
    CHECK(s.step_max[k] <= 1.0 + 1e-15);
    CHECK(s.step_min[k] >= -1e-15);
  }
  const auto nonconvex = FluxSpec("sine", [](double u) { return std::sin(u); },
                                  [](double u) { return std::cos(u); }, -3.0, 3.0);
  CHECK_THROWS_AS(godunov_solve(sample([](double x) { return 3.0 * std::tanh(x); }, g), nonconvex, 0.1),
                  InvalidFlux);
}

TEST_CASE("front tracking: single shock and merging shocks") {
  const auto f = FluxSpec::burgers(0.0, 2.0);
  PiecewiseConstant one{{0.0}, {1.0, 0.0}};
  const auto r1 = front_tracking_solve(one, f, 3.0);
  REQUIRE(r1.fronts().size() == 1);
  CHECK(r1.fronts()[0].speed == 0.5);
  CHECK(r1.events().empty());

  PiecewiseConstant two{{0.0, 1.0}, {2.0, 1.0, 0.0}};
  const auto r2 = front_tracking_solve(two, f, 3.0);
  REQUIRE(r2.events().size() == 1);
  CHECK(r2.events()[0].time == doctest::Approx(1.0));
  CHECK(r2.events()[0].position == doctest::Approx(1.5));
  const auto at2 = r2.at(2.0);
  REQUIRE(at2.jumps.size() == 1);
  CHECK(at2.jumps[0] == doctest::Approx(2.5)); // speed 1 after the merge
  CHECK(at2.states[0] == 2.0);
  CHECK(at2.states[1] == 0.0);
  for (const auto& e : r2.events()) {
    CHECK(e.tv_after <= e.tv_before + 1e-15);
  }
}

TEST_CASE("front tracking: fans and conservation") {
  const auto f = FluxSpec::burgers(-1.0, 1.0);
  PiecewiseConstant fan{{0.0}, {-1.0, 1.0}};
  const auto r = front_tracking_solve(fan, f, 1.0, 0.01);
  CHECK(r.fronts().size() == 200);
  CHECK(std::abs(r.value(1.0, 0.5) - 0.5) <= 0.01);
  // N-wave like data: mass on a wide window changes only through the
  // (equal) far-field fluxes.
  PiecewiseConstant nw{{-1.0, 0.0, 1.0}, {0.0, 1.0, -1.0, 0.0}};
  const auto rn = front_tracking_solve(nw, f, 1.5, 0.05);
  const auto mass = [](const PiecewiseConstant& pc) {
    double m = 0.0;
    const double a = -10.0;
    const double b = 10.0;
    double left = a;
    for (std::size_t k = 0; k < pc.states.size(); ++k) {
      const double right = k < pc.jumps.size() ? pc.jumps[k] : b;
      m += pc.states[k] * (right - left);
      left = right;
    }
    return m;
  };
  CHECK(std::abs(mass(rn.at(0.0)) - mass(rn.at(1.5))) < 1e-12);
  CHECK(rn.at(1.5).total_variation() <= nw.total_variation() + 1e-12);
  for (const auto& e : rn.events()) {
    CHECK(e.tv_after <= e.tv_before + 1e-12);
  }
}

TEST_CASE("front tracking input checks") {
  const auto f = FluxSpec::burgers();
  PiecewiseConstant bad{{0.0, 1.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(front_tracking_solve(bad, f, 1.0), InvalidArgument);
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 0.01);
  CHECK_THROWS_AS(front_tracking_solve(sample([](double x) { return x; }, g), f, 1.0),
                  InvalidArgument);
  const auto q = quantize(sample([](double x) { return -std::tanh(x); }, g), 0.1);
  CHECK_NOTHROW(q.validate());
  CHECK(q.states.size() == q.jumps.size() + 1);
}
