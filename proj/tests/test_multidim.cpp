#include <cmath>

#include "doctest.h"
#include "nlclaw/errors.hpp"
#include "nlclaw/multidim.hpp"

using namespace nlclaw;

TEST_CASE("2D grid functions and TV") {
  const auto g = GridSpec2D::from_domain(0.0, 1.0, 0.0, 1.0, 0.1, 0.1);
  CHECK(g.nx == 11);
  CHECK(tv_2d(GridFunction2D(g, 3.0)) == 0.0);
  // 3x3 block of ones
  const auto block = sample([](double x, double y) {
    return (x > 0.25 && x < 0.55 && y > 0.25 && y < 0.55) ? 1.0 : 0.0;
  }, g);
  CHECK(tv_2d(block) == doctest::Approx(4.0 * 3.0 * 0.1));
  CHECK_THROWS_AS(GridFunction2D(g, std::vector<double>(5, 0.0)), GridMismatch);
  CHECK_THROWS_AS(GridFunction2D(GridSpec2D{0, 0, 0.1, 0.1, 1, 4}, 0.0), InvalidArgument);
  const auto r = block.row(3);
  CHECK(r.size() == 11);
  CHECK(r[3] == 1.0);
  CHECK(r[0] == 0.0);
}

TEST_CASE("2D initial data interpolation stays within the samples") {
  const auto g = GridSpec2D::from_domain(0.0, 1.0, 0.0, 1.0, 0.25, 0.25);
  const InitialData2D d{sample([](double x, double y) { return x * y; }, g), nullptr};
  CHECK(d(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(d(0.125, 1.0) == doctest::Approx(0.125));
  CHECK(d(5.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("2D constant state is stationary") {
  SolverConfig cfg;
  const auto g = GridSpec2D::from_domain(-1.0, 1.0, -1.0, 1.0, 0.05, 0.05);
  cfg.dx = g.dx;
  const InitialData2D u0{GridFunction2D(g, 0.4), nullptr};
  const auto tr = solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::burgers(), 0.2, 0.5, cfg);
  for (double v : tr.final().values()) {
    CHECK(v == 0.4);
  }
}

TEST_CASE("y-independent data reproduces the 1D solver") {
  SolverConfig cfg;
  cfg.dx = 0.02;
  const double eps = 0.2;
  const double T = 0.5;
  const auto g = GridSpec2D::from_domain(-4.0, 4.0, -0.2, 0.2, 0.02, 0.05);
  const auto f = [](double x) { return -std::tanh(x); };
  const InitialData2D u0{sample([f](double x, double) { return f(x); }, g),
                         [f](double x, double) { return f(x); }};
  const auto tr2 =
      solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::zero(), eps, T, cfg);
  const auto tr1 = solve_nn(InitialData1D::from(f, g.x_axis()), eps, T, cfg);
  REQUIRE(tr1.times.size() == tr2.times.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < tr1.times.size(); ++k) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      worst = std::max(worst, sup_distance(tr2.states[k].row(j), tr1.states[k]));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(tr2.dt == tr1.dt);
  const double lo = u0.samples.min();
  const double hi = u0.samples.max();
  for (std::size_t k = 0; k < tr2.step_min.size(); ++k) {
    CHECK(tr2.step_min[k] >= lo);
    CHECK(tr2.step_max[k] <= hi);
  }
}

TEST_CASE("diagonal data stays symmetric under the x-y swap") {
  SolverConfig cfg;
  cfg.dx = 0.04;
  const auto g = GridSpec2D::from_domain(-3.0, 3.0, -3.0, 3.0, 0.04, 0.04);
  const auto f = [](double x, double y) { return -0.5 * std::tanh(x + y); };
  const InitialData2D u0{sample(f, g), f};
  const auto tr = solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::burgers(), 0.25, 0.4, cfg);
  const auto& u = tr.final();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      worst = std::max(worst, std::abs(u(i, j) - u(j, i)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(tr.final().min() >= u0.samples.min());
  CHECK(tr.final().max() <= u0.samples.max());
  for (double tv : tr.step_tv) {
    CHECK(tv <= 1.05 * tr.step_tv.front());
  }
}

TEST_CASE("2D solver input checks") {
  SolverConfig cfg;
  const auto g = GridSpec2D::from_domain(-1.0, 1.0, -1.0, 1.0, 0.05, 0.05);
  const InitialData2D u0{GridFunction2D(g, 0.4), nullptr};
  CHECK_THROWS_AS(solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::zero(), 0.2, 0.5, cfg),
                  GridMismatch);
  cfg.dx = 0.05;
  CHECK_THROWS_AS(solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::zero(), 0.01, 0.5, cfg),
                  ResolutionError);
  cfg.fixed_dt = 1.0;
  CHECK_THROWS_AS(solve_velocity_reg_2d(u0, FluxSpec::burgers(), FluxSpec::zero(), 0.2, 0.5, cfg),
                  CflViolation);
}
