#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlclaw/errors.hpp"
#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"

using namespace nlclaw;

TEST_CASE("grid function invariants") {
  CHECK_THROWS_AS(GridFunction1D(0.0, 0.0, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(GridFunction1D(0.0, 0.1, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(GridFunction1D(0.0, 0.1, {1.0, NAN}), InvalidArgument);
}

TEST_CASE("sample Riemann data") {
  const auto u = sample(RiemannData{1.0, 0.0}, GridSpec::from_domain(-2.0, 2.0, 0.5));
  const std::vector<double> want{1, 1, 1, 1, 1, 0, 0, 0, 0};
  REQUIRE(u.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(u[i] == want[i]);
  }
  const auto c = sample([](double) { return 3.0; }, GridSpec::from_domain(0.0, 1.0, 0.1));
  for (double v : c.values()) {
    CHECK(v == 3.0);
  }
  const auto t = sample([](double x) { return -std::tanh(x); }, GridSpec::from_domain(-10, 10, 1e-3));
  CHECK(sup_norm(t) == doctest::Approx(std::tanh(10.0)).epsilon(1e-15));
  CHECK(sup_norm(t) > 0.99995);
}

TEST_CASE("sample piecewise data is left-continuous and checks resolution") {
  PiecewiseInitialData d;
  d.breakpoints = {0.0, 1.0};
  d.pieces = {[](double) { return 2.0; }, [](double x) { return x; }, [](double) { return -1.0; }};
  d.lipschitz_C = 1.0;
  const auto u = sample(d, GridSpec::from_domain(-1.0, 2.0, 0.1));
  CHECK(u[10] == 2.0); // x = 0 takes the left piece
  CHECK(u[20] == doctest::Approx(1.0)); // x = 1 takes the middle piece
  CHECK(u[21] == -1.0);
  CHECK_THROWS_AS(sample(d, GridSpec::from_domain(-1.0, 2.0, 0.3)), ResolutionError);
  PiecewiseInitialData bad = d;
  bad.breakpoints = {1.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("total variation") {
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 0.01);
  CHECK(total_variation(sample(RiemannData{1.0, 0.0}, g)) == 1.0);
  CHECK(total_variation(GridFunction1D(g, 4.0)) == 0.0);
  const double h = 2.0 * std::numbers::pi / 6283.0;
  const auto s = sample([](double x) { return std::sin(x); }, GridSpec{0.0, h, 6284});
  CHECK(std::abs(total_variation(s) - 4.0) < 1e-5);
  // sawtooth: additivity over monotone runs
  std::vector<double> saw;
  for (int k = 0; k < 50; ++k) {
    saw.push_back(k % 2 == 0 ? 0.0 : 0.5 * k);
  }
  double expect = 0.0;
  for (std::size_t k = 1; k < saw.size(); ++k) {
    expect += std::abs(saw[k] - saw[k - 1]);
  }
  CHECK(total_variation(GridFunction1D(0.0, 1.0, saw)) == expect);
}

TEST_CASE("norms and distances") {
  const GridSpec g = GridSpec::from_domain(-2.0, 2.0, 0.01);
  const auto a = sample(RiemannData{1.0, 0.0}, g);
  const auto b = sample(RiemannData{0.0, 0.0}, g);
  CHECK(sup_norm(a) == 1.0);
  CHECK(l1_distance(a, a) == 0.0);
  CHECK(std::abs(l1_distance(a, b) - 2.0) <= 0.01 + 1e-12);
  CHECK(sup_distance(a, b) == 1.0);
  CHECK(l1_distance(a, b, 0.5, 2.0) == 0.0);
  CHECK_THROWS_AS(l1_distance(a, GridFunction1D(GridSpec::from_domain(0, 1, 0.01), 0.0)),
                  GridMismatch);
}

TEST_CASE("linear interpolation") {
  const GridFunction1D u(0.0, 1.0, {0.0, 1.0, 5.0});
  CHECK(interpolate(u, 1.0) == 1.0);
  CHECK(interpolate(u, 0.5) == 0.5);
  CHECK(interpolate(u, 9.0) == 5.0);
  CHECK(interpolate(u, -3.0) == 0.0);
  for (double x = -1.0; x < 3.0; x += 0.013) {
    const double v = interpolate(u, x);
    CHECK(v >= 0.0);
    CHECK(v <= 5.0);
  }
}

TEST_CASE("monotone cubic never overshoots and extends as asked") {
  const std::vector<double> v{0.0, 0.0, 1.0, 1.0, 0.5, 3.0};
  for (double x = 0.0; x <= 5.0; x += 0.01) {
    const double y = interpolate_monotone_cubic(v, 0.0, 1.0, x, Extension::Constant);
    const auto i = static_cast<std::size_t>(std::min(4.0, std::floor(x)));
    CHECK(y >= std::min(v[i], v[i + 1]) - 1e-15);
    CHECK(y <= std::max(v[i], v[i + 1]) + 1e-15);
  }
  const std::vector<double> ident{0.0, 1.0, 2.0, 3.0};
  CHECK(interpolate_monotone_cubic(ident, 0.0, 1.0, 1.37, Extension::UnitSlope) ==
        doctest::Approx(1.37).epsilon(1e-14));
  CHECK(interpolate_monotone_cubic(ident, 0.0, 1.0, 5.5, Extension::UnitSlope) == 5.5);
  CHECK(interpolate_monotone_cubic(ident, 0.0, 1.0, -2.0, Extension::Constant) == 0.0);
}

TEST_CASE("initial data evaluation clamps to the grid") {
  const GridSpec g = GridSpec::from_domain(-1.0, 1.0, 0.1);
  const auto d = InitialData1D::from([](double x) { return x * x; }, g);
  CHECK(d(0.25) == 0.0625);
  CHECK(d(5.0) == doctest::Approx(1.0));
  const InitialData1D lin(sample([](double x) { return x; }, g));
  CHECK(lin(0.25) == doctest::Approx(0.25));
}

TEST_CASE("flux spec") {
  const auto b = FluxSpec::burgers(-2.0, 2.0);
  CHECK(b.fprime(0.3) == 0.3);
  CHECK(b.is_convex());
  CHECK(b.max_speed() == 2.0);
  CHECK(b.lipschitz_M() == doctest::Approx(1.0));
  const auto c = FluxSpec::cubic(0.0, 2.0);
  CHECK(c.lipschitz_M() == doctest::Approx(4.0).epsilon(1e-2));
  CHECK_THROWS_AS(FluxSpec("bad", [](double u) { return u * u; }, [](double u) { return u; }, -1, 1),
                  InvalidFlux);
  // Godunov flux of Burgers: transonic rarefaction gives the sonic value 0.
  CHECK(std::abs(b.godunov_flux(-1.0, 1.0)) < 1e-14);
  CHECK(b.godunov_flux(1.0, 0.0) == 0.5);
  CHECK(b.godunov_flux(0.5, 1.0) == 0.125);
}
