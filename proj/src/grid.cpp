#include "nlclaw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

// Breakpoints closer than this are treated as hit exactly, so that nodes
// computed as x0 + i*dx still see the left-continuous value.
constexpr double kBreakpointSnap = 1e-10;

void check_same_grid(const GridFunction1D& u, const GridFunction1D& v) {
  if (!u.same_grid(v)) {
    throw GridMismatch("grid functions are defined on different grids");
  }
}

} // namespace

GridSpec GridSpec::from_domain(double a, double b, double dx) {
  if (!(dx > 0.0) || !(b > a)) {
    throw InvalidArgument("grid domain must satisfy a < b and dx > 0");
  }
  const auto cells = static_cast<std::size_t>(std::llround((b - a) / dx));
  if (cells < 1) {
    throw ResolutionError("domain shorter than one cell");
  }
  return {a, dx, cells + 1};
}

GridFunction1D::GridFunction1D(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx_ > 0.0) || !std::isfinite(dx_)) {
    throw InvalidArgument("grid spacing must be positive");
  }
  if (values_.size() < 2) {
    throw InvalidArgument("grid function needs at least two nodes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("grid function values must be finite");
    }
  }
}

GridFunction1D::GridFunction1D(const GridSpec& spec, std::vector<double> values)
    : GridFunction1D(spec.x0, spec.dx, std::move(values)) {
  if (values_.size() != spec.n) {
    throw GridMismatch("value count does not match grid size");
  }
}

GridFunction1D::GridFunction1D(const GridSpec& spec, double constant)
    : GridFunction1D(spec.x0, spec.dx, std::vector<double>(spec.n, constant)) {}

double GridFunction1D::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction1D::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool GridFunction1D::same_grid(const GridFunction1D& other) const {
  const double scale = std::max(1.0, std::abs(x0_));
  return size() == other.size() && std::abs(dx_ - other.dx_) <= 1e-12 * dx_ &&
         std::abs(x0_ - other.x0_) <= 1e-12 * scale;
}

double total_variation(const GridFunction1D& u) {
  const auto v = u.values();
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    tv += std::abs(v[i + 1] - v[i]);
  }
  return tv;
}

double sup_norm(const GridFunction1D& u) {
  double s = 0.0;
  for (double v : u.values()) {
    s = std::max(s, std::abs(v));
  }
  return s;
}

double l1_distance(const GridFunction1D& u, const GridFunction1D& v) {
  check_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += std::abs(u[i] - v[i]);
  }
  return s * u.dx();
}

double l1_distance(const GridFunction1D& u, const GridFunction1D& v, double a, double b) {
  check_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.x(i);
    if (x >= a && x <= b) {
      s += std::abs(u[i] - v[i]);
    }
  }
  return s * u.dx();
}

double sup_distance(const GridFunction1D& u, const GridFunction1D& v) {
  check_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s = std::max(s, std::abs(u[i] - v[i]));
  }
  return s;
}

double sup_distance(const GridFunction1D& u, const GridFunction1D& v, double a, double b) {
  check_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.x(i);
    if (x >= a && x <= b) {
      s = std::max(s, std::abs(u[i] - v[i]));
    }
  }
  return s;
}

double interpolate(const GridFunction1D& u, double x) {
  const auto v = u.values();
  const double s = (x - u.x0()) / u.dx();
  if (!(s > 0.0)) {
    return v.front();
  }
  const auto last = static_cast<double>(v.size() - 1);
  if (s >= last) {
    return v.back();
  }
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  const double a = v[i];
  const double b = v[i + 1];
  const double r = a + w * (b - a);
  return std::clamp(r, std::min(a, b), std::max(a, b));
}

double RiemannData::operator()(double x) const { return x <= kBreakpointSnap ? uL : uR; }

void PiecewiseInitialData::validate() const {
  if (pieces.size() != breakpoints.size() + 1) {
    throw InvalidArgument("piecewise data needs one more piece than breakpoints");
  }
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) {
      throw InvalidArgument("breakpoints must be strictly increasing");
    }
  }
  if (lipschitz_C < 0.0) {
    throw InvalidArgument("Lipschitz constant must be nonnegative");
  }
}

double PiecewiseInitialData::operator()(double x) const {
  std::size_t k = 0;
  while (k < breakpoints.size() && x > breakpoints[k] + kBreakpointSnap) {
    ++k;
  }
  return pieces[k](x);
}

double PiecewiseInitialData::min_gap() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    d = std::min(d, breakpoints[k] - breakpoints[k - 1]);
  }
  return d;
}

GridFunction1D sample(const ScalarFn& f, const GridSpec& grid) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    v[i] = f(grid.x(i));
  }
  return {grid, std::move(v)};
}

GridFunction1D sample(const RiemannData& d, const GridSpec& grid) {
  return sample(ScalarFn(d), grid);
}

GridFunction1D sample(const PiecewiseInitialData& d, const GridSpec& grid) {
  d.validate();
  if (d.min_gap() < 4.0 * grid.dx * (1.0 - 1e-9)) {
    throw ResolutionError("grid too coarse: fewer than 4 cells between adjacent breakpoints");
  }
  return sample(ScalarFn(d), grid);
}

InitialData1D::InitialData1D(GridFunction1D grid) : grid_(std::move(grid)) {}

InitialData1D::InitialData1D(GridFunction1D grid, ScalarFn exact)
    : grid_(std::move(grid)), exact_(std::move(exact)) {}

InitialData1D::InitialData1D(GridFunction1D grid, ScalarFn exact, std::vector<double> breakpoints,
                             std::vector<ScalarFn> pieces)
    : grid_(std::move(grid)), exact_(std::move(exact)), breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)) {
  if (pieces_.size() != breakpoints_.size() + 1 || !exact_) {
    throw InvalidArgument("piecewise initial data needs one more piece than breakpoints");
  }
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > breakpoints_[k - 1])) {
      throw InvalidArgument("breakpoints must be strictly increasing");
    }
  }
}

InitialData1D InitialData1D::from(const ScalarFn& f, const GridSpec& grid) {
  return {sample(f, grid), f};
}

InitialData1D InitialData1D::from(const RiemannData& d, const GridSpec& grid) {
  const double uL = d.uL;
  const double uR = d.uR;
  return {sample(d, grid),
          ScalarFn(d),
          {0.0},
          {[uL](double) { return uL; }, [uR](double) { return uR; }}};
}

InitialData1D InitialData1D::from(const PiecewiseInitialData& d, const GridSpec& grid) {
  return {sample(d, grid), ScalarFn(d), d.breakpoints, d.pieces};
}

double InitialData1D::operator()(double y) const {
  if (!exact_) {
    return interpolate(grid_, y);
  }
  return exact_(std::clamp(y, grid_.x0(), grid_.x_last()));
}

double InitialData1D::clamp_to_piece(std::size_t k, double y) const {
  if (breakpoints_.empty()) {
    return y;
  }
  if (k > 0) {
    y = std::max(y, breakpoints_[k - 1]);
  }
  if (k < breakpoints_.size()) {
    y = std::min(y, breakpoints_[k]);
  }
  return y;
}

double InitialData1D::piece(std::size_t k, double y) const {
  if (breakpoints_.empty()) {
    return (*this)(y);
  }
  y = std::clamp(clamp_to_piece(k, y), grid_.x0(), grid_.x_last());
  return pieces_[k](y);
}

} // namespace nlclaw
