#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlclaw {

using ScalarFn = std::function<double(double)>;

/// Uniform 1D node layout: x_i = x0 + i*dx, i = 0..n-1.
struct GridSpec {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 2;

  /// Grid covering [a, b] with spacing dx; b is rounded to the nearest node.
  static GridSpec from_domain(double a, double b, double dx);

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double x_last() const { return x(n - 1); }
};

/// Sampled function on a uniform 1D grid. Invariants: dx > 0, at least two
/// nodes, every value finite.
class GridFunction1D {
public:
  GridFunction1D(double x0, double dx, std::vector<double> values);
  GridFunction1D(const GridSpec& spec, std::vector<double> values);
  GridFunction1D(const GridSpec& spec, double constant);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return x0_ + static_cast<double>(i) * dx_; }
  double x_last() const { return x(size() - 1); }
  GridSpec spec() const { return {x0_, dx_, values_.size()}; }

  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double min() const;
  double max() const;

  /// True when both functions share x0, dx and length (to 1e-12 relative).
  bool same_grid(const GridFunction1D& other) const;

private:
  double x0_;
  double dx_;
  std::vector<double> values_;
};

double total_variation(const GridFunction1D& u);
double sup_norm(const GridFunction1D& u);
/// Rectangle-rule L1 distance, sum |u_i - v_i| * dx. Throws GridMismatch.
double l1_distance(const GridFunction1D& u, const GridFunction1D& v);
/// Rectangle-rule L1 distance restricted to nodes inside [a, b].
double l1_distance(const GridFunction1D& u, const GridFunction1D& v, double a, double b);
double sup_distance(const GridFunction1D& u, const GridFunction1D& v);
/// Sup distance restricted to nodes inside [a, b].
double sup_distance(const GridFunction1D& u, const GridFunction1D& v, double a, double b);

/// Piecewise-linear interpolation with constant extension beyond the grid.
/// The result never leaves [min, max] of the two bracketing values.
double interpolate(const GridFunction1D& u, double x);

/// How a node sequence is continued past either end of the grid.
enum class Extension {
  Constant,  ///< repeat the end value
  UnitSlope  ///< continue with slope one (flow maps near a uniform-velocity boundary)
};

/// Hermite segment shared by the 1D and 2D monotone interpolators:
/// samples at cell offsets -1, 0, 1, 2, evaluated at fraction t of cell [0, 1].
inline double monotone_cubic_segment(double pm1, double p0, double p1, double p2, double t) {
  const double s0 = p0 - pm1;
  const double s1 = p1 - p0;
  const double s2 = p2 - p1;
  const double d0 = (s0 * s1 > 0.0) ? 2.0 * s0 * s1 / (s0 + s1) : 0.0;
  const double d1 = (s1 * s2 > 0.0) ? 2.0 * s1 * s2 / (s1 + s2) : 0.0;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  const double r = h00 * p0 + h10 * d0 + h01 * p1 + h11 * d1;
  return std::clamp(r, std::min(p0, p1), std::max(p0, p1));
}

/// Monotone piecewise-cubic Hermite interpolation on a uniform grid, using
/// harmonic-mean node slopes computed from the four surrounding samples.
/// On each cell the interpolant is monotone between the two end values, so it
/// never overshoots; on smooth monotone data it is third-order accurate.
inline double interpolate_monotone_cubic(std::span<const double> values, double x0, double dx, double x,
                                  Extension ext) {
  const std::size_t n = values.size();
  const double s = (x - x0) / dx;
  const auto last = static_cast<double>(n - 1);
  if (!(s > 0.0)) {
    return ext == Extension::Constant ? values.front() : values.front() + (x - x0);
  }
  if (s >= last) {
    return ext == Extension::Constant ? values.back()
                                      : values.back() + (x - (x0 + last * dx));
  }
  const auto i = static_cast<std::size_t>(s);
  const double t = s - static_cast<double>(i);
  const double ghost = ext == Extension::Constant ? 0.0 : dx;
  const double pm1 = i > 0 ? values[i - 1] : values[0] - ghost;
  const double p2 = i + 2 < n ? values[i + 2] : values[n - 1] + ghost;
  return monotone_cubic_segment(pm1, values[i], values[i + 1], p2, t);
}

struct RiemannData {
  double uL = 0.0;
  double uR = 0.0;

  /// u_L for x <= 0, u_R for x > 0.
  double operator()(double x) const;
};

/// Piecewise data: pieces[0] on x <= a_1, pieces[k] on (a_k, a_{k+1}],
/// pieces[n] on x > a_n (left-continuous at each breakpoint).
struct PiecewiseInitialData {
  std::vector<double> breakpoints;
  std::vector<ScalarFn> pieces;
  std::vector<std::string> descriptions;
  double lipschitz_C = 0.0;

  /// Validates ordering and piece count; throws InvalidArgument.
  void validate() const;
  double operator()(double x) const;
  /// Smallest gap between adjacent breakpoints (infinity with fewer than two).
  double min_gap() const;
};

GridFunction1D sample(const ScalarFn& f, const GridSpec& grid);
GridFunction1D sample(const RiemannData& d, const GridSpec& grid);
/// Throws ResolutionError when two breakpoints are fewer than 4 cells apart.
GridFunction1D sample(const PiecewiseInitialData& d, const GridSpec& grid);

/// Initial data handed to the solvers: the sampled grid function plus, when
/// available, the closed-form profile it was sampled from. Evaluation clamps
/// its argument to the grid interval (constant continuation), and falls back
/// to piecewise-linear interpolation when no closed form is attached.
class InitialData1D {
public:
  InitialData1D(GridFunction1D grid); // NOLINT(google-explicit-constructor)
  InitialData1D(GridFunction1D grid, ScalarFn exact);
  /// Closed form made of pieces: pieces[0] up to breakpoints[0], pieces[k] on
  /// (breakpoints[k-1], breakpoints[k]], the last piece beyond.
  InitialData1D(GridFunction1D grid, ScalarFn exact, std::vector<double> breakpoints,
                std::vector<ScalarFn> pieces);

  static InitialData1D from(const ScalarFn& f, const GridSpec& grid);
  static InitialData1D from(const RiemannData& d, const GridSpec& grid);
  static InitialData1D from(const PiecewiseInitialData& d, const GridSpec& grid);

  const GridFunction1D& grid() const { return grid_; }
  bool has_exact() const { return static_cast<bool>(exact_); }
  double operator()(double y) const;

  /// Points where the closed form may jump or kink (empty for smooth data).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t piece_count() const { return breakpoints_.size() + 1; }
  /// Piece k evaluated at y clamped to its own interval (and to the grid).
  /// With no breakpoints piece 0 is the whole profile.
  double piece(std::size_t k, double y) const;
  /// Clamps y into the interval of piece k.
  double clamp_to_piece(std::size_t k, double y) const;

private:
  GridFunction1D grid_;
  ScalarFn exact_;
  std::vector<double> breakpoints_;
  std::vector<ScalarFn> pieces_;
};

} // namespace nlclaw
