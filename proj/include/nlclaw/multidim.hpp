#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlclaw/flux.hpp"
#include "nlclaw/grid.hpp"
#include "nlclaw/solver.hpp"

namespace nlclaw {

/// Uniform tensor grid; node (i, j) sits at (x0 + i dx, y0 + j dy).
struct GridSpec2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  std::size_t nx = 2;
  std::size_t ny = 2;

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
  std::size_t size() const { return nx * ny; }
  GridSpec x_axis() const { return {x0, dx, nx}; }
  GridSpec y_axis() const { return {y0, dy, ny}; }

  static GridSpec2D from_domain(double ax, double bx, double ay, double by, double dx, double dy);
};

/// Values stored row by row: index j * nx + i, x varying fastest.
class GridFunction2D {
public:
  /// Throws InvalidArgument (spacing, dimensions < 2, non-finite values) or
  /// GridMismatch (value count).
  GridFunction2D(const GridSpec2D& spec, std::vector<double> values);
  GridFunction2D(const GridSpec2D& spec, double constant);

  const GridSpec2D& spec() const { return spec_; }
  std::size_t nx() const { return spec_.nx; }
  std::size_t ny() const { return spec_.ny; }
  double dx() const { return spec_.dx; }
  double dy() const { return spec_.dy; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * spec_.nx + i]; }
  std::span<const double> values() const { return values_; }
  double min() const;
  double max() const;
  /// Row j as a function of x.
  GridFunction1D row(std::size_t j) const;
  bool same_grid(const GridFunction2D& other) const;

private:
  GridSpec2D spec_;
  std::vector<double> values_;
};

using ScalarFn2 = std::function<double(double, double)>;

GridFunction2D sample(const ScalarFn2& f, const GridSpec2D& grid);

/// Sum of |u_{i+1,j} - u_{i,j}| dy plus sum of |u_{i,j+1} - u_{i,j}| dx.
double tv_2d(const GridFunction2D& u);

/// Initial data: samples, plus the closed form when known. Without it, values
/// at the feet come from clamped bilinear interpolation of the samples.
struct InitialData2D {
  GridFunction2D samples;
  ScalarFn2 exact;

  double operator()(double x, double y) const;
};

struct Trajectory2D {
  std::vector<double> times;
  std::vector<GridFunction2D> states;
  double epsilon = 0.0;
  double dt = 0.0;
  std::vector<int> picard_iterations;
  int ambiguous_steps = 0;
  /// tv_2d, min and max after every step; index 0 is the initial state.
  std::vector<double> step_tv;
  std::vector<double> step_min;
  std::vector<double> step_max;

  const GridFunction2D& initial() const { return states.front(); }
  const GridFunction2D& final() const { return states.back(); }
};

/// u_t + (eta * f1'(u)) u_x + (eta * f2'(u)) u_y = 0 with the tensor-product
/// mollifier, by the same backward-map scheme as the 1D solver (separable
/// monotone cubic interpolation of the map, trapezoidal feet, Picard
/// iteration on the new-time velocity). cfg.dx must equal the grid's dx.
/// Throws CflViolation, PicardDivergence, ResolutionError.
Trajectory2D solve_velocity_reg_2d(const InitialData2D& u0, const FluxSpec& f1,
                                   const FluxSpec& f2, double epsilon, double T,
                                   const SolverConfig& cfg);

} // namespace nlclaw
