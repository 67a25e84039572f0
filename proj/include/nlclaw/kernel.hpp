#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nlclaw/grid.hpp"

namespace nlclaw {

/// I = integral of exp(-1/(1-x^2)) over (-1, 1), by adaptive Simpson
/// quadrature to relative tolerance 1e-10.
double mollifier_normalization();

/// Unit-mass bump eta(x) = exp(-1/(1-x^2)) / I on (-1, 1), zero elsewhere.
double standard_bump(double x);

/// Discrete symmetric kernel of half-width epsilon on a grid of spacing dx.
/// weights are stored for offsets -r..r (r = ceil(epsilon/dx)), nonnegative,
/// symmetric, zero outside |k|*dx <= epsilon, and summing to one.
class Mollifier {
public:
  Mollifier(double epsilon, double dx, std::vector<double> weights, double normalization);

  double epsilon() const { return epsilon_; }
  double dx() const { return dx_; }
  int radius() const { return radius_; }
  double normalization() const { return normalization_; }

  /// Weight for offset k in [-r, r]; zero outside.
  double weight(int k) const;
  std::span<const double> weights() const { return weights_; }

  /// Discrete sup norm of eta_epsilon: max weight / dx.
  double sup_density() const;

  /// Discrete Fourier transform (real-to-complex, length L) of the weights laid
  /// out circularly; computed once per length and shared between copies.
  const std::vector<std::complex<double>>& spectrum(std::size_t L) const;

private:
  struct SpectrumCache;
  double epsilon_;
  double dx_;
  int radius_;
  std::vector<double> weights_;
  double normalization_;
  std::shared_ptr<SpectrumCache> spectra_;
};

/// Builds the mollifier from a profile on (-1, 1) (the standard bump by
/// default). Throws ResolutionError when epsilon < dx.
Mollifier build_mollifier(double epsilon, double dx,
                          const std::function<double(double)>& profile = standard_bump);

/// (eta_eps * u)(x_i) = sum_k w_k u(x_{i-k}) with constant continuation of
/// the end values. Throws GridMismatch if the spacings differ.
GridFunction1D convolve(const Mollifier& m, const GridFunction1D& u);

/// Raw form used by the solvers: convolves `in` (spacing m.dx()) into `out`.
/// Narrow kernels are summed directly as u_i + sum_{k>0} w_k (u_{i-k} + u_{i+k}
/// - 2 u_i); wide ones (radius above 48) go through an FFT of the data minus
/// the mean end value. Both are exact for constants.
void convolve_into(const Mollifier& m, std::span<const double> in, std::span<double> out);

/// Same, along one axis of a row-major nx-by-ny array (axis 0 = x, fastest
/// varying index is x).
void convolve_axis_into(const Mollifier& m, std::span<const double> in, std::span<double> out,
                        std::size_t nx, std::size_t ny, int axis);

} // namespace nlclaw
