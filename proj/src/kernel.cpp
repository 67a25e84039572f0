#include "nlclaw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

double raw_bump(double x) {
  const double s = 1.0 - x * x;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  // Rough scale first so the tolerance can be made relative.
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, b - a);
  const double scale = std::max(std::abs(whole), 1e-300);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 50);
}

constexpr int kFftRadius = 48;

struct FftPlans {
  fftw_plan forward;
  fftw_plan backward;
};

struct FftBuffer {
  explicit FftBuffer(std::size_t L)
      : real(static_cast<double*>(fftw_malloc(sizeof(double) * L))),
        spec(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (L / 2 + 1)))) {}
  ~FftBuffer() {
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  double* real;
  fftw_complex* spec;
};

// Planning is not thread-safe in FFTW, so plans are made once per length
// under a lock. ESTIMATE plans depend only on the length, which keeps results
// reproducible run to run.
FftPlans plans_for(std::size_t L) {
  static std::mutex mu;
  static std::map<std::size_t, FftPlans> plans;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(L);
  if (it == plans.end()) {
    FftBuffer buf(L);
    const int n = static_cast<int>(L);
    FftPlans p{fftw_plan_dft_r2c_1d(n, buf.real, buf.spec, FFTW_ESTIMATE),
               fftw_plan_dft_c2r_1d(n, buf.spec, buf.real, FFTW_ESTIMATE)};
    it = plans.emplace(L, p).first;
  }
  return it->second;
}

std::size_t fast_length(std::size_t m) {
  for (std::size_t L = std::max<std::size_t>(m, 2);; ++L) {
    std::size_t r = L;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) {
        r /= p;
      }
    }
    if (r == 1) {
      return L;
    }
  }
}

void convolve_fft(const Mollifier& m, std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size();
  const auto r = static_cast<std::size_t>(m.radius());
  const std::size_t M = n + 2 * r;
  const std::size_t L = fast_length(M);
  const auto& S = m.spectrum(L);
  const FftPlans plans = plans_for(L);
  const double c = 0.5 * (in.front() + in.back());
  FftBuffer buf(L);
  for (std::size_t j = 0; j < L; ++j) {
    double v = 0.0;
    if (j < r) {
      v = in.front();
    } else if (j < r + n) {
      v = in[j - r];
    } else if (j < M) {
      v = in.back();
    } else {
      buf.real[j] = 0.0;
      continue;
    }
    buf.real[j] = v - c;
  }
  fftw_execute_dft_r2c(plans.forward, buf.real, buf.spec);
  for (std::size_t k = 0; k < L / 2 + 1; ++k) {
    const std::complex<double> z(buf.spec[k][0], buf.spec[k][1]);
    const std::complex<double> p = z * S[k];
    buf.spec[k][0] = p.real();
    buf.spec[k][1] = p.imag();
  }
  fftw_execute_dft_c2r(plans.backward, buf.spec, buf.real);
  const double scale = 1.0 / static_cast<double>(L);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = c + buf.real[i + r] * scale;
  }
}

} // namespace

struct Mollifier::SpectrumCache {
  std::mutex mu;
  std::map<std::size_t, std::vector<std::complex<double>>> by_length;
};

const std::vector<std::complex<double>>& Mollifier::spectrum(std::size_t L) const {
  const std::lock_guard<std::mutex> lock(spectra_->mu);
  auto it = spectra_->by_length.find(L);
  if (it != spectra_->by_length.end()) {
    return it->second;
  }
  const FftPlans plans = plans_for(L);
  FftBuffer buf(L);
  std::fill(buf.real, buf.real + L, 0.0);
  for (int k = -radius_; k <= radius_; ++k) {
    const auto idx = static_cast<std::size_t>((k + static_cast<long>(L)) % static_cast<long>(L));
    buf.real[idx] += weight(k);
  }
  fftw_execute_dft_r2c(plans.forward, buf.real, buf.spec);
  std::vector<std::complex<double>> S(L / 2 + 1);
  for (std::size_t k = 0; k < S.size(); ++k) {
    S[k] = {buf.spec[k][0], buf.spec[k][1]};
  }
  return spectra_->by_length.emplace(L, std::move(S)).first->second;
}

double mollifier_normalization() {
  static const double value = integrate(raw_bump, -1.0, 1.0, 1e-10);
  return value;
}

double standard_bump(double x) { return raw_bump(x) / mollifier_normalization(); }

Mollifier::Mollifier(double epsilon, double dx, std::vector<double> weights, double normalization)
    : epsilon_(epsilon), dx_(dx), radius_(static_cast<int>(weights.size() / 2)),
      weights_(std::move(weights)), normalization_(normalization),
      spectra_(std::make_shared<SpectrumCache>()) {
  if (weights_.size() % 2 != 1) {
    throw InvalidArgument("mollifier weights must have odd length");
  }
}

double Mollifier::weight(int k) const {
  if (k < -radius_ || k > radius_) {
    return 0.0;
  }
  return weights_[static_cast<std::size_t>(k + radius_)];
}

double Mollifier::sup_density() const {
  return *std::max_element(weights_.begin(), weights_.end()) / dx_;
}

Mollifier build_mollifier(double epsilon, double dx, const std::function<double(double)>& profile) {
  if (!(epsilon > 0.0) || !(dx > 0.0)) {
    throw InvalidArgument("epsilon and dx must be positive");
  }
  if (epsilon < dx * (1.0 - 1e-12)) {
    throw ResolutionError("kernel under-resolved: epsilon is smaller than the grid spacing");
  }
  const int r = static_cast<int>(std::ceil(epsilon / dx - 1e-9));
  std::vector<double> side(static_cast<std::size_t>(r) + 1);
  for (int k = 0; k <= r; ++k) {
    const double s = k * dx / epsilon;
    side[static_cast<std::size_t>(k)] = s < 1.0 ? profile(s) : 0.0;
  }
  double tail = 0.0;
  for (int k = 1; k <= r; ++k) {
    tail += side[static_cast<std::size_t>(k)];
  }
  const double total = side[0] + 2.0 * tail;
  if (!(total > 0.0)) {
    throw ResolutionError("kernel has no mass on this grid");
  }
  for (double& w : side) {
    w /= total;
  }
  // Centre weight absorbs the rounding so the discrete mass is one.
  double half = 0.0;
  for (int k = 1; k <= r; ++k) {
    half += side[static_cast<std::size_t>(k)];
  }
  side[0] = 1.0 - 2.0 * half;

  std::vector<double> weights(2 * static_cast<std::size_t>(r) + 1);
  for (int k = -r; k <= r; ++k) {
    weights[static_cast<std::size_t>(k + r)] = side[static_cast<std::size_t>(std::abs(k))];
  }
  return {epsilon, dx, std::move(weights), mollifier_normalization()};
}

void convolve_into(const Mollifier& m, std::span<const double> in, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  const int r = m.radius();
  if (r > kFftRadius) {
    if (std::all_of(in.begin(), in.end(), [&](double v) { return v == in.front(); })) {
      std::fill(out.begin(), out.end(), in.front());
      return;
    }
    convolve_fft(m, in, out);
    return;
  }
  const auto w = m.weights().subspan(static_cast<std::size_t>(r));
  const double first = in.front();
  const double last = in.back();
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double ui = in[static_cast<std::size_t>(i)];
    double acc = 0.0;
    if (i - r >= 0 && i + r < n) {
      const double* p = in.data() + i;
      for (int k = 1; k <= r; ++k) {
        acc += w[static_cast<std::size_t>(k)] * ((p[-k] + p[k]) - 2.0 * ui);
      }
    } else {
      for (int k = 1; k <= r; ++k) {
        const double lo = i - k >= 0 ? in[static_cast<std::size_t>(i - k)] : first;
        const double hi = i + k < n ? in[static_cast<std::size_t>(i + k)] : last;
        acc += w[static_cast<std::size_t>(k)] * ((lo + hi) - 2.0 * ui);
      }
    }
    out[static_cast<std::size_t>(i)] = ui + acc;
  }
}

void convolve_axis_into(const Mollifier& m, std::span<const double> in, std::span<double> out,
                        std::size_t nx, std::size_t ny, int axis) {
  if (axis == 0) {
    for (std::size_t j = 0; j < ny; ++j) {
      convolve_into(m, in.subspan(j * nx, nx), out.subspan(j * nx, nx));
    }
    return;
  }
  std::vector<double> col(ny);
  std::vector<double> res(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      col[j] = in[j * nx + i];
    }
    convolve_into(m, col, res);
    for (std::size_t j = 0; j < ny; ++j) {
      out[j * nx + i] = res[j];
    }
  }
}

GridFunction1D convolve(const Mollifier& m, const GridFunction1D& u) {
  if (std::abs(m.dx() - u.dx()) > 1e-12 * u.dx()) {
    throw GridMismatch("mollifier was built for a different grid spacing");
  }
  std::vector<double> out(u.size());
  convolve_into(m, u.values(), out);
  return {u.x0(), u.dx(), std::move(out)};
}

} // namespace nlclaw
