#include "detail/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace harnack::detail {

namespace {

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

TorusSpectral::TorusSpectral(std::span<const int> resolutions, std::span<const double> lengths)
    : resolutions_(resolutions.begin(), resolutions.end()),
      lengths_(lengths.begin(), lengths.end()) {
  size_ = 1;
  for (int n : resolutions_)
    size_ *= static_cast<std::size_t>(n);

  for (std::size_t axis = 0; axis < resolutions_.size(); ++axis) {
    const int n = resolutions_[axis];
    const double scale = 2.0 * std::numbers::pi / lengths_[axis];
    std::vector<double> k(n), kf(n);
    for (int m = 0; m < n; ++m) {
      const int mode = m <= n / 2 ? m : m - n;
      k[m] = scale * mode;
      kf[m] = (m == n / 2) ? 0.0 : k[m];
    }
    k_.push_back(std::move(k));
    k_first_.push_back(std::move(kf));
  }

  laplacian_symbol_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    double s = 0.0;
    for (int a = 0; a < axes(); ++a) {
      const double k = wavenumber(idx, a);
      s -= k * k;
    }
    laplacian_symbol_[idx] = s;
  }

  Spectrum a(size_), b(size_);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_forward_ = fftw_plan_dft(axes(), resolutions_.data(), as_fftw(a.data()), as_fftw(b.data()),
                                FFTW_FORWARD, flags);
  plan_backward_ = fftw_plan_dft(axes(), resolutions_.data(), as_fftw(a.data()),
                                 as_fftw(b.data()), FFTW_BACKWARD, flags);
  if (!plan_forward_ || !plan_backward_)
    throw std::runtime_error("FFTW planning failed");
}

TorusSpectral::~TorusSpectral() {
  std::lock_guard lock(planner_mutex());
  if (plan_forward_)
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_backward_)
    fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

Spectrum TorusSpectral::forward(std::span<const double> values) const {
  Spectrum in(values.begin(), values.end());
  Spectrum out(size_);
  fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), as_fftw(in.data()), as_fftw(out.data()));
  return out;
}

std::vector<double> TorusSpectral::backward(const Spectrum& spectrum) const {
  Spectrum in = spectrum;
  Spectrum out(size_);
  fftw_execute_dft(static_cast<fftw_plan>(plan_backward_), as_fftw(in.data()), as_fftw(out.data()));
  std::vector<double> values(size_);
  const double norm = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i)
    values[i] = out[i].real() * norm;
  return values;
}

double TorusSpectral::wavenumber(std::size_t idx, int axis) const noexcept {
  std::size_t stride = 1;
  for (int a = axes() - 1; a > axis; --a)
    stride *= static_cast<std::size_t>(resolutions_[a]);
  const auto m = (idx / stride) % static_cast<std::size_t>(resolutions_[axis]);
  return k_[axis][m];
}

double TorusSpectral::derivative_wavenumber(std::size_t idx, int axis) const noexcept {
  std::size_t stride = 1;
  for (int a = axes() - 1; a > axis; --a)
    stride *= static_cast<std::size_t>(resolutions_[a]);
  const auto m = (idx / stride) % static_cast<std::size_t>(resolutions_[axis]);
  return k_first_[axis][m];
}

double TorusSpectral::laplacian_symbol(std::size_t idx) const noexcept {
  return laplacian_symbol_[idx];
}

std::vector<double> TorusSpectral::derivative(const Spectrum& spectrum, int axis) const {
  Spectrum s(size_);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t idx = 0; idx < size_; ++idx)
    s[idx] = i * derivative_wavenumber(idx, axis) * spectrum[idx];
  return backward(s);
}

std::vector<double> TorusSpectral::second_derivative(const Spectrum& spectrum, int a, int b) const {
  Spectrum s(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    double symbol;
    if (a == b) {
      const double k = wavenumber(idx, a);
      symbol = -k * k;
    } else {
      symbol = -derivative_wavenumber(idx, a) * derivative_wavenumber(idx, b);
    }
    s[idx] = symbol * spectrum[idx];
  }
  return backward(s);
}

std::vector<double> TorusSpectral::laplacian(const Spectrum& spectrum) const {
  Spectrum s(size_);
  for (std::size_t idx = 0; idx < size_; ++idx)
    s[idx] = laplacian_symbol_[idx] * spectrum[idx];
  return backward(s);
}

} // namespace harnack::detail
