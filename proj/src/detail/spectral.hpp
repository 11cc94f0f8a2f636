#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace harnack::detail {

using Spectrum = std::vector<std::complex<double>>;

/// Complex FFT pair on a periodic grid of up to three axes plus the
/// wavenumber tables needed for spectral differentiation.
///
/// First-derivative wavenumbers have the Nyquist entry zeroed; the
/// second-derivative symbol keeps it, so the Laplacian is -sum k_i^2 on
/// every mode.
class TorusSpectral {
public:
  TorusSpectral(std::span<const int> resolutions, std::span<const double> lengths);
  ~TorusSpectral();
  TorusSpectral(const TorusSpectral&) = delete;
  TorusSpectral& operator=(const TorusSpectral&) = delete;

  std::size_t size() const noexcept { return size_; }
  int axes() const noexcept { return static_cast<int>(resolutions_.size()); }

  Spectrum forward(std::span<const double> values) const;
  /// Inverse transform, normalized, real part.
  std::vector<double> backward(const Spectrum& spectrum) const;

  /// Wavenumber of flat spectral index `idx` along `axis`.
  double wavenumber(std::size_t idx, int axis) const noexcept;
  /// Same but zero at the Nyquist mode.
  double derivative_wavenumber(std::size_t idx, int axis) const noexcept;
  double laplacian_symbol(std::size_t idx) const noexcept;

  /// d/dx_axis of `values`.
  std::vector<double> derivative(const Spectrum& spectrum, int axis) const;
  /// d^2/(dx_i dx_j).
  std::vector<double> second_derivative(const Spectrum& spectrum, int i, int j) const;
  std::vector<double> laplacian(const Spectrum& spectrum) const;

private:
  std::vector<int> resolutions_;
  std::vector<double> lengths_;
  std::size_t size_ = 0;
  // Per axis, per 1D index.
  std::vector<std::vector<double>> k_;
  std::vector<std::vector<double>> k_first_;
  std::vector<double> laplacian_symbol_;
  void* plan_forward_ = nullptr;
  void* plan_backward_ = nullptr;
};

} // namespace harnack::detail
