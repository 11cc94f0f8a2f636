#pragma once

#include "harnack/field.hpp"
#include "harnack/parabolic.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace harnack {

// Manufactured solutions. The catalog is closed: every entry is code with
// its derivatives written out in closed form.
//
// Elliptic (torus, x = axis 0, y = axis 1, side lengths multiples of 2 pi):
//   constant      u = 2                 A = 0
//   shifted-cos   u = 2 + cos x         A = cos x
//   product       u = 3 + cos x cos y   A = 2 cos x cos y        (n >= 2)
//   exp-cos       u = exp(cos x)        A = (cos x - sin^2 x) exp(cos x)
// Elliptic (unit sphere):
//   sphere-constant  u = 2
//   sphere-harmonic  u = 2 + z + xyz/2   A = 2z + 6xyz
//
// Parabolic, all of the form u = c + g(t) phi(x) with -Delta phi = lambda phi:
//   decay               u = 2 + e^{-2t} cos x          A = -e^{-2t} cos x
//   homogeneous         u = 2 + e^{-t} cos x           A = 0
//   driven              u = 2 + sin t cos x            A = (cos t + sin t) cos x
//   decay-2d            u = 3 + e^{-t} cos x cos y     A = e^{-t} cos x cos y   (n >= 2)
//   sphere-homogeneous  u = 2 + e^{-2t} z              A = 0

struct EllipticMms {
  std::string id;
  ScalarField solution;
  ScalarField source;
  ScalarField source_grad_sq;
  ScalarField source_laplacian;
};

/// Pair with -Delta u* = A in the continuum. Throws std::invalid_argument
/// when the entry does not fit the manifold.
EllipticMms elliptic_mms(std::string_view id, const ManifoldPtr& manifold);

/// Catalog entries usable on `manifold`.
std::vector<std::string> elliptic_catalog(const Manifold& manifold);

/// Fixed-seed trigonometric polynomial with modes |m_i| <= max_mode on every
/// axis, scaled to sup-norm `amplitude`.
ScalarField band_limited_noise(const ManifoldPtr& manifold, std::uint64_t seed, int max_mode,
                               double amplitude);

/// u* = 3 + noise (amplitude 1), A = -Delta u* from the spectral Laplacian,
/// which is exact for band-limited data.
EllipticMms elliptic_noise_mms(const ManifoldPtr& manifold, std::uint64_t seed, int max_mode);

class ParabolicMms {
public:
  const std::string& id() const noexcept { return id_; }
  const ManifoldPtr& manifold() const noexcept { return manifold_; }
  bool homogeneous() const noexcept { return homogeneous_; }

  ScalarField solution(double t) const;
  ScalarField solution_rate(double t) const;
  ScalarField source(double t) const;
  ScalarField source_rate(double t) const;
  ScalarField source_laplacian(double t) const;
  /// d/dt (A/u*) written out in closed form.
  ScalarField quotient_rate(double t) const;

  /// Snapshot of the exact solution, with the exact rate when requested.
  Snapshot snapshot(double t, bool with_rate) const;

  SpaceTimeSource source_term() const;

private:
  friend struct ParabolicCatalog;
  ParabolicMms() = default;

  std::string id_;
  ManifoldPtr manifold_;
  bool homogeneous_ = false;
  double offset_ = 0.0;
  double eigenvalue_ = 0.0;
  std::vector<double> mode_;
  // g, g', g'' of the time profile.
  std::function<double(double)> g_, dg_, ddg_;
};

ParabolicMms parabolic_mms(std::string_view id, const ManifoldPtr& manifold);

std::vector<std::string> parabolic_catalog(const Manifold& manifold);

/// Largest mismatch between each catalog entry's closed-form derivatives and
/// the spectral operators on the 2-torus with N = 64. Runs once per process
/// on first use of the catalog and throws if any mismatch exceeds 1e-8.
double catalog_self_test();

} // namespace harnack
