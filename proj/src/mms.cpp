#include "harnack/mms.hpp"

#include "harnack/calculus.hpp"
#include "harnack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace harnack {

namespace {

using std::cos;
using std::exp;
using std::sin;

constexpr double kSelfTestTolerance = 1e-8;

struct EllipticEntry {
  const char* id;
  bool sphere;
  int min_dimension;
  double (*u)(const Point&);
  double (*source)(const Point&);
  Point (*source_grad)(const Point&);
  double (*source_laplacian)(const Point&);
};

Point tangential(const Point& g, const Point& p) {
  const double normal = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
  return {g[0] - normal * p[0], g[1] - normal * p[1], g[2] - normal * p[2]};
}

const EllipticEntry kElliptic[] = {
    {"constant", false, 1, [](const Point&) { return 2.0; }, [](const Point&) { return 0.0; },
     [](const Point&) { return Point{0, 0, 0}; }, [](const Point&) { return 0.0; }},
    {"shifted-cos", false, 1, [](const Point& p) { return 2.0 + cos(p[0]); },
     [](const Point& p) { return cos(p[0]); },
     [](const Point& p) { return Point{-sin(p[0]), 0, 0}; },
     [](const Point& p) { return -cos(p[0]); }},
    {"product", false, 2, [](const Point& p) { return 3.0 + cos(p[0]) * cos(p[1]); },
     [](const Point& p) { return 2.0 * cos(p[0]) * cos(p[1]); },
     [](const Point& p) {
       return Point{-2.0 * sin(p[0]) * cos(p[1]), -2.0 * cos(p[0]) * sin(p[1]), 0};
     },
     [](const Point& p) { return -4.0 * cos(p[0]) * cos(p[1]); }},
    {"exp-cos", false, 1, [](const Point& p) { return exp(cos(p[0])); },
     [](const Point& p) {
       const double c = cos(p[0]), s = sin(p[0]);
       return (c - s * s) * exp(c);
     },
     [](const Point& p) {
       const double c = cos(p[0]), s = sin(p[0]);
       return Point{-exp(c) * s * c * (c + 3.0), 0, 0};
     },
     [](const Point& p) {
       const double c = cos(p[0]), s = sin(p[0]);
       return exp(c) * (s * s * c * c + 5.0 * s * s * c + 3.0 * s * s - c * c * c - 3.0 * c * c);
     }},
    {"sphere-constant", true, 2, [](const Point&) { return 2.0; }, [](const Point&) { return 0.0; },
     [](const Point&) { return Point{0, 0, 0}; }, [](const Point&) { return 0.0; }},
    {"sphere-harmonic", true, 2,
     [](const Point& p) { return 2.0 + p[2] + 0.5 * p[0] * p[1] * p[2]; },
     [](const Point& p) { return 2.0 * p[2] + 6.0 * p[0] * p[1] * p[2]; },
     [](const Point& p) {
       return tangential({6.0 * p[1] * p[2], 6.0 * p[0] * p[2], 2.0 + 6.0 * p[0] * p[1]}, p);
     },
     [](const Point& p) { return -4.0 * p[2] - 72.0 * p[0] * p[1] * p[2]; }},
};

struct ParabolicEntry {
  const char* id;
  bool sphere;
  int min_dimension;
  double offset;
  double eigenvalue;
  double (*mode)(const Point&);
  double (*g)(double);
  double (*dg)(double);
  double (*ddg)(double);
};

const ParabolicEntry kParabolic[] = {
    {"decay", false, 1, 2.0, 1.0, [](const Point& p) { return cos(p[0]); },
     [](double t) { return exp(-2.0 * t); }, [](double t) { return -2.0 * exp(-2.0 * t); },
     [](double t) { return 4.0 * exp(-2.0 * t); }},
    {"homogeneous", false, 1, 2.0, 1.0, [](const Point& p) { return cos(p[0]); },
     [](double t) { return exp(-t); }, [](double t) { return -exp(-t); },
     [](double t) { return exp(-t); }},
    {"driven", false, 1, 2.0, 1.0, [](const Point& p) { return cos(p[0]); },
     [](double t) { return sin(t); }, [](double t) { return cos(t); },
     [](double t) { return -sin(t); }},
    {"decay-2d", false, 2, 3.0, 2.0, [](const Point& p) { return cos(p[0]) * cos(p[1]); },
     [](double t) { return exp(-t); }, [](double t) { return -exp(-t); },
     [](double t) { return exp(-t); }},
    {"sphere-homogeneous", true, 2, 2.0, 2.0, [](const Point& p) { return p[2]; },
     [](double t) { return exp(-2.0 * t); }, [](double t) { return -2.0 * exp(-2.0 * t); },
     [](double t) { return 4.0 * exp(-2.0 * t); }},
};

bool fits(bool sphere, int min_dimension, const Manifold& m) {
  if (sphere != m.is_sphere() || m.dimension() < min_dimension)
    return false;
  if (m.is_sphere())
    return true;
  // Trigonometric entries need whole periods on every axis.
  for (double length : m.lengths()) {
    const double periods = length / (2.0 * std::numbers::pi);
    if (std::abs(periods - std::round(periods)) > 1e-12 * periods || std::round(periods) < 1)
      return false;
  }
  return true;
}

template <class Entry, std::size_t N>
const Entry& find_entry(const Entry (&table)[N], std::string_view id, const Manifold& m,
                        const char* what) {
  for (const auto& e : table) {
    if (id != e.id)
      continue;
    if (!fits(e.sphere, e.min_dimension, m))
      throw std::invalid_argument(std::string(what) + " entry '" + std::string(id) +
                                  "' does not fit this manifold");
    return e;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " entry '" + std::string(id) + "'");
}

EllipticMms make_elliptic(std::string_view id, const ManifoldPtr& m) {
  const auto& e = find_entry(kElliptic, id, *m, "elliptic catalog");
  return {e.id, ScalarField::sample(m, e.u), ScalarField::sample(m, e.source),
          ScalarField::sample(m,
                              [&](const Point& p) {
                                const Point g = e.source_grad(p);
                                return g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
                              }),
          ScalarField::sample(m, e.source_laplacian)};
}

void ensure_self_test() {
  static std::once_flag once;
  std::call_once(once, [] {
    const double defect = catalog_self_test();
    if (defect > kSelfTestTolerance)
      throw std::logic_error("manufactured-solution catalog self-test failed: defect " +
                             std::to_string(defect));
  });
}

} // namespace

// ---------------------------------------------------------------------------
// Elliptic

EllipticMms elliptic_mms(std::string_view id, const ManifoldPtr& manifold) {
  ensure_self_test();
  return make_elliptic(id, manifold);
}

std::vector<std::string> elliptic_catalog(const Manifold& manifold) {
  std::vector<std::string> ids;
  for (const auto& e : kElliptic)
    if (fits(e.sphere, e.min_dimension, manifold))
      ids.emplace_back(e.id);
  return ids;
}

ScalarField band_limited_noise(const ManifoldPtr& manifold, std::uint64_t seed, int max_mode,
                               double amplitude) {
  if (!manifold->is_torus())
    throw UnsupportedManifold("band_limited_noise is defined on the flat torus");
  if (max_mode < 1)
    throw std::invalid_argument("band_limited_noise: max_mode must be >= 1");
  for (int n : manifold->resolutions())
    if (max_mode > n / 4)
      throw std::invalid_argument("band_limited_noise: max_mode exceeds N/4");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const int dim = manifold->dimension();
  std::vector<double> values(manifold->node_count(), 0.0);
  std::array<int, 3> mode{0, 0, 0};
  const int span = 2 * max_mode + 1;
  int total = 1;
  for (int a = 0; a < dim; ++a)
    total *= span;
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    for (int a = 0; a < dim; ++a) {
      mode[a] = rest % span - max_mode;
      rest /= span;
    }
    const double c = coeff(rng);
    const double s = coeff(rng);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Point p = manifold->point(i);
      double phase = 0.0;
      for (int a = 0; a < dim; ++a)
        phase += mode[a] * 2.0 * std::numbers::pi * p[a] / manifold->lengths()[a];
      values[i] += c * std::cos(phase) + s * std::sin(phase);
    }
  }
  double sup = 0.0;
  for (double v : values)
    sup = std::max(sup, std::abs(v));
  for (double& v : values)
    v *= amplitude / sup;
  return ScalarField(manifold, std::move(values));
}

EllipticMms elliptic_noise_mms(const ManifoldPtr& manifold, std::uint64_t seed, int max_mode) {
  auto u = band_limited_noise(manifold, seed, max_mode, 1.0) + 3.0;
  auto source = -laplace_beltrami(u);
  return {"noise", u, source, gradient_norm_sq(source), laplace_beltrami(source)};
}

// ---------------------------------------------------------------------------
// Parabolic

struct ParabolicCatalog {
  static ParabolicMms make(std::string_view id, const ManifoldPtr& m);
};

ParabolicMms ParabolicCatalog::make(std::string_view id, const ManifoldPtr& m) {
  const auto& e = find_entry(kParabolic, id, *m, "parabolic catalog");
  ParabolicMms p;
  p.id_ = e.id;
  p.manifold_ = m;
  p.offset_ = e.offset;
  p.eigenvalue_ = e.eigenvalue;
  const auto mode = ScalarField::sample(m, e.mode);
  p.mode_.assign(mode.values().begin(), mode.values().end());
  p.g_ = e.g;
  p.dg_ = e.dg;
  p.ddg_ = e.ddg;
  // A = (g' + lambda g) phi vanishes identically for these profiles.
  p.homogeneous_ = std::abs(e.dg(0.3) + e.eigenvalue * e.g(0.3)) < 1e-15 &&
                   std::abs(e.dg(1.7) + e.eigenvalue * e.g(1.7)) < 1e-15;
  return p;
}

ScalarField ParabolicMms::solution(double t) const {
  const double g = g_(t);
  std::vector<double> v(mode_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = offset_ + g * mode_[i];
  return ScalarField(manifold_, std::move(v));
}

ScalarField ParabolicMms::solution_rate(double t) const {
  return ScalarField(manifold_, mode_) * dg_(t);
}

ScalarField ParabolicMms::source(double t) const {
  if (homogeneous_)
    return ScalarField::constant(manifold_, 0.0);
  return ScalarField(manifold_, mode_) * (dg_(t) + eigenvalue_ * g_(t));
}

ScalarField ParabolicMms::source_rate(double t) const {
  if (homogeneous_)
    return ScalarField::constant(manifold_, 0.0);
  return ScalarField(manifold_, mode_) * (ddg_(t) + eigenvalue_ * dg_(t));
}

ScalarField ParabolicMms::source_laplacian(double t) const { return -eigenvalue_ * source(t); }

ScalarField ParabolicMms::quotient_rate(double t) const {
  if (homogeneous_)
    return ScalarField::constant(manifold_, 0.0);
  // With h = g' + lambda g:  d/dt [h phi / (c + g phi)]
  //   = (c h' phi + (h' g - h g') phi^2) / (c + g phi)^2.
  const double g = g_(t), dg = dg_(t);
  const double h = dg + eigenvalue_ * g;
  const double dh = ddg_(t) + eigenvalue_ * dg;
  std::vector<double> v(mode_.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double phi = mode_[i];
    const double denom = offset_ + g * phi;
    v[i] = (offset_ * dh * phi + (dh * g - h * dg) * phi * phi) / (denom * denom);
  }
  return ScalarField(manifold_, std::move(v));
}

Snapshot ParabolicMms::snapshot(double t, bool with_rate) const {
  Snapshot s{t, solution(t), source(t), std::nullopt};
  if (with_rate)
    s.u_t = solution_rate(t);
  return s;
}

SpaceTimeSource ParabolicMms::source_term() const {
  if (homogeneous_)
    return SpaceTimeSource::zero(manifold_);
  auto self = *this;
  return SpaceTimeSource::analytic(
      manifold_, [self](double t) { return self.source(t); },
      [self](double t) { return self.source_rate(t); },
      [self](double t) { return self.source_laplacian(t); });
}

ParabolicMms parabolic_mms(std::string_view id, const ManifoldPtr& manifold) {
  ensure_self_test();
  return ParabolicCatalog::make(id, manifold);
}

std::vector<std::string> parabolic_catalog(const Manifold& manifold) {
  std::vector<std::string> ids;
  for (const auto& e : kParabolic)
    if (fits(e.sphere, e.min_dimension, manifold))
      ids.emplace_back(e.id);
  return ids;
}

// ---------------------------------------------------------------------------

double catalog_self_test() {
  const auto torus = build_flat_torus(2, {2.0 * std::numbers::pi, 2.0 * std::numbers::pi},
                                      {64, 64});
  double worst = 0.0;
  auto track = [&](const ScalarField& a, const ScalarField& b) {
    worst = std::max(worst, (a - b).sup_norm());
  };
  for (const auto& id : elliptic_catalog(*torus)) {
    const auto p = make_elliptic(id, torus);
    track(-laplace_beltrami(p.solution), p.source);
    track(gradient_norm_sq(p.source), p.source_grad_sq);
    track(laplace_beltrami(p.source), p.source_laplacian);
  }
  for (const auto& id : parabolic_catalog(*torus)) {
    const auto p = ParabolicCatalog::make(id, torus);
    for (double t : {0.0, 0.5, 1.0}) {
      // A = u_t - Delta u and the closed-form source derivatives.
      track(p.solution_rate(t) - laplace_beltrami(p.solution(t)), p.source(t));
      track(laplace_beltrami(p.source(t)), p.source_laplacian(t));
    }
  }
  return worst;
}

} // namespace harnack
