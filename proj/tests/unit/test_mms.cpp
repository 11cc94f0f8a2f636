#include "harnack/calculus.hpp"
#include "harnack/convergence.hpp"
#include "harnack/mms.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace harnack;
using std::numbers::pi;

namespace {

ManifoldPtr torus(int n, int N) {
  return build_flat_torus(n, std::vector<double>(n, 2 * pi), std::vector<int>(n, N));
}

ScalarField sample(const ManifoldPtr& m, double (*fn)(const Point&)) {
  return ScalarField::sample(m, fn);
}

} // namespace

TEST_CASE("catalog derivatives agree with the discrete operators") {
  CHECK(catalog_self_test() <= 1e-8);
}

TEST_CASE("elliptic catalog entries") {
  const auto m = torus(2, 64);
  const auto sc = elliptic_mms("shifted-cos", m);
  CHECK((sc.source - sample(m, [](const Point& p) { return std::cos(p[0]); })).sup_norm() < 1e-15);
  const auto pr = elliptic_mms("product", m);
  CHECK((pr.source - sample(m, [](const Point& p) { return 2 * std::cos(p[0]) * std::cos(p[1]); })).sup_norm() < 1e-15);
  for (const auto& id : elliptic_catalog(*m)) {
    const auto e = elliptic_mms(id, m);
    CHECK((laplace_beltrami(e.solution) + e.source).sup_norm() < 1e-10);
    CHECK(std::abs(integrate(e.source)) < 1e-12);
    CHECK(e.solution.min() >= 0.1);
    CHECK((gradient_norm_sq(e.source) - e.source_grad_sq).sup_norm() < 1e-9);
  }
  CHECK(elliptic_catalog(*m).size() == 4);
  CHECK_THROWS_AS(elliptic_mms("product", torus(1, 32)), std::invalid_argument);
  CHECK_THROWS_AS(elliptic_mms("sphere-harmonic", m), std::invalid_argument);
  CHECK_THROWS_AS(elliptic_mms("nope", m), std::invalid_argument);
  CHECK_THROWS_AS(elliptic_mms("shifted-cos", build_flat_torus(1, {3.0}, {32})), std::invalid_argument);
}

TEST_CASE("sphere catalog") {
  const auto s = build_unit_sphere_mesh(3);
  CHECK(elliptic_catalog(*s) == std::vector<std::string>{"sphere-constant", "sphere-harmonic"});
  const auto e = elliptic_mms("sphere-harmonic", s);
  // Odd harmonics integrate to zero against the symmetric lumped weights.
  CHECK(std::abs(integrate(e.source)) < 1e-12);
  CHECK(e.solution.min() > 0.1);
  // Continuum pair; the cotangent Laplacian is O(h^2) consistent.
  CHECK((laplace_beltrami(e.solution) + e.source).sup_norm() < 0.5);
}

TEST_CASE("parabolic catalog entries") {
  const auto m = torus(1, 64);
  const double t = 0.7;
  const auto decay = parabolic_mms("decay", m);
  CHECK((decay.source(t) - sample(m, [](const Point& p) { return -std::exp(-1.4) * std::cos(p[0]); })).sup_norm() < 1e-15);
  const auto driven = parabolic_mms("driven", m);
  const auto expected = ScalarField::sample(m, [t](const Point& p) {
    return (std::cos(t) + std::sin(t)) * std::cos(p[0]);
  });
  CHECK((driven.source(t) - expected).sup_norm() < 1e-15);
  CHECK(parabolic_mms("homogeneous", m).homogeneous());
  for (const auto& id : parabolic_catalog(*m)) {
    const auto p = parabolic_mms(id, m);
    const double h = 1e-4;
    // Closed-form rates against centered differences.
    CHECK((p.solution_rate(t) - centered_rate(p.solution(t - h), p.solution(t + h), h)).sup_norm() < 1e-7);
    CHECK((p.source_rate(t) - centered_rate(p.source(t - h), p.source(t + h), h)).sup_norm() < 1e-7);
    CHECK((p.quotient_rate(t) - centered_rate(p.source(t - h) / p.solution(t - h),
                                              p.source(t + h) / p.solution(t + h), h)).sup_norm() < 1e-7);
    // The source closes the equation.
    CHECK((p.solution_rate(t) - laplace_beltrami(p.solution(t)) - p.source(t)).sup_norm() < 1e-12);
    CHECK((laplace_beltrami(p.source(t)) - p.source_laplacian(t)).sup_norm() < 1e-12);
    for (double s : {0.0, 0.5, 1.0})
      CHECK(p.solution(s).min() >= 0.1);
  }
  CHECK_THROWS_AS(parabolic_mms("decay-2d", m), std::invalid_argument);
}

TEST_CASE("band-limited noise is seeded and band-limited") {
  const auto m = torus(2, 32);
  const auto a = band_limited_noise(m, 11, 8, 1.0);
  const auto b = band_limited_noise(m, 11, 8, 1.0);
  const auto c = band_limited_noise(m, 12, 8, 1.0);
  CHECK((a - b).sup_norm() == 0.0);
  CHECK((a - c).sup_norm() > 1e-3);
  CHECK(a.sup_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(band_limited_noise(m, 1, 9, 1.0), std::invalid_argument);
  const auto e = elliptic_noise_mms(m, 3, 4);
  CHECK(e.solution.min() >= 2.0 - 1e-12);
  CHECK((laplace_beltrami(e.solution) + e.source).sup_norm() < 1e-12);
}

TEST_CASE("convergence study measures orders") {
  ResidualCheck quad{"synthetic", RefinedParameter::time, 2.0,
                     [](const RefinementLevel& l) { return 3.0 * l.dt * l.dt; }};
  const std::vector<RefinementLevel> levels = {{64, 4e-3}, {64, 2e-3}, {64, 1e-3}};
  const auto t = convergence_study(quad, levels);
  REQUIRE(t.rows.size() == 3);
  CHECK(std::isnan(t.rows[0].order));
  CHECK(t.rows[1].order == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.rows[2].order == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.converged);

  ResidualCheck slow = quad;
  slow.evaluate = [](const RefinementLevel& l) { return l.dt; };
  CHECK_FALSE(convergence_study(slow, levels).converged);

  ResidualCheck floor = quad;
  floor.evaluate = [](const RefinementLevel&) { return 1e-13; };
  const auto f = convergence_study(floor, levels);
  CHECK(std::isnan(f.rows[2].order));
  CHECK(f.converged);

  CHECK_THROWS_AS(convergence_study(quad, std::vector<RefinementLevel>(levels.begin(), levels.begin() + 2)),
                  std::invalid_argument);
  const std::vector<RefinementLevel> same = {{64, 1e-3}, {64, 1e-3}, {64, 1e-3}};
  CHECK_THROWS_AS(convergence_study(quad, same), std::invalid_argument);
}

TEST_CASE("built-in studies") {
  const auto names = named_checks();
  CHECK(names.size() >= 10);
  CHECK_THROWS_AS(named_check("unknown"), std::invalid_argument);
  const auto bochner = named_check("bochner:exp-cos");
  const auto t = convergence_study(bochner, default_levels(bochner));
  CHECK(t.converged);
  CHECK(t.rows[1].order > 4.0);
  const auto F = named_check("F-evolution:decay");
  const auto tf = convergence_study(F, default_levels(F));
  CHECK(tf.rows[2].order == doctest::Approx(2.0).epsilon(0.05));
}
