#include "harnack/calculus.hpp"
#include "harnack/field.hpp"
#include "harnack/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace harnack;
using std::numbers::pi;

TEST_CASE("flat torus nodes, weights and volume") {
  const auto m = build_flat_torus(2, {2 * pi, 4 * pi}, {16, 32});
  CHECK(m->dimension() == 2);
  CHECK(m->node_count() == 16 * 32);
  CHECK(m->volume() == doctest::Approx(8 * pi * pi).epsilon(1e-14));
  double total = 0;
  for (double w : m->weights())
    total += w;
  CHECK(total == doctest::Approx(m->volume()).epsilon(1e-13));
  // Axis 0 varies slowest.
  CHECK(m->grid_index(1)[1] == 1);
  CHECK(m->grid_index(32)[0] == 1);
  CHECK(m->point(33)[0] == doctest::Approx(2 * pi / 16));
  CHECK(m->point(33)[1] == doctest::Approx(4 * pi / 32));
  CHECK(m->ricci_bound() == 0.0);
}

TEST_CASE("flat torus rejects bad parameters") {
  CHECK_THROWS_AS(build_flat_torus(0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(4, {1, 1, 1, 1}, {8, 8, 8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(1, {2 * pi}, {15}), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(1, {2 * pi}, {6}), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(1, {-1.0}, {16}), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(2, {2 * pi}, {16, 16}), std::invalid_argument);
}

TEST_CASE("icosphere counts and area") {
  const auto s2 = build_unit_sphere_mesh(2);
  CHECK(s2->node_count() == 162);
  CHECK(s2->mesh().triangles.size() == 320);
  const auto s3 = build_unit_sphere_mesh(3);
  CHECK(s3->node_count() == 642);
  CHECK(s3->mesh().triangles.size() == 1280);
  // Independent flat-triangle area sum of the same refinement.
  CHECK(s3->volume() == doctest::Approx(12.506492733969862).epsilon(1e-12));
  CHECK(std::abs(s3->volume() - 4 * pi) / (4 * pi) < 5e-3);
  for (const auto& p : s3->mesh().positions)
    CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(1.0).epsilon(1e-14));
  double lumped = 0;
  for (double w : s3->weights())
    lumped += w;
  CHECK(lumped == doctest::Approx(s3->volume()).epsilon(1e-13));
  CHECK(s3->dimension() == 2);
  CHECK_THROWS_AS(build_unit_sphere_mesh(1), std::invalid_argument);
}

TEST_CASE("sphere area converges at second order") {
  const double e3 = 4 * pi - build_unit_sphere_mesh(3)->volume();
  const double e4 = 4 * pi - build_unit_sphere_mesh(4)->volume();
  CHECK(build_unit_sphere_mesh(4)->volume() == doctest::Approx(12.551353880096176).epsilon(1e-12));
  CHECK(e3 / e4 > 3.5);
}

TEST_CASE("integrate uses the quadrature weights") {
  const auto m = build_flat_torus(1, {2 * pi}, {32});
  const auto f = ScalarField::sample(m, [](const Point& p) { return 1.0 + std::cos(p[0]); });
  CHECK(integrate(f) == doctest::Approx(2 * pi).epsilon(1e-14));
  const auto s = build_unit_sphere_mesh(3);
  CHECK(integrate(ScalarField::constant(s, 1.0)) == doctest::Approx(s->volume()));
}

TEST_CASE("scalar fields enforce finiteness and a shared manifold") {
  const auto m = build_flat_torus(1, {2 * pi}, {8});
  const auto other = build_flat_torus(1, {2 * pi}, {8});
  CHECK_THROWS_AS(ScalarField(m, std::vector<double>(7, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField(m, std::vector<double>(8, NAN)), std::domain_error);
  const auto one = ScalarField::constant(m, 1.0);
  CHECK_THROWS_AS(one / ScalarField::constant(m, 0.0), std::domain_error);
  CHECK_THROWS_AS(one + ScalarField::constant(other, 1.0), std::invalid_argument);
  const auto f = ScalarField::sample(m, [](const Point& p) { return std::sin(p[0]); });
  CHECK(f.argmax() == 2);
  CHECK(f.argmin() == 6);
  CHECK((2.0 * f - f * 2.0).sup_norm() == 0.0);
}
