#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace harnack {

using Point = std::array<double, 3>;

namespace detail {
class TorusSpectral;
class SphereOperators;
} // namespace detail

enum class ManifoldKind { flat_torus, unit_sphere_mesh };

struct SphereMesh {
  std::vector<Point> positions;
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> triangle_areas;
  // Barycentric lumping: one third of every incident triangle.
  std::vector<double> vertex_areas;
};

/// Discrete closed manifold: a uniform periodic grid on a flat torus or an
/// icosphere mesh of the unit sphere. Immutable after construction.
///
/// `ricci_bound()` is the constant K in the convention
/// Ric(X, X) >= -K |X|^2, which is 0 for both supported manifolds.
class Manifold {
public:
  ManifoldKind kind() const noexcept { return kind_; }
  bool is_torus() const noexcept { return kind_ == ManifoldKind::flat_torus; }
  bool is_sphere() const noexcept { return kind_ == ManifoldKind::unit_sphere_mesh; }

  int dimension() const noexcept { return dimension_; }
  std::size_t node_count() const noexcept { return weights_.size(); }
  double ricci_bound() const noexcept { return ricci_bound_; }
  double volume() const noexcept { return volume_; }

  /// Quadrature weights: uniform cell volume on the torus, lumped vertex
  /// areas on the sphere.
  std::span<const double> weights() const noexcept { return weights_; }

  // Torus data; empty on the sphere.
  std::span<const double> lengths() const noexcept { return lengths_; }
  std::span<const int> resolutions() const noexcept { return resolutions_; }

  // Sphere data.
  int subdivision() const noexcept { return subdivision_; }
  const SphereMesh& mesh() const;

  /// Node location. Torus: grid coordinates (x, y, z), unused axes are 0.
  /// Sphere: embedded position on the unit sphere.
  Point point(std::size_t node) const;

  /// Multi-index of a torus node; axis 0 varies slowest.
  std::array<int, 3> grid_index(std::size_t node) const;

  const detail::TorusSpectral& spectral() const;
  const detail::SphereOperators& sphere_operators() const;

  // Use build_flat_torus / build_unit_sphere_mesh.
  Manifold() = default;

private:
  friend std::shared_ptr<const Manifold> build_flat_torus(int, std::vector<double>,
                                                          std::vector<int>);
  friend std::shared_ptr<const Manifold> build_unit_sphere_mesh(int);

  ManifoldKind kind_ = ManifoldKind::flat_torus;
  int dimension_ = 0;
  double ricci_bound_ = 0.0;
  double volume_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> lengths_;
  std::vector<int> resolutions_;
  int subdivision_ = 0;
  std::shared_ptr<const SphereMesh> mesh_;
  std::shared_ptr<const detail::TorusSpectral> spectral_;
  std::shared_ptr<const detail::SphereOperators> sphere_ops_;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// Flat torus of dimension 1..3 with side lengths `lengths` and an even
/// number (>= 8) of nodes per axis; node j on axis i sits at j * L_i / N_i.
ManifoldPtr build_flat_torus(int dimension, std::vector<double> lengths,
                             std::vector<int> resolutions);

/// Icosahedron refined `subdivision` times (>= 2) with vertices projected
/// to the unit sphere: 10 * 4^s + 2 vertices, 20 * 4^s triangles.
ManifoldPtr build_unit_sphere_mesh(int subdivision);

class ScalarField;

/// Sum of w_j f_j with the manifold's quadrature weights.
double integrate(const ScalarField& f);

} // namespace harnack
