#pragma once

#include "harnack/geometry.hpp"

#include <Eigen/Sparse>

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace harnack::detail {

/// Cotangent stiffness matrix and P1 gradient basis of a triangle mesh.
///
/// `stiffness` is the symmetric negative semidefinite matrix L with
/// (L f)_i = sum_j w_ij (f_j - f_i), w_ij = (cot a_ij + cot b_ij) / 2, so
/// f^T L g = -sum_T area_T grad f_T . grad g_T.
class SphereOperators {
public:
  explicit SphereOperators(std::shared_ptr<const SphereMesh> mesh);

  const Eigen::SparseMatrix<double>& stiffness() const noexcept { return stiffness_; }

  /// Piecewise-constant gradient of the linear interpolant on triangle t.
  Point triangle_gradient(std::size_t t, std::span<const double> f) const;

  /// Lumped average over incident triangles of grad f_T . grad g_T:
  /// (1/A_i) sum_{T ~ i} (area_T / 3) grad f_T . grad g_T.
  std::vector<double> gradient_inner(std::span<const double> f, std::span<const double> g) const;

  std::vector<double> apply_laplacian(std::span<const double> f) const;

private:
  std::shared_ptr<const SphereMesh> mesh_;
  Eigen::SparseMatrix<double> stiffness_;
  // Per triangle, gradient of each hat function.
  std::vector<std::array<Point, 3>> basis_gradients_;
};

} // namespace harnack::detail
