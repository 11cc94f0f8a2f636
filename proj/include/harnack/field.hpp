#pragma once

#include "harnack/geometry.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace harnack {

/// Real values at the nodes of a manifold. Values are always finite; any
/// operation that would produce NaN or Inf throws std::domain_error.
class ScalarField {
public:
  ScalarField(ManifoldPtr manifold, std::vector<double> values);

  static ScalarField constant(ManifoldPtr manifold, double value);
  static ScalarField sample(ManifoldPtr manifold,
                            const std::function<double(const Point&)>& fn);

  const Manifold& manifold() const noexcept { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const noexcept { return manifold_; }
  bool same_manifold(const ScalarField& other) const noexcept {
    return manifold_ == other.manifold_;
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double min() const;
  double max() const;
  double sup_norm() const;
  std::size_t argmax() const;
  std::size_t argmin() const;

  /// Pointwise fn(value).
  ScalarField map(const std::function<double(double)>& fn) const;

  ScalarField operator-() const;
  ScalarField& operator+=(const ScalarField& rhs);
  ScalarField& operator-=(const ScalarField& rhs);
  ScalarField& operator*=(const ScalarField& rhs);
  ScalarField& operator/=(const ScalarField& rhs);
  ScalarField& operator+=(double rhs);
  ScalarField& operator*=(double rhs);

private:
  void require_same(const ScalarField& rhs) const;
  void check_finite() const;

  ManifoldPtr manifold_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(ScalarField lhs, const ScalarField& rhs);
ScalarField operator/(ScalarField lhs, const ScalarField& rhs);
ScalarField operator+(ScalarField lhs, double rhs);
ScalarField operator-(ScalarField lhs, double rhs);
ScalarField operator*(ScalarField lhs, double rhs);
ScalarField operator*(double lhs, ScalarField rhs);
ScalarField operator+(double lhs, ScalarField rhs);
ScalarField operator-(double lhs, ScalarField rhs);
ScalarField operator/(ScalarField lhs, double rhs);

/// Throws std::invalid_argument unless both fields live on the same manifold.
void require_same_manifold(const ScalarField& a, const ScalarField& b);

} // namespace harnack
