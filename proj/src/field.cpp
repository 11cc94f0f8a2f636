#include "harnack/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace harnack {

ScalarField::ScalarField(ManifoldPtr manifold, std::vector<double> values)
    : manifold_(std::move(manifold)), values_(std::move(values)) {
  if (!manifold_)
    throw std::invalid_argument("ScalarField: null manifold");
  if (values_.size() != manifold_->node_count())
    throw std::invalid_argument("ScalarField: " + std::to_string(values_.size()) +
                                " values for " + std::to_string(manifold_->node_count()) +
                                " nodes");
  check_finite();
}

ScalarField ScalarField::constant(ManifoldPtr manifold, double value) {
  const auto n = manifold->node_count();
  return ScalarField(std::move(manifold), std::vector<double>(n, value));
}

ScalarField ScalarField::sample(ManifoldPtr manifold,
                                const std::function<double(const Point&)>& fn) {
  std::vector<double> v(manifold->node_count());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = fn(manifold->point(i));
  return ScalarField(std::move(manifold), std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::sup_norm() const {
  double s = 0.0;
  for (double v : values_)
    s = std::max(s, std::abs(v));
  return s;
}

std::size_t ScalarField::argmax() const {
  return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

std::size_t ScalarField::argmin() const {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

ScalarField ScalarField::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return ScalarField(manifold_, std::move(out));
}

ScalarField ScalarField::operator-() const {
  ScalarField out = *this;
  for (double& v : out.values_)
    v = -v;
  return out;
}

void ScalarField::require_same(const ScalarField& rhs) const {
  if (manifold_ != rhs.manifold_)
    throw std::invalid_argument("fields live on different manifolds");
}

void ScalarField::check_finite() const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::domain_error("ScalarField: non-finite value");
}

#define HARNACK_FIELD_OP(op)                                                   \
  ScalarField& ScalarField::operator op##=(const ScalarField& rhs) {           \
    require_same(rhs);                                                         \
    for (std::size_t i = 0; i < values_.size(); ++i)                           \
      values_[i] op## = rhs.values_[i];                                        \
    check_finite();                                                            \
    return *this;                                                              \
  }

HARNACK_FIELD_OP(+)
HARNACK_FIELD_OP(-)
HARNACK_FIELD_OP(*)
HARNACK_FIELD_OP(/)
#undef HARNACK_FIELD_OP

ScalarField& ScalarField::operator+=(double rhs) {
  for (double& v : values_)
    v += rhs;
  check_finite();
  return *this;
}

ScalarField& ScalarField::operator*=(double rhs) {
  for (double& v : values_)
    v *= rhs;
  check_finite();
  return *this;
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(ScalarField lhs, const ScalarField& rhs) { return lhs *= rhs; }
ScalarField operator/(ScalarField lhs, const ScalarField& rhs) { return lhs /= rhs; }
ScalarField operator+(ScalarField lhs, double rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, double rhs) { return lhs += -rhs; }
ScalarField operator*(ScalarField lhs, double rhs) { return lhs *= rhs; }
ScalarField operator*(double lhs, ScalarField rhs) { return rhs *= lhs; }
ScalarField operator+(double lhs, ScalarField rhs) { return rhs += lhs; }
ScalarField operator-(double lhs, ScalarField rhs) { return (-rhs) += lhs; }
ScalarField operator/(ScalarField lhs, double rhs) { return lhs *= 1.0 / rhs; }

void require_same_manifold(const ScalarField& a, const ScalarField& b) {
  if (!a.same_manifold(b))
    throw std::invalid_argument("fields live on different manifolds");
}

} // namespace harnack
