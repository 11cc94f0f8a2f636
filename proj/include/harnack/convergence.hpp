#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace harnack {

enum class RefinedParameter { space, time };

struct RefinementLevel {
  int resolution = 64;  // nodes per torus axis
  double dt = 1e-3;
};

/// A scalar error measure (sup-norm residual, margin, ...) evaluated on one
/// refinement level.
struct ResidualCheck {
  std::string name;
  RefinedParameter refines = RefinedParameter::space;
  double expected_order = 2.0;
  std::function<double(const RefinementLevel&)> evaluate;
};

struct ConvergenceRow {
  int level = 0;
  int resolution = 0;
  double dt = 0.0;
  double residual = 0.0;
  double order = 0.0;  // NaN on the first level and whenever a residual sits at the floor
};

struct ConvergenceTable {
  std::string check;
  RefinedParameter refines = RefinedParameter::space;
  double expected_order = 0.0;
  double floor = 0.0;
  std::vector<ConvergenceRow> rows;
  bool converged = true;  // false if any measured order < expected - 0.2
};

inline constexpr double kRoundOffFloor = 1e-11;

/// Evaluates `check` on each level (at least three) and measures the order
/// p = log(r_{k-1} / r_k) / log(h_{k-1} / h_k), with h = 1/N or dt.
ConvergenceTable convergence_study(const ResidualCheck& check,
                                   std::span<const RefinementLevel> levels,
                                   double floor = kRoundOffFloor);

/// Built-in studies, addressable by name from the command line.
ResidualCheck named_check(std::string_view name);
std::vector<std::string> named_checks();

/// Default levels for a named check.
std::vector<RefinementLevel> default_levels(const ResidualCheck& check);

} // namespace harnack
