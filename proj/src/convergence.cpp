#include "harnack/convergence.hpp"

#include "harnack/calculus.hpp"
#include "harnack/elliptic.hpp"
#include "harnack/mms.hpp"
#include "harnack/parabolic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace harnack {

ConvergenceTable convergence_study(const ResidualCheck& check,
                                   std::span<const RefinementLevel> levels, double floor) {
  if (levels.size() < 3)
    throw std::invalid_argument("convergence_study needs at least three levels");
  ConvergenceTable table;
  table.check = check.name;
  table.refines = check.refines;
  table.expected_order = check.expected_order;
  table.floor = floor;

  auto spacing = [&](const RefinementLevel& l) {
    return check.refines == RefinedParameter::space ? 1.0 / l.resolution : l.dt;
  };
  for (std::size_t k = 0; k < levels.size(); ++k) {
    ConvergenceRow row;
    row.level = static_cast<int>(k);
    row.resolution = levels[k].resolution;
    row.dt = levels[k].dt;
    row.residual = check.evaluate(levels[k]);
    row.order = std::numeric_limits<double>::quiet_NaN();
    if (k > 0) {
      const auto& prev = table.rows.back();
      const double ratio = spacing(levels[k - 1]) / spacing(levels[k]);
      if (ratio == 1.0)
        throw std::invalid_argument("convergence_study: levels do not refine '" + check.name +
                                    "'");
      if (prev.residual > floor && row.residual > floor) {
        row.order = std::log(prev.residual / row.residual) / std::log(ratio);
        if (row.order < check.expected_order - 0.2)
          table.converged = false;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kProbeTime = 0.5;

ManifoldPtr torus(int dimension, int resolution) {
  return build_flat_torus(dimension, std::vector<double>(dimension, kTwoPi),
                          std::vector<int>(dimension, resolution));
}

// Numerical solution of a 1-torus manufactured problem at t - dt, t, t + dt.
std::array<ScalarField, 3> mms_run(std::string_view id, const RefinementLevel& level, double t) {
  const auto m = torus(1, level.resolution);
  const auto mms = parabolic_mms(id, m);
  const auto source = mms.source_term();
  const long steps = std::lround(t / level.dt);
  ScalarField u = mms.solution(0.0);
  ScalarField before = u;
  for (long k = 0; k < steps; ++k) {
    before = u;
    u = step_heat(u, k * level.dt, level.dt, source);
  }
  ScalarField after = step_heat(u, steps * level.dt, level.dt, source);
  return {before, u, after};
}

std::vector<Snapshot> exact_window(const ParabolicMms& mms, double t, double h, int half,
                                   bool with_rate) {
  std::vector<Snapshot> window;
  for (int k = -half; k <= half; ++k)
    window.push_back(mms.snapshot(t + k * h, with_rate));
  return window;
}

ResidualCheck make(std::string name, RefinedParameter refines, double order,
                   std::function<double(const RefinementLevel&)> fn) {
  return {std::move(name), refines, order, std::move(fn)};
}

std::vector<ResidualCheck> registry() {
  using R = RefinedParameter;
  std::vector<ResidualCheck> checks;
  checks.push_back(make("bochner:exp-cos", R::space, 4.0, [](const RefinementLevel& l) {
    const auto m = torus(2, l.resolution);
    return bochner_residual(ScalarField::sample(m, [](const Point& p) {
             return std::exp(std::cos(p[0]));
           })).sup_norm();
  }));
  checks.push_back(make("q-identity:exp-cos", R::space, 4.0, [](const RefinementLevel& l) {
    const auto p = elliptic_mms("exp-cos", torus(1, l.resolution));
    return q_identity_residual(p.solution, p.source).sup_norm();
  }));
  checks.push_back(make("quotient-laplacian:exp-cos", R::space, 4.0, [](const RefinementLevel& l) {
    const auto p = elliptic_mms("exp-cos", torus(1, l.resolution));
    return quotient_laplacian_residual(p.solution, p.source).sup_norm();
  }));
  checks.push_back(make("q-identity:shifted-cos", R::space, 4.0, [](const RefinementLevel& l) {
    const auto p = elliptic_mms("shifted-cos", torus(1, l.resolution));
    return q_identity_residual(p.solution, p.source).sup_norm();
  }));
  checks.push_back(make("wt-evolution:decay", R::time, 2.0, [](const RefinementLevel& l) {
    const auto mms = parabolic_mms("decay", torus(1, l.resolution));
    return wt_evolution_residual(exact_window(mms, kProbeTime, l.dt, 2, false)).sup_norm();
  }));
  checks.push_back(make("F-evolution:decay", R::time, 2.0, [](const RefinementLevel& l) {
    const auto mms = parabolic_mms("decay", torus(1, l.resolution));
    return F_evolution_residual(exact_window(mms, kProbeTime, l.dt, 1, true), 2.0).sup_norm();
  }));
  checks.push_back(
      make("quotient-time-derivative:decay", R::time, 2.0, [](const RefinementLevel& l) {
        const auto mms = parabolic_mms("decay", torus(1, l.resolution));
        const double t = kProbeTime;
        const auto rate = centered_rate(mms.source(t - l.dt) / mms.solution(t - l.dt),
                                        mms.source(t + l.dt) / mms.solution(t + l.dt), l.dt);
        return quotient_time_derivative_residual(mms.solution(t), mms.solution_rate(t),
                                                 mms.source(t), mms.source_rate(t), rate)
            .sup_norm();
      }));
  checks.push_back(make("w-heat:decay-run", R::time, 2.0, [](const RefinementLevel& l) {
    const auto [prev, u, next] = mms_run("decay", l, kProbeTime);
    const auto mms = parabolic_mms("decay", u.manifold_ptr());
    return w_heat_residual(u, centered_rate(prev, next, l.dt), mms.source(kProbeTime)).sup_norm();
  }));
  checks.push_back(
      make("quotient-evolution:decay-run", R::time, 2.0, [](const RefinementLevel& l) {
        const auto [prev, u, next] = mms_run("decay", l, kProbeTime);
        const auto mms = parabolic_mms("decay", u.manifold_ptr());
        return quotient_evolution_residual(u, centered_rate(prev, next, l.dt),
                                           mms.source(kProbeTime), mms.source_rate(kProbeTime))
            .sup_norm();
      }));
  // The midpoint source rule is exact for the "decay" forcing, so the integrator
  // error is measured on "driven".
  checks.push_back(make("heat-error:driven", R::time, 2.0, [](const RefinementLevel& l) {
    const auto [prev, u, next] = mms_run("driven", l, 1.0);
    const auto mms = parabolic_mms("driven", u.manifold_ptr());
    return (u - mms.solution(1.0)).sup_norm();
  }));
  return checks;
}

} // namespace

ResidualCheck named_check(std::string_view name) {
  for (auto& c : registry())
    if (c.name == name)
      return c;
  throw std::invalid_argument("unknown convergence check '" + std::string(name) + "'");
}

std::vector<std::string> named_checks() {
  std::vector<std::string> names;
  for (const auto& c : registry())
    names.push_back(c.name);
  return names;
}

std::vector<RefinementLevel> default_levels(const ResidualCheck& check) {
  if (check.refines == RefinedParameter::space)
    return {{16, 1e-3}, {32, 1e-3}, {64, 1e-3}};
  return {{64, 4e-3}, {64, 2e-3}, {64, 1e-3}};
}

} // namespace harnack
