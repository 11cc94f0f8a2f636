#include "harnack/parabolic.hpp"

#include "detail/spectral.hpp"
#include "detail/sphere_ops.hpp"
#include "harnack/calculus.hpp"
#include "harnack/elliptic.hpp"
#include "harnack/errors.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace harnack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHeatPairTolerance = 1e-4;
constexpr double kSourceSelfCheckTolerance = 1e-8;

void require_positive(const ScalarField& u, const char* op) {
  if (!(u.min() > 0.0))
    throw std::invalid_argument(std::string(op) + ": u must be positive, min(u) = " +
                                std::to_string(u.min()));
}

void require_parameter_a(double a) {
  if (!(a > 1.0))
    throw std::invalid_argument("Harnack parameter a must exceed 1, got " + std::to_string(a));
}

void require_heat_pair(const ScalarField& u, const ScalarField& u_t, const ScalarField& source) {
  const double defect = (u_t - laplace_beltrami(u) - source).sup_norm();
  const double allowed = kHeatPairTolerance * std::max(1.0, source.sup_norm());
  if (defect > allowed)
    throw PreconditionError("(u, A) does not solve (d/dt - Delta) u = A: defect " +
                            std::to_string(defect) + " > " + std::to_string(allowed));
}

double uniform_spacing(std::span<const Snapshot> window) {
  const double h = window[1].t - window[0].t;
  if (!(h > 0.0))
    throw std::invalid_argument("snapshots must be ordered in time");
  for (std::size_t k = 1; k < window.size(); ++k) {
    const double step = window[k].t - window[k - 1].t;
    if (std::abs(step - h) > 1e-9 * h)
      throw std::invalid_argument("snapshots must be uniformly spaced");
    require_same_manifold(window[k].u, window[0].u);
  }
  return h;
}

// w_t at window index k: exact rate when known, centered difference otherwise.
ScalarField w_rate_at(std::span<const Snapshot> window, std::size_t k, double h) {
  if (window[k].u_t)
    return *window[k].u_t / window[k].u;
  if (k == 0 || k + 1 >= window.size())
    throw std::invalid_argument("not enough snapshots for a centered w_t");
  return centered_rate(log_transform(window[k - 1].u), log_transform(window[k + 1].u), h);
}

ScalarField quotient(const Snapshot& s) { return s.source / s.u; }

ScalarField step_torus(const ScalarField& u, double t, double dt, const SpaceTimeSource& source) {
  const auto& sp = u.manifold().spectral();
  auto spectrum = sp.forward(u.values());
  if (source.identically_zero()) {
    for (std::size_t idx = 0; idx < spectrum.size(); ++idx)
      spectrum[idx] *= std::exp(sp.laplacian_symbol(idx) * dt);
  } else {
    const auto forcing = sp.forward(source.value(t + 0.5 * dt).values());
    for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
      const double symbol = sp.laplacian_symbol(idx);
      const double decay = std::exp(symbol * dt);
      // (1 - e^{-k^2 dt}) / k^2, with its limit dt at k = 0.
      const double weight = symbol == 0.0 ? dt : -std::expm1(symbol * dt) / -symbol;
      spectrum[idx] = decay * spectrum[idx] + weight * forcing[idx];
    }
  }
  return ScalarField(u.manifold_ptr(), sp.backward(spectrum));
}

ScalarField step_sphere(const ScalarField& u, double t, double dt, const SpaceTimeSource& source) {
  const auto& m = u.manifold();
  const auto w = m.weights();
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::SparseMatrix<double> system = -dt * m.sphere_operators().stiffness();
  Eigen::VectorXd rhs(n);
  const auto forcing = source.identically_zero() ? ScalarField::constant(u.manifold_ptr(), 0.0)
                                                 : source.value(t + dt);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    system.coeffRef(i, i) += w[j];
    rhs[i] = w[j] * (u[j] + dt * forcing[j]);
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(10 * n);
  cg.compute(system);
  Eigen::VectorXd x = cg.solveWithGuess(rhs, Eigen::Map<const Eigen::VectorXd>(u.values().data(), n));
  if (cg.info() != Eigen::Success)
    throw SolverFailure("implicit heat step did not converge at t = " + std::to_string(t + dt));
  return ScalarField(u.manifold_ptr(), std::vector<double>(x.data(), x.data() + n));
}

} // namespace

// ---------------------------------------------------------------------------
// SpaceTimeSource

SpaceTimeSource SpaceTimeSource::zero(ManifoldPtr manifold) {
  SpaceTimeSource s;
  s.manifold_ = std::move(manifold);
  s.kind_ = SourceKind::analytic;
  s.zero_ = true;
  return s;
}

SpaceTimeSource SpaceTimeSource::analytic(ManifoldPtr manifold, FieldAt value,
                                          FieldAt time_derivative, FieldAt laplacian) {
  SpaceTimeSource s;
  s.manifold_ = std::move(manifold);
  s.kind_ = SourceKind::analytic;
  s.value_ = std::move(value);
  s.time_derivative_ = std::move(time_derivative);
  s.laplacian_ = std::move(laplacian);
  if (s.manifold_->is_torus()) {
    const auto exact = s.laplacian_(0.0);
    const double defect = (laplace_beltrami(s.value_(0.0)) - exact).sup_norm();
    if (defect > kSourceSelfCheckTolerance * std::max(1.0, exact.sup_norm()))
      throw PreconditionError("analytic source Laplacian disagrees with the spectral one by " +
                              std::to_string(defect));
  }
  return s;
}

SpaceTimeSource SpaceTimeSource::sampled(ManifoldPtr manifold, FieldAt value, double time_step) {
  if (!(time_step > 0.0))
    throw std::invalid_argument("sampled source needs a positive differencing step");
  SpaceTimeSource s;
  s.manifold_ = std::move(manifold);
  s.kind_ = SourceKind::sampled;
  s.time_step_ = time_step;
  s.value_ = std::move(value);
  return s;
}

ScalarField SpaceTimeSource::value(double t) const {
  if (zero_)
    return ScalarField::constant(manifold_, 0.0);
  return value_(t);
}

ScalarField SpaceTimeSource::time_derivative(double t) const {
  if (zero_)
    return ScalarField::constant(manifold_, 0.0);
  if (kind_ == SourceKind::analytic)
    return time_derivative_(t);
  return centered_rate(value_(t - time_step_), value_(t + time_step_), time_step_);
}

ScalarField SpaceTimeSource::laplacian(double t) const {
  if (zero_)
    return ScalarField::constant(manifold_, 0.0);
  if (kind_ == SourceKind::analytic)
    return laplacian_(t);
  return laplace_beltrami(value_(t));
}

// ---------------------------------------------------------------------------
// Pointwise quantities and identity residuals

ScalarField centered_rate(const ScalarField& prev, const ScalarField& next, double h) {
  return (next - prev) / (2.0 * h);
}

ScalarField centered_rate(const ScalarField& m2, const ScalarField& m1, const ScalarField& p1,
                          const ScalarField& p2, double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

ScalarField step_heat(const ScalarField& u, double t, double dt, const SpaceTimeSource& source) {
  if (!(dt > 0.0))
    throw std::invalid_argument("step_heat: dt must be positive");
  if (source.manifold() != u.manifold_ptr())
    throw std::invalid_argument("step_heat: source and state live on different manifolds");
  require_positive(u, "step_heat");
  auto next = u.manifold().is_torus() ? step_torus(u, t, dt, source) : step_sphere(u, t, dt, source);
  const double lowest = next.min();
  if (!(lowest > 0.0))
    throw PositivityLoss(t + dt, lowest);
  return next;
}

ScalarField harnack_F(const ScalarField& u, const ScalarField& w_t, const ScalarField& source,
                      double a, double t) {
  require_parameter_a(a);
  if (!(t >= 0.0))
    throw std::invalid_argument("harnack_F: t must be non-negative");
  require_same_manifold(u, w_t);
  require_same_manifold(u, source);
  require_positive(u, "harnack_F");
  const auto w = log_transform(u);
  return t * (gradient_norm_sq(w) + a * (source / u) - a * w_t);
}

ScalarField w_heat_residual(const ScalarField& u, const ScalarField& u_t,
                            const ScalarField& source) {
  require_positive(u, "w_heat_residual");
  require_same_manifold(u, u_t);
  require_same_manifold(u, source);
  const auto w = log_transform(u);
  const auto w_t = u_t / u;
  return (w_t - laplace_beltrami(w)) - (gradient_norm_sq(w) + source / u);
}

ScalarField wt_evolution_residual(std::span<const Snapshot> window) {
  if (window.size() < 5 || window.size() % 2 == 0)
    throw std::invalid_argument("wt_evolution_residual needs an odd number (>= 5) of snapshots");
  const double h = uniform_spacing(window);
  const std::size_t c = window.size() / 2;
  for (std::size_t k = c - 2; k <= c + 2; ++k)
    require_positive(window[k].u, "wt_evolution_residual");

  const auto w_c = log_transform(window[c].u);
  auto centered_w_t = [&](std::size_t k) {
    return centered_rate(log_transform(window[k - 1].u), log_transform(window[k + 1].u), h);
  };
  const auto wt_prev = centered_w_t(c - 1);
  const auto wt_c = centered_w_t(c);
  const auto wt_next = centered_w_t(c + 1);
  const auto wt_rate = centered_rate(wt_prev, wt_next, h);
  const auto quotient_rate = centered_rate(quotient(window[c - 1]), quotient(window[c + 1]), h);
  return wt_rate - laplace_beltrami(wt_c) - 2.0 * gradient_inner(w_c, wt_c) - quotient_rate;
}

ScalarField quotient_evolution_residual(const ScalarField& u, const ScalarField& u_t,
                                        const ScalarField& source, const ScalarField& source_t) {
  require_positive(u, "quotient_evolution_residual");
  require_same_manifold(u, source_t);
  require_heat_pair(u, u_t, source);
  const auto w = log_transform(u);
  const auto ratio = source / u;
  const auto lhs = source_t / u - source * u_t / (u * u) - laplace_beltrami(ratio);
  const auto rhs = (source_t - laplace_beltrami(source)) / u - ratio * ratio +
                   2.0 * gradient_inner(w, source) / u - 2.0 * ratio * gradient_norm_sq(w);
  return lhs - rhs;
}

ScalarField quotient_time_derivative_residual(const ScalarField& u, const ScalarField& u_t,
                                              const ScalarField& source,
                                              const ScalarField& source_t,
                                              const ScalarField& quotient_rate) {
  require_positive(u, "quotient_time_derivative_residual");
  require_same_manifold(u, u_t);
  require_same_manifold(u, source_t);
  require_same_manifold(u, quotient_rate);
  const auto ratio = source / u;
  return quotient_rate - (source_t / u - ratio * (u_t / u));
}

ScalarField F_evolution_residual(std::span<const Snapshot> window, double a) {
  require_parameter_a(a);
  if (window.size() < 3 || window.size() % 2 == 0)
    throw std::invalid_argument("F_evolution_residual needs an odd number (>= 3) of snapshots");
  if (!window[0].u.manifold().is_torus())
    throw UnsupportedManifold("F_evolution_residual is only available on the flat torus");
  const double h = uniform_spacing(window);
  const std::size_t c = window.size() / 2;
  const double t = window[c].t;
  if (!(t > 0.0) || !(window[c - 1].t >= 0.0))
    throw std::invalid_argument("F_evolution_residual needs t > 0 at every snapshot used");
  for (const auto& s : window)
    require_positive(s.u, "F_evolution_residual");

  auto F_at = [&](std::size_t k) {
    return harnack_F(window[k].u, w_rate_at(window, k, h), window[k].source, a, window[k].t);
  };
  const auto F_c = F_at(c);
  const auto F_rate = centered_rate(F_at(c - 1), F_at(c + 1), h);
  const auto w = log_transform(window[c].u);
  const auto ratio = quotient(window[c]);

  const auto lhs = F_rate - laplace_beltrami(F_c);
  const auto drift = F_c / t + (1.0 - a) * ratio;
  const auto rhs = F_c / t + 2.0 * t * gradient_inner(w, drift) -
                   2.0 * t * hessian_frobenius_sq(w) - a * t * laplace_beltrami(ratio);
  return lhs - rhs;
}

MaxPointMargins max_point_diagnostics(const ScalarField& u, const ScalarField& w_t,
                                      const ScalarField& source, double a, double s,
                                      double ricci_K) {
  if (!u.manifold().is_torus())
    throw UnsupportedManifold("max_point_diagnostics is only available on the flat torus");
  if (!(ricci_K >= 0.0))
    throw std::invalid_argument("max_point_diagnostics: K must be non-negative");
  const auto F = harnack_F(u, w_t, source, a, s);
  MaxPointMargins m;
  m.node = F.argmax();
  m.F = F[m.node];
  if (!(m.F > 0.0) || !(s > 0.0))
    return m;
  m.applicable = true;

  const std::size_t z = m.node;
  const double n = u.manifold().dimension();
  const auto w = log_transform(u);
  const auto ratio = source / u;
  const double grad_w_sq = gradient_norm_sq(w)[z];
  const double grad_A_sq = gradient_norm_sq(source)[z];
  const double cross = gradient_inner(w, ratio)[z];
  const double hess = hessian_frobenius_sq(w)[z];
  const double lap_ratio = laplace_beltrami(ratio)[z];
  const double lap_A = laplace_beltrami(source)[z];
  const double uz = u[z];
  const double Az = source[z];
  constexpr double ricci = 0.0;  // flat torus

  m.mu = grad_w_sq / m.F;
  m.young = cross - (-0.5 * grad_A_sq / uz - (0.5 + Az) * grad_w_sq / uz);
  const double trace_arg = m.F / (a * s) + (1.0 - 1.0 / a) * grad_w_sq;
  m.trace = (hess + ricci) - (trace_arg * trace_arg / n - ricci_K * grad_w_sq);
  m.key1 = m.F / s + 2.0 * (1.0 - a) * s * cross - 2.0 * s * (hess + ricci) - a * s * lap_ratio;
  m.dropped_term = -(Az / uz) * m.F / (a * s);
  m.large_F_case = m.F >= (a * s * s / uz) * (-lap_A + grad_A_sq) + s * s * (a - 1.0) * grad_A_sq / uz;
  return m;
}

double li_yau_classical_margin(const HeatTraceRecord& record, double a, int dimension) {
  if (record.forced)
    throw std::invalid_argument("li_yau_classical_margin applies to homogeneous runs only");
  require_parameter_a(a);
  return dimension * a * a / 2.0 - record.sup_F;
}

// ---------------------------------------------------------------------------
// run_heat

namespace {

void validate(const HeatRunConfig& c) {
  require_parameter_a(c.a);
  if (!(c.dt > 0.0))
    throw std::invalid_argument("heat run: dt must be positive");
  if (!(c.horizon >= c.dt))
    throw std::invalid_argument("heat run: T must be at least dt");
  if (!(c.ricci_K >= 0.0))
    throw std::invalid_argument("heat run: K must be non-negative");
  if (c.stride < 2)
    throw std::invalid_argument("heat run: snapshot stride must be >= 2");
  if (!(c.initial.min() > 0.0))
    throw std::invalid_argument("heat run: initial data must be positive");
  if (c.source.manifold() != c.initial.manifold_ptr())
    throw std::invalid_argument("heat run: source and initial data live on different manifolds");
  const double steps = c.horizon / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * steps)
    throw std::invalid_argument("heat run: T must be an integer multiple of dt");
}

struct State {
  double t;
  ScalarField u;
};

} // namespace

HeatRunResult run_heat(const HeatRunConfig& config) {
  validate(config);
  const auto manifold = config.initial.manifold_ptr();
  const bool torus = manifold->is_torus();
  const bool forced = !config.source.identically_zero();
  const double h = config.dt;
  const double a = config.a;
  const long steps = std::lround(config.horizon / h);
  const int n = manifold->dimension();

  HeatRunResult result;
  result.dimension = n;
  result.capability = torus ? "full" : "basic";
  auto& k = result.constants;
  k.min_u = config.initial.min();
  k.ricci_K = config.ricci_K;
  k.a = a;
  k.horizon = config.horizon;

  auto track_source = [&](double t) {
    if (!forced)
      return;
    const auto A = config.source.value(t);
    k.sup_A = std::max(k.sup_A, A.sup_norm());
    k.sup_grad_A = std::max(k.sup_grad_A, std::sqrt(gradient_norm_sq(A).sup_norm()));
    k.sup_lap_A = std::max(k.sup_lap_A, config.source.laplacian(t).sup_norm());
  };

  HeatTraceRecord first;
  first.t = 0.0;
  first.min_u = config.initial.min();
  first.mu = first.res_w = first.res_wt = first.res_quot_evo = first.res_quot_dt = kNaN;
  first.res_F_evo = first.young_margin = first.trace_margin = first.key1_margin = kNaN;
  first.liyau_margin = forced ? kNaN : n * a * a / 2.0;
  first.forced = forced;
  result.records.push_back(first);
  track_source(0.0);

  std::vector<MaxPointMargins> candidates(1);
  std::deque<State> window;
  window.push_back({0.0, config.initial});
  double running = 0.0;

  for (long step = 1; step <= steps + 2; ++step) {
    const State& last = window.back();
    // t from the step index keeps record times free of accumulated round-off.
    const double t_next = static_cast<double>(step) * h;
    window.push_back({t_next, step_heat(last.u, last.t, h, config.source)});
    if (window.size() > 5)
      window.pop_front();
    if (step <= steps)
      k.min_u = std::min(k.min_u, window.back().u.min());
    if (step == steps)
      result.final_state = window.back().u;

    const long center = step - 2;
    if (center < 2 || window.size() < 5)
      continue;
    if (center % config.stride != 0 && center != steps)
      continue;

    std::vector<Snapshot> snaps;
    for (const auto& s : window)
      snaps.push_back({s.t, s.u, config.source.value(s.t), std::nullopt});
    const Snapshot& mid = snaps[2];
    const double t = mid.t;
    const auto u_t = centered_rate(snaps[0].u, snaps[1].u, snaps[3].u, snaps[4].u, h);
    const auto w_t = u_t / mid.u;
    const auto F = harnack_F(mid.u, w_t, mid.source, a, t);

    HeatTraceRecord r;
    r.t = t;
    r.forced = forced;
    r.z_index = F.argmax();
    r.sup_F = F[r.z_index];
    running = std::max(running, r.sup_F);
    r.running_sup_F = running;
    r.min_u = mid.u.min();
    r.mu = r.sup_F > 0.0 ? gradient_norm_sq(log_transform(mid.u))[r.z_index] / r.sup_F : kNaN;
    r.liyau_margin = forced ? kNaN : li_yau_classical_margin(r, a, n);
    r.key1_margin = kNaN;
    track_source(t);

    MaxPointMargins diag;
    if (torus) {
      const auto A_t = config.source.time_derivative(t);
      const auto rate = centered_rate(quotient(snaps[0]), quotient(snaps[1]), quotient(snaps[3]),
                                      quotient(snaps[4]), h);
      r.res_w = w_heat_residual(mid.u, u_t, mid.source).sup_norm();
      r.res_wt = wt_evolution_residual(snaps).sup_norm();
      r.res_quot_evo = quotient_evolution_residual(mid.u, u_t, mid.source, A_t).sup_norm();
      r.res_quot_dt =
          quotient_time_derivative_residual(mid.u, u_t, mid.source, A_t, rate).sup_norm();
      r.res_F_evo = F_evolution_residual(snaps, a).sup_norm();
      diag = max_point_diagnostics(mid.u, w_t, mid.source, a, t, config.ricci_K);
      r.young_margin = diag.applicable ? diag.young : kNaN;
      r.trace_margin = diag.applicable ? diag.trace : kNaN;
    } else {
      r.res_w = r.res_wt = r.res_quot_evo = r.res_quot_dt = r.res_F_evo = kNaN;
      r.young_margin = r.trace_margin = kNaN;
    }
    result.records.push_back(r);
    candidates.push_back(diag);
  }

  // Space-time maximum over the recorded slices; ties keep the earliest.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.records.size(); ++i)
    if (result.records[i].sup_F > result.records[best].sup_F)
      best = i;
  result.space_time_sup_F = result.records[best].sup_F;
  result.argmax_time = result.records[best].t;
  result.argmax_node = result.records[best].z_index;
  if (torus && candidates[best].applicable) {
    result.global_max_point = candidates[best];
    result.records[best].key1_margin = candidates[best].key1;
  }
  return result;
}

} // namespace harnack
