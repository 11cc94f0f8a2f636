#pragma once

#include "harnack/field.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace harnack {

enum class SourceKind { analytic, sampled };

/// The forcing A(x, t) of (d/dt - Delta) u = A together with A_t and Delta A.
///
/// Analytic sources carry closed-form A_t and Delta A; on the torus the
/// closed-form Delta A is compared against the spectral Laplacian at t = 0
/// when the source is built. Sampled sources difference A in time and use
/// the discrete Laplacian.
class SpaceTimeSource {
public:
  using FieldAt = std::function<ScalarField(double)>;

  static SpaceTimeSource zero(ManifoldPtr manifold);
  static SpaceTimeSource analytic(ManifoldPtr manifold, FieldAt value, FieldAt time_derivative,
                                  FieldAt laplacian);
  static SpaceTimeSource sampled(ManifoldPtr manifold, FieldAt value, double time_step = 1e-4);

  SourceKind kind() const noexcept { return kind_; }
  bool identically_zero() const noexcept { return zero_; }
  const ManifoldPtr& manifold() const noexcept { return manifold_; }

  ScalarField value(double t) const;
  ScalarField time_derivative(double t) const;
  ScalarField laplacian(double t) const;

private:
  SpaceTimeSource() = default;

  ManifoldPtr manifold_;
  SourceKind kind_ = SourceKind::sampled;
  bool zero_ = false;
  double time_step_ = 1e-4;
  FieldAt value_;
  FieldAt time_derivative_;
  FieldAt laplacian_;
};

/// One step of (d/dt - Delta) u = A from t to t + dt.
/// Torus: exact e^{dt Delta} multiplier with the source at the midpoint,
///   u^ <- e^{-k^2 dt} u^ + (1 - e^{-k^2 dt}) / k^2 * A^(t + dt/2).
/// Sphere: implicit Euler with the cotangent operator.
/// Throws PositivityLoss if the new state has min u <= 0.
ScalarField step_heat(const ScalarField& u, double t, double dt, const SpaceTimeSource& source);

/// F = t (|grad w|^2 + a A/u - a w_t), w = log u.
ScalarField harnack_F(const ScalarField& u, const ScalarField& w_t, const ScalarField& source,
                      double a, double t);

/// (w_t - Delta w) - (|grad w|^2 + A/u) with w_t = u_t / u.
ScalarField w_heat_residual(const ScalarField& u, const ScalarField& u_t,
                            const ScalarField& source);

/// State of a run at one time level. `u_t` is filled when an exact rate is
/// known (manufactured solutions); otherwise rates are centered differences.
struct Snapshot {
  double t = 0.0;
  ScalarField u;
  ScalarField source;
  std::optional<ScalarField> u_t;
};

/// Residual of (d/dt - Delta) w_t = 2 grad w . grad w_t + d/dt(A/u) at the
/// central snapshot; every time derivative is a centered difference.
/// Needs an odd number (>= 5) of uniformly spaced snapshots.
ScalarField wt_evolution_residual(std::span<const Snapshot> window);

/// Residual of
///   (d/dt - Delta)(A/u) = (1/u)(d/dt - Delta) A - A^2/u^2
///                         + (2/u) grad w . grad A - 2 (A/u) |grad w|^2,
/// with d/dt(A/u) = A_t/u - A u_t/u^2. Checks (d/dt - Delta) u = A first.
ScalarField quotient_evolution_residual(const ScalarField& u, const ScalarField& u_t,
                                        const ScalarField& source, const ScalarField& source_t);

/// quotient_rate - [A_t/u - (A/u)(u_t/u)], where quotient_rate is an
/// independently obtained d/dt(A/u).
ScalarField quotient_time_derivative_residual(const ScalarField& u, const ScalarField& u_t,
                                              const ScalarField& source,
                                              const ScalarField& source_t,
                                              const ScalarField& quotient_rate);

/// Residual of the evolution equation of F at the central snapshot (flat
/// torus, Ric = 0):
///   (d/dt - Delta) F = F/t + 2t grad w . grad[F/t + (1-a) A/u]
///                      - 2t |D^2 w|^2 - a t Delta(A/u).
/// Needs >= 3 snapshots when all carry u_t, otherwise >= 5.
ScalarField F_evolution_residual(std::span<const Snapshot> window, double a);

struct MaxPointMargins {
  bool applicable = false;  // F > 0 at the argmax
  std::size_t node = 0;
  double F = 0.0;
  double mu = 0.0;  // |grad w|^2 / F
  // grad w . grad(A/u) - [-|grad A|^2/(2u) - (1/2 + A) |grad w|^2 / u]
  double young = 0.0;
  // [|D^2 w|^2 + Ric] - [(F/(a s) + (1 - 1/a)|grad w|^2)^2 / n - K |grad w|^2]
  double trace = 0.0;
  // F/s + 2(1-a) s grad w . grad(A/u) - 2 s [|D^2 w|^2 + Ric] - a s Delta(A/u)
  double key1 = 0.0;
  // -(A/u) F/(a s): dropped by the strict step that needs a sign on A F.
  double dropped_term = 0.0;
  // F >= (a s^2/u)(-Delta A + |grad A|^2) + s^2 (a-1) |grad A|^2 / u
  bool large_F_case = false;
};

/// Margins of the pointwise inequalities used at a maximum of F, evaluated
/// at the argmax of F(., s). Flat torus only.
MaxPointMargins max_point_diagnostics(const ScalarField& u, const ScalarField& w_t,
                                      const ScalarField& source, double a, double s,
                                      double ricci_K);

struct HeatRunConfig {
  ScalarField initial;
  SpaceTimeSource source;
  double horizon = 1.0;
  double dt = 1e-3;
  double a = 2.0;
  double ricci_K = 0.0;
  int stride = 10;
};

/// Diagnostics at one recorded time. Entries that do not apply are NaN.
struct HeatTraceRecord {
  double t = 0.0;
  double sup_F = 0.0;          // max over this time slice
  double running_sup_F = 0.0;  // max over (0, t]
  std::size_t z_index = 0;
  double mu = 0.0;
  double min_u = 0.0;
  double res_w = 0.0;
  double res_wt = 0.0;
  double res_quot_evo = 0.0;
  double res_quot_dt = 0.0;
  double res_F_evo = 0.0;
  double liyau_margin = 0.0;
  double young_margin = 0.0;
  double trace_margin = 0.0;
  double key1_margin = 0.0;
  bool forced = false;
};

/// Quantities a bound C(u^-1, |A|, |grad A|, |Delta A|, K, a, T) may depend on,
/// measured over the recorded times of a run.
struct StructuralConstants {
  double min_u = 0.0;
  double sup_A = 0.0;
  double sup_grad_A = 0.0;
  double sup_lap_A = 0.0;
  double ricci_K = 0.0;
  double a = 0.0;
  double horizon = 0.0;
};

struct HeatRunResult {
  std::vector<HeatTraceRecord> records;
  StructuralConstants constants;
  int dimension = 0;
  double space_time_sup_F = 0.0;
  double argmax_time = 0.0;
  std::size_t argmax_node = 0;
  // Max-point diagnostics at the space-time argmax (torus, F > 0 only).
  std::optional<MaxPointMargins> global_max_point;
  // "full" on the torus, "basic" (u, w, F only) on the sphere.
  std::string capability;
  // State at t = T.
  std::optional<ScalarField> final_state;
};

/// Integrates over [0, T] and records every `stride` steps. Two extra steps
/// beyond T are taken so that the last record has centered time differences.
/// The record's u_t and d/dt(A/u) use the five-point stencil; the evolution
/// residuals keep their own three-point differences.
HeatRunResult run_heat(const HeatRunConfig& config);

/// n a^2 / 2 - sup_x t (|grad w|^2 - a w_t) for a homogeneous run.
/// Throws std::invalid_argument when the record comes from a forced run.
double li_yau_classical_margin(const HeatTraceRecord& record, double a, int dimension);

/// Centered difference (next - prev) / (2 h).
ScalarField centered_rate(const ScalarField& prev, const ScalarField& next, double h);

/// Five-point centered difference (f_-2 - 8 f_-1 + 8 f_1 - f_2) / (12 h).
ScalarField centered_rate(const ScalarField& m2, const ScalarField& m1, const ScalarField& p1,
                          const ScalarField& p2, double h);

} // namespace harnack
