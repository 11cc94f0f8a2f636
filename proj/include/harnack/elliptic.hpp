#pragma once

#include "harnack/field.hpp"

#include <cstddef>
#include <string>

namespace harnack {

/// Relative tolerance used to decide whether (u, A) solves -Delta u = A
/// closely enough for the log-transform identities to apply:
/// sup|Delta u + A| <= tol * max(1, sup|A|).
inline constexpr double kPoissonPairTolerance = 1e-4;

/// Throws PreconditionError when (u, A) fails the check above.
void require_poisson_pair(const ScalarField& u, const ScalarField& source,
                          double tolerance = kPoissonPairTolerance);

/// Mean-zero solution v of -Delta v = A. Requires |int A| <= 1e-10 vol.
/// Torus: division by the symbol sum k^2 (zero mode set to 0). Sphere:
/// conjugate gradients on the cotangent system, then the mean is removed.
ScalarField solve_poisson_mean_zero(const ScalarField& source);

/// u = v - min(v) + delta, so min(u) == delta and Delta u == Delta v.
ScalarField positive_shift(const ScalarField& v, double delta);

/// Pointwise log; every value must be positive.
ScalarField log_transform(const ScalarField& u);

/// Q = |grad log u|^2 + A / u.
ScalarField harnack_Q(const ScalarField& u, const ScalarField& source);

/// Q + Delta w with w = log u; vanishes on solutions of -Delta u = A.
ScalarField q_identity_residual(const ScalarField& u, const ScalarField& source);

/// Delta(A/u) - [Delta A / u - 2 (grad A, grad w) / u + (A/u)(2Q - A/u)].
/// Only an identity on solutions, so the PDE is checked first.
ScalarField quotient_laplacian_residual(const ScalarField& u, const ScalarField& source);

/// Right-hand side of the gradient bound for a free Young parameter b > 0:
///   2n * max_x max(K + b - A/u,
///                  (A^2 + |grad A|^2 / (2b)) / u^2
///                    - [(4/n)(A/u - K)^2 + 2K A/u + Delta A / u]).
double theorem1_rhs(const ScalarField& u, const ScalarField& source, double ricci_K, double b);

/// Form without the Young term:
///   2n * max_x max(K - A/u, A^2/u^2 - [(4/n)(A/u - K)^2 + 2K A/u + Delta A / u]).
double theorem1_statement_rhs(const ScalarField& u, const ScalarField& source, double ricci_K);

struct EllipticScenario {
  ScalarField source;
  double shift = 1.0;
  double young_b = 0.5;
  double ricci_K = 0.0;
};

struct EllipticReport {
  double sup_Q = 0.0;
  std::size_t argmax = 0;
  double rhs_general_b = 0.0;
  double rhs_theorem_statement = 0.0;
  double margin = 0.0;
  double statement_margin = 0.0;
  bool holds = false;
  bool statement_holds = false;
  double residual_q_identity = 0.0;
  double residual_quotient_laplacian = 0.0;
  double residual_solver = 0.0;
};

/// Margin test used for every inequality verdict: margin >= -1e-6 max(1, |rhs|).
bool margin_holds(double margin, double rhs);

/// solve -> shift -> Q -> bound, with identity residuals on the way.
EllipticReport verify_theorem1(const EllipticScenario& scenario);

} // namespace harnack
