#include "harnack/elliptic.hpp"

#include "detail/spectral.hpp"
#include "detail/sphere_ops.hpp"
#include "harnack/calculus.hpp"
#include "harnack/errors.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <string>

namespace harnack {

namespace {

constexpr double kCompatibilityTolerance = 1e-10;
constexpr double kSphereSolverTolerance = 1e-12;

void require_positive(const ScalarField& u, const char* op) {
  if (!(u.min() > 0.0))
    throw std::invalid_argument(std::string(op) + ": u must be positive, min(u) = " +
                                std::to_string(u.min()));
}

ScalarField solve_sphere(const ScalarField& source) {
  const auto& m = source.manifold();
  const auto& ops = m.sphere_operators();
  const auto w = m.weights();
  const auto n = static_cast<Eigen::Index>(source.size());

  Eigen::SparseMatrix<double> system = -ops.stiffness();
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i)
    rhs[i] = w[static_cast<std::size_t>(i)] * source[static_cast<std::size_t>(i)];

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(kSphereSolverTolerance);
  cg.setMaxIterations(10 * n);
  cg.compute(system);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw SolverFailure("sphere Poisson solve did not converge: relative residual " +
                        std::to_string(cg.error()) + " after " +
                        std::to_string(cg.iterations()) + " iterations");

  std::vector<double> v(x.data(), x.data() + n);
  double mean = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    mean += w[i] * v[i];
  mean /= m.volume();
  for (double& value : v)
    value -= mean;
  return ScalarField(source.manifold_ptr(), std::move(v));
}

ScalarField solve_torus(const ScalarField& source) {
  const auto& sp = source.manifold().spectral();
  auto spectrum = sp.forward(source.values());
  for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
    const double symbol = sp.laplacian_symbol(idx);
    spectrum[idx] = symbol == 0.0 ? 0.0 : spectrum[idx] / -symbol;
  }
  return ScalarField(source.manifold_ptr(), sp.backward(spectrum));
}

} // namespace

void require_poisson_pair(const ScalarField& u, const ScalarField& source, double tolerance) {
  require_same_manifold(u, source);
  const double defect = (laplace_beltrami(u) + source).sup_norm();
  const double allowed = tolerance * std::max(1.0, source.sup_norm());
  if (defect > allowed)
    throw PreconditionError("(u, A) does not solve -Delta u = A: sup|Delta u + A| = " +
                            std::to_string(defect) + " > " + std::to_string(allowed));
}

ScalarField solve_poisson_mean_zero(const ScalarField& source) {
  const auto& m = source.manifold();
  const double total = integrate(source);
  if (std::abs(total) > kCompatibilityTolerance * m.volume())
    throw PreconditionError("Poisson source is incompatible: integral " + std::to_string(total) +
                            " exceeds 1e-10 * volume");
  return m.is_torus() ? solve_torus(source) : solve_sphere(source);
}

ScalarField positive_shift(const ScalarField& v, double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("positive_shift: delta must be positive");
  return v + (delta - v.min());
}

ScalarField log_transform(const ScalarField& u) {
  require_positive(u, "log_transform");
  return u.map([](double x) { return std::log(x); });
}

ScalarField harnack_Q(const ScalarField& u, const ScalarField& source) {
  require_same_manifold(u, source);
  require_positive(u, "harnack_Q");
  return gradient_norm_sq(log_transform(u)) + source / u;
}

ScalarField q_identity_residual(const ScalarField& u, const ScalarField& source) {
  require_positive(u, "q_identity_residual");
  require_poisson_pair(u, source);
  return harnack_Q(u, source) + laplace_beltrami(log_transform(u));
}

ScalarField quotient_laplacian_residual(const ScalarField& u, const ScalarField& source) {
  require_positive(u, "quotient_laplacian_residual");
  require_poisson_pair(u, source);
  const auto w = log_transform(u);
  const auto ratio = source / u;
  const auto q = harnack_Q(u, source);
  const auto expansion = laplace_beltrami(source) / u - 2.0 * gradient_inner(source, w) / u +
                         ratio * (2.0 * q - ratio);
  return laplace_beltrami(ratio) - expansion;
}

namespace {

struct BoundTerms {
  ScalarField ratio;       // A / u
  ScalarField source_sq;   // A^2
  ScalarField grad_sq;     // |grad A|^2
  ScalarField laplacian;   // Delta A
};

BoundTerms bound_terms(const ScalarField& u, const ScalarField& source) {
  require_same_manifold(u, source);
  require_positive(u, "theorem1_rhs");
  return {source / u, source * source, gradient_norm_sq(source), laplace_beltrami(source)};
}

double bound_max(const ScalarField& u, const BoundTerms& t, double ricci_K, double b,
                 bool with_young) {
  const double n = u.manifold().dimension();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = t.ratio[i];
    const double inv_u = 1.0 / u[i];
    const double branch1 = ricci_K + (with_young ? b : 0.0) - r;
    const double quadratic = with_young ? t.source_sq[i] + t.grad_sq[i] / (2.0 * b)
                                        : t.source_sq[i];
    const double branch2 = quadratic * inv_u * inv_u -
                           ((4.0 / n) * (r - ricci_K) * (r - ricci_K) + 2.0 * ricci_K * r +
                            t.laplacian[i] * inv_u);
    best = std::max({best, branch1, branch2});
  }
  return 2.0 * n * best;
}

} // namespace

double theorem1_rhs(const ScalarField& u, const ScalarField& source, double ricci_K, double b) {
  if (!(b > 0.0))
    throw std::invalid_argument("theorem1_rhs: Young parameter b must be positive");
  if (!(ricci_K >= 0.0))
    throw std::invalid_argument("theorem1_rhs: K must be non-negative");
  return bound_max(u, bound_terms(u, source), ricci_K, b, true);
}

double theorem1_statement_rhs(const ScalarField& u, const ScalarField& source, double ricci_K) {
  if (!(ricci_K >= 0.0))
    throw std::invalid_argument("theorem1_statement_rhs: K must be non-negative");
  return bound_max(u, bound_terms(u, source), ricci_K, 0.0, false);
}

bool margin_holds(double margin, double rhs) {
  return margin >= -1e-6 * std::max(1.0, std::abs(rhs));
}

EllipticReport verify_theorem1(const EllipticScenario& scenario) {
  if (!(scenario.shift > 0.0) || !(scenario.young_b > 0.0) || !(scenario.ricci_K >= 0.0))
    throw std::invalid_argument("verify_theorem1: need delta > 0, b > 0, K >= 0");
  const auto& source = scenario.source;
  const auto v = solve_poisson_mean_zero(source);
  const auto u = positive_shift(v, scenario.shift);
  const auto q = harnack_Q(u, source);

  EllipticReport r;
  r.residual_solver = (laplace_beltrami(v) + source).sup_norm();
  r.argmax = q.argmax();
  r.sup_Q = q[r.argmax];
  r.rhs_general_b = theorem1_rhs(u, source, scenario.ricci_K, scenario.young_b);
  r.rhs_theorem_statement = theorem1_statement_rhs(u, source, scenario.ricci_K);
  r.margin = r.rhs_general_b - r.sup_Q;
  r.statement_margin = r.rhs_theorem_statement - r.sup_Q;
  r.holds = margin_holds(r.margin, r.rhs_general_b);
  r.statement_holds = margin_holds(r.statement_margin, r.rhs_theorem_statement);
  r.residual_q_identity = q_identity_residual(u, source).sup_norm();
  r.residual_quotient_laplacian = quotient_laplacian_residual(u, source).sup_norm();
  return r;
}

} // namespace harnack
