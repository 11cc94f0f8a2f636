#include "harnack/calculus.hpp"

#include "detail/spectral.hpp"
#include "detail/sphere_ops.hpp"
#include "harnack/errors.hpp"

#include <string>

namespace harnack {

namespace {

void require_torus(const ScalarField& f, const char* op) {
  if (!f.manifold().is_torus())
    throw UnsupportedManifold(std::string(op) + " is only available on the flat torus");
}

ScalarField wrap(const ScalarField& like, std::vector<double> values) {
  return ScalarField(like.manifold_ptr(), std::move(values));
}

} // namespace

ScalarField laplace_beltrami(const ScalarField& f) {
  const auto& m = f.manifold();
  if (m.is_torus()) {
    const auto& sp = m.spectral();
    return wrap(f, sp.laplacian(sp.forward(f.values())));
  }
  return wrap(f, m.sphere_operators().apply_laplacian(f.values()));
}

std::vector<ScalarField> gradient_components(const ScalarField& f) {
  require_torus(f, "gradient_components");
  const auto& sp = f.manifold().spectral();
  const auto spectrum = sp.forward(f.values());
  std::vector<ScalarField> out;
  for (int a = 0; a < sp.axes(); ++a)
    out.push_back(wrap(f, sp.derivative(spectrum, a)));
  return out;
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  require_torus(f, "partial_derivative");
  const auto& sp = f.manifold().spectral();
  if (axis < 0 || axis >= sp.axes())
    throw std::invalid_argument("partial_derivative: axis out of range");
  return wrap(f, sp.derivative(sp.forward(f.values()), axis));
}

ScalarField gradient_norm_sq(const ScalarField& f) { return gradient_inner(f, f); }

ScalarField gradient_inner(const ScalarField& f, const ScalarField& g) {
  require_same_manifold(f, g);
  const auto& m = f.manifold();
  if (m.is_sphere())
    return wrap(f, m.sphere_operators().gradient_inner(f.values(), g.values()));

  const auto& sp = m.spectral();
  const auto fs = sp.forward(f.values());
  const bool same = f.values().data() == g.values().data();
  const auto gs = same ? detail::Spectrum{} : sp.forward(g.values());
  std::vector<double> out(f.size(), 0.0);
  for (int a = 0; a < sp.axes(); ++a) {
    const auto df = sp.derivative(fs, a);
    const auto dg = same ? df : sp.derivative(gs, a);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += df[i] * dg[i];
  }
  return wrap(f, std::move(out));
}

ScalarField hessian_frobenius_sq(const ScalarField& f) {
  require_torus(f, "hessian_frobenius_sq");
  const auto& sp = f.manifold().spectral();
  const auto spectrum = sp.forward(f.values());
  std::vector<double> out(f.size(), 0.0);
  for (int i = 0; i < sp.axes(); ++i) {
    for (int j = i; j < sp.axes(); ++j) {
      const auto h = sp.second_derivative(spectrum, i, j);
      const double mult = i == j ? 1.0 : 2.0;
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += mult * h[k] * h[k];
    }
  }
  return wrap(f, std::move(out));
}

ScalarField bochner_residual(const ScalarField& f) {
  require_torus(f, "bochner_residual");
  const auto lhs = laplace_beltrami(gradient_norm_sq(f));
  const auto rhs = 2.0 * hessian_frobenius_sq(f) + 2.0 * gradient_inner(f, laplace_beltrami(f));
  return lhs - rhs;
}

ScalarField hessian_trace_margin(const ScalarField& f) {
  require_torus(f, "hessian_trace_margin");
  const auto lap = laplace_beltrami(f);
  const double n = f.manifold().dimension();
  return hessian_frobenius_sq(f) - (lap * lap) / n;
}

} // namespace harnack
