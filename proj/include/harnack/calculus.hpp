#pragma once

#include "harnack/field.hpp"

#include <vector>

namespace harnack {

// Discrete Laplace-Beltrami operator. Torus: exact spectral multiplier
// -sum k_i^2. Sphere: cotangent Laplacian divided by lumped vertex area.
ScalarField laplace_beltrami(const ScalarField& f);

// |grad f|^2. On the sphere this is the lumped average of the per-triangle
// squared gradient norms, the same rule gradient_inner uses.
ScalarField gradient_norm_sq(const ScalarField& f);

ScalarField gradient_inner(const ScalarField& f, const ScalarField& g);

// Torus only: partial derivative along one axis (Nyquist mode dropped).
ScalarField partial_derivative(const ScalarField& f, int axis);

// Torus only: all first partials in axis order.
std::vector<ScalarField> gradient_components(const ScalarField& f);

// Torus only: sum_{i,j} (d_i d_j f)^2. Throws UnsupportedManifold on the sphere.
ScalarField hessian_frobenius_sq(const ScalarField& f);

// Torus only: Delta|grad f|^2 - 2|D^2 f|^2 - 2 (grad f, grad Delta f).
// Ric vanishes on the flat torus so the curvature term drops out.
ScalarField bochner_residual(const ScalarField& f);

// Torus only: |D^2 f|^2 - (Delta f)^2 / n.
ScalarField hessian_trace_margin(const ScalarField& f);

} // namespace harnack
