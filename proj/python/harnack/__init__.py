"""Gradient-estimate verification for positive solutions of -Δu = A and (∂t - Δ)u = A."""

from ._core import (  # noqa: F401
    Manifold,
    PositivityLoss,
    PreconditionError,
    SolverFailure,
    UnsupportedManifold,
    bochner_residual,
    convergence_checks,
    convergence_study,
    elliptic_catalog,
    elliptic_mms,
    flat_torus,
    format_number,
    gradient_inner,
    gradient_norm_sq,
    harnack_F,
    harnack_Q,
    hessian_trace_margin,
    integrate,
    laplace_beltrami,
    parabolic_catalog,
    q_identity_residual,
    quotient_laplacian_residual,
    run_cli,
    run_heat,
    run_heat_mms,
    solve_poisson_mean_zero,
    unit_sphere,
    verify_theorem1,
)
