"""Fractional Newton-Leipnik reaction-diffusion toolkit (Python bindings)."""

from ._core import (
    DivergenceError,
    ParseError,
    __version__,
    caputo_eval,
    control_law,
    deng_stable,
    divergence,
    equilibria,
    gamma,
    jacobian,
    l1_weights,
    matignon_margin,
    mittag_leffler,
    neumann_spectrum,
    normalize_config,
    run_experiment,
    run_sync,
    simulate_ode,
    simulate_pde,
    sync_condition_check,
    vector_field,
)

__all__ = [
    "DivergenceError",
    "ParseError",
    "__version__",
    "caputo_eval",
    "control_law",
    "deng_stable",
    "divergence",
    "equilibria",
    "gamma",
    "jacobian",
    "l1_weights",
    "matignon_margin",
    "mittag_leffler",
    "neumann_spectrum",
    "normalize_config",
    "run_experiment",
    "run_sync",
    "simulate_ode",
    "simulate_pde",
    "sync_condition_check",
    "vector_field",
]
