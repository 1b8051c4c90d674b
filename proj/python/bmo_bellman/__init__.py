"""Python bindings for the Bellman function of the multiplicative BMO inequality."""

import json

from ._core import (
    BoundaryError,
    ConvergenceError,
    DomainError,
    Params,
    PiecewiseFn,
    SingularityError,
    classify,
    contains,
    eval,
    extract_constant,
    gradient,
    hessian,
    k_fn,
    m_fn,
    optimizer_phi0,
    optimizer_uminus,
    optimizer_uplus,
    random_step_fn,
    sharp_constant,
    solve_leaf,
)
from ._core import _run_suite

SUITES = (
    "identities",
    "closed_forms",
    "skeleton",
    "extremal",
    "concavity",
    "c1_glue",
    "oracle",
    "attainment",
    "phi0",
    "scaling",
    "slice",
)


def verify(suite, params, samples=1000, seed=7, cells=64, levels=12):
    """Run one verification suite and return its report as a dict."""
    return json.loads(_run_suite(suite, params, samples, seed, cells, levels))


__all__ = [
    "BoundaryError",
    "ConvergenceError",
    "DomainError",
    "Params",
    "PiecewiseFn",
    "SUITES",
    "SingularityError",
    "classify",
    "contains",
    "eval",
    "extract_constant",
    "gradient",
    "hessian",
    "k_fn",
    "m_fn",
    "optimizer_phi0",
    "optimizer_uminus",
    "optimizer_uplus",
    "random_step_fn",
    "sharp_constant",
    "solve_leaf",
    "verify",
]
