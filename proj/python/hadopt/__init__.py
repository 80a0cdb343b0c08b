"""Simplex-constrained optimization through the Hadamard parametrization."""

import json

from ._hadopt import (
    ConfigError,
    MissingHessianError,
    Problem,
    hadamard_sqrt,
    hadamard_square,
    known_solvers,
    least_squares,
    make_problem,
    project_l1_ball,
    project_simplex,
    transfer_lipschitz,
)
from . import _hadopt

__all__ = [
    "ConfigError",
    "MissingHessianError",
    "Problem",
    "hadamard_sqrt",
    "hadamard_square",
    "kkt_check",
    "known_solvers",
    "least_squares",
    "make_problem",
    "project_l1_ball",
    "project_simplex",
    "run_bench",
    "solve",
    "transfer_lipschitz",
]


def solve(problem, solver="hadrgd-bb", max_iters=1000, target=None, seed=0, **overrides):
    """Run a named solver from the uniform start.

    Returns a dict with the final point ``x``, ``status``, ``iterations``,
    ``seconds`` and per-iteration arrays ``f``, ``grad_norm``, ``step``,
    ``trace_seconds`` and ``backtracks``.
    """
    return _hadopt._solve(problem, solver, max_iters, target, seed, json.dumps(overrides))


def kkt_check(problem, x, tol=1e-6):
    """Certify a simplex point and its square root on the sphere."""
    return json.loads(_hadopt._kkt_check(problem, x, tol))


def run_bench(config):
    """Run a benchmark grid described by a config dict."""
    return json.loads(_hadopt._run_bench(json.dumps(config)))
