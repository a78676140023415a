"""Optimal squeezing at fixed coherent photon number.

Two optima are tracked for each ``n_c``: the ``n_s`` minimizing the
photon-number variance (root of its stationarity condition, found by
bisection and cross-checked by golden-section minimization) and the
``n_s`` minimizing Mandel's Q.  For the latter the published closed-form
condition is evaluated as printed and its root is reported next to the
direct argmin, never in place of it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fields import mandel_q, photon_variance
from .numerics import (
    DomainError,
    SolverError,
    bisect,
    minimize_scalar,
    root_bracket,
    scan_minimum_bracket,
)

__all__ = [
    "OptimalityReport",
    "variance_residual",
    "q_residual",
    "solve_min_variance",
    "solve_min_q",
    "scan_optimal",
    "DEFAULT_TOL",
    "CERTIFY_TOL",
]

DEFAULT_TOL = 1e-10
# golden-section on a quadratic minimum resolves the argmin only to ~sqrt(eps)
CERTIFY_TOL = 1e-5
EQ13_LOWER = 1e-6
SCAN_POINTS = 4001


@dataclass
class OptimalityReport:
    n_c: float
    ns_min_variance: float = math.nan
    ns_min_q_direct: float = math.nan
    q_min: float = math.nan
    ns_eq13_root: Optional[float] = None
    res_eq14: float = math.nan
    res_eq13: float = math.nan
    error: Optional[str] = None
    diagnostics: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None


def _check_nc(n_c: float, minimum: float = 0.0) -> float:
    n_c = float(n_c)
    if not math.isfinite(n_c) or n_c < minimum:
        raise DomainError(f"n_c must be finite and >= {minimum}, got {n_c}")
    return n_c


def variance_residual(n_c: float, n_s: float) -> float:
    """``2 (1 + n_c + 2 n_s) sqrt(n_s (1 + n_s)) - n_c (1 + 2 n_s)``.

    Vanishes where the photon-number variance is stationary in ``n_s``.
    """
    if n_c < 0 or n_s < 0:
        raise DomainError(f"n_c and n_s must be nonnegative, got ({n_c}, {n_s})")
    return 2.0 * (1.0 + n_c + 2.0 * n_s) * math.sqrt(n_s * (1.0 + n_s)) - n_c * (1.0 + 2.0 * n_s)


def q_residual(n_c: float, n_s: float) -> float:
    """The published minimum-Q condition, LHS minus RHS, exactly as printed:

    ``2 (n_c + n_s)^2 + n_c (1 + (1 + 1/n_s)^(-1/2)) - n_c^2 (1 + 1/n_s)^(1/2)``.
    """
    if n_c < 0:
        raise DomainError(f"n_c must be nonnegative, got {n_c}")
    if not n_s > 0:
        raise DomainError(f"n_s must be strictly positive (1/n_s is singular), got {n_s}")
    g = math.sqrt(1.0 + 1.0 / n_s)
    return 2.0 * (n_c + n_s) ** 2 + n_c * (1.0 + 1.0 / g) - n_c * n_c * g


def _scan_grid(n_c: float) -> np.ndarray:
    return np.linspace(0.0, n_c, SCAN_POINTS)


def _golden_argmin(f, n_c: float, tol: float, vectorized) -> float:
    grid = _scan_grid(n_c)
    bracket = scan_minimum_bracket(f, grid, vectorized(n_c, grid))
    return minimize_scalar(f, bracket, tol)


def solve_min_variance(n_c: float, tol: float = DEFAULT_TOL) -> float:
    """Squeezed photon number minimizing the variance at fixed ``n_c``.

    Bisection on :func:`variance_residual` over ``[0, n_c]``, then certified
    against a golden-section minimization of the variance itself and by the
    variance rising 0.1 either side of the root.
    """
    n_c = _check_nc(n_c, 1.0)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    f = lambda s: variance_residual(n_c, s)  # noqa: E731
    root = bisect(f, root_bracket(f, 0.0, n_c), tol)

    var = lambda s: photon_variance(n_c, s)  # noqa: E731
    golden = _golden_argmin(var, n_c, tol, photon_variance)
    v0 = var(root)
    checks = {
        "root": root,
        "golden_argmin": golden,
        "var_root": v0,
        "var_minus": var(max(root - 0.1, 0.0)),
        "var_plus": var(root + 0.1),
    }
    if abs(golden - root) > max(10 * tol, CERTIFY_TOL):
        raise SolverError(f"variance root {root} disagrees with direct argmin {golden}", checks)
    if not (checks["var_minus"] > v0 and checks["var_plus"] > v0):
        raise SolverError(f"variance at {root} is not a local minimum on +-0.1", checks)
    return root


def solve_min_q(n_c: float, tol: float = DEFAULT_TOL):
    """``(n_s_direct, n_s_eq13)`` for the Mandel-Q optimum at fixed ``n_c``.

    ``n_s_direct`` minimizes Q by golden section after a grid pre-scan of
    ``[0, n_c]``; ``n_s_eq13`` is the bisection root of :func:`q_residual`
    on ``[1e-6, n_c]``, or ``None`` when that bracket has no sign change.
    """
    n_c = _check_nc(n_c, 1.0)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    q = lambda s: mandel_q(n_c, s)  # noqa: E731
    direct = _golden_argmin(q, n_c, tol, mandel_q)

    f = lambda s: q_residual(n_c, s)  # noqa: E731
    try:
        eq13 = bisect(f, root_bracket(f, EQ13_LOWER, n_c), tol)
    except SolverError:
        eq13 = None
    return direct, eq13


def optimality_report(n_c: float, tol: float = DEFAULT_TOL) -> OptimalityReport:
    rep = OptimalityReport(n_c=float(n_c))
    try:
        rep.ns_min_variance = solve_min_variance(n_c, tol)
        rep.res_eq14 = variance_residual(n_c, rep.ns_min_variance)
        rep.ns_min_q_direct, rep.ns_eq13_root = solve_min_q(n_c, tol)
        rep.q_min = mandel_q(n_c, rep.ns_min_q_direct)
        if rep.ns_eq13_root is not None:
            rep.res_eq13 = q_residual(n_c, rep.ns_eq13_root)
    except (SolverError, DomainError) as exc:
        rep.error = str(exc)
        rep.diagnostics = getattr(exc, "diagnostics", {})
    return rep


def scan_optimal(n_c_min: int, n_c_max: int, tol: float = DEFAULT_TOL,
                 workers: int = 1) -> list[OptimalityReport]:
    """One :class:`OptimalityReport` per integer ``n_c`` in ``[n_c_min, n_c_max]``.

    Failing rows carry ``error`` instead of aborting the scan.
    """
    if not (int(n_c_min) == n_c_min and int(n_c_max) == n_c_max):
        raise DomainError("scan bounds must be integers")
    if not 1 <= n_c_min <= n_c_max:
        raise DomainError(f"need 1 <= n_c_min <= n_c_max, got ({n_c_min}, {n_c_max})")
    values = range(int(n_c_min), int(n_c_max) + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda nc: optimality_report(nc, tol), values))
    return [optimality_report(nc, tol) for nc in values]
