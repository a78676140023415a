"""Small, deterministic numerical kernels: bracketed bisection, golden-section
minimization, trapezoidal averaging and log-space accumulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "SolverError",
    "Bracket",
    "root_bracket",
    "minimum_bracket",
    "bisect",
    "minimize_scalar",
    "scan_minimum_bracket",
    "trapezoid_mean",
    "logsumexp",
    "signed_log_add",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DomainError(ValueError):
    """An input lies outside the documented domain of an operation."""


class SolverError(RuntimeError):
    """Root finding or minimization could not establish or keep a bracket.

    ``diagnostics`` carries whatever the solver knew when it gave up
    (bracket endpoints, function values, scan tables).
    """

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class Bracket:
    """Either a root bracket ``(lo, hi)`` or a minimum bracket ``(lo, mid, hi)``."""

    lo: float
    hi: float
    mid: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"bracket endpoints must be finite, got ({self.lo}, {self.hi})")
        if self.mid is None:
            if not self.lo < self.hi:
                raise DomainError(f"bracket requires lo < hi, got ({self.lo}, {self.hi})")
        elif not self.lo < self.mid < self.hi:
            raise DomainError(
                f"bracket requires lo < mid < hi, got ({self.lo}, {self.mid}, {self.hi})"
            )


def _checked(f: Callable[[float], float], x: float) -> float:
    y = float(f(x))
    if not math.isfinite(y):
        raise SolverError(f"objective returned non-finite value {y} at x={x}", {"x": x, "f": y})
    return y


def root_bracket(f: Callable[[float], float], lo: float, hi: float) -> Bracket:
    """Build a root bracket, verifying that ``f`` changes sign on it."""
    b = Bracket(lo, hi)
    flo, fhi = _checked(f, lo), _checked(f, hi)
    if flo * fhi > 0.0:
        raise SolverError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}",
            {"lo": lo, "hi": hi, "f_lo": flo, "f_hi": fhi},
        )
    return b


def minimum_bracket(f: Callable[[float], float], lo: float, mid: float, hi: float) -> Bracket:
    """Build a minimum bracket, verifying ``f(mid) < min(f(lo), f(hi))``."""
    b = Bracket(lo, hi, mid)
    flo, fmid, fhi = _checked(f, lo), _checked(f, mid), _checked(f, hi)
    if not fmid < min(flo, fhi):
        raise SolverError(
            f"({lo}, {mid}, {hi}) does not bracket a minimum",
            {"lo": lo, "mid": mid, "hi": hi, "f_lo": flo, "f_mid": fmid, "f_hi": fhi},
        )
    return b


def bisect(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-10,
           max_iter: int = 500) -> float:
    """Bisection on a sign-change bracket until its width is at most ``tol``.

    Returns the endpoint of the final interval with the smaller ``|f|``.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = _checked(f, lo), _checked(f, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise SolverError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}",
            {"lo": lo, "hi": hi, "f_lo": flo, "f_hi": fhi},
        )
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # interval exhausted at floating resolution
            break
        fmid = _checked(f, mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return lo if abs(flo) <= abs(fhi) else hi


def minimize_scalar(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-10,
                    max_iter: int = 500) -> float:
    """Golden-section search inside a minimum bracket.

    The bracket must carry a ``mid`` point with ``f(mid)`` below both ends.
    Contraction stops once the interval is no wider than ``tol``; the
    returned abscissa is the best point seen, so its value never exceeds
    ``f`` at the final interval ends.
    """
    if bracket.mid is None:
        raise DomainError("minimize_scalar needs a (lo, mid, hi) bracket")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    a, b = bracket.lo, bracket.hi
    fa, fb = _checked(f, a), _checked(f, b)
    best_x, best_f = bracket.mid, _checked(f, bracket.mid)
    if not best_f < min(fa, fb):
        raise SolverError(
            "bracket does not enclose a minimum",
            {"lo": a, "mid": best_x, "hi": b, "f_lo": fa, "f_mid": best_f, "f_hi": fb},
        )

    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = _checked(f, x1), _checked(f, x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            b, fb = x2, f2
            x2, f2 = x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = _checked(f, x1)
        else:
            a, fa = x1, f1
            x1, f1 = x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = _checked(f, x2)
    for x, fx in ((x1, f1), (x2, f2)):
        if a <= x <= b and fx < best_f:
            best_x, best_f = x, fx
    if not a <= best_x <= b:
        # the seed mid-point fell outside the contracted interval
        best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    return best_x


def scan_minimum_bracket(f: Callable[[float], float], grid: Sequence[float],
                         values: Optional[Sequence[float]] = None) -> Bracket:
    """Pre-scan ``f`` on an ascending grid and bracket its smallest sample.

    ``values`` may carry precomputed ``f(grid)`` (e.g. from a vectorized
    evaluation). Raises :class:`SolverError` with the scan table attached
    when the minimum sits on a grid endpoint.
    """
    xs = [float(x) for x in grid]
    if values is None:
        ys = [_checked(f, x) for x in xs]
    else:
        ys = [float(y) for y in values]
        if len(ys) != len(xs) or not all(math.isfinite(y) for y in ys):
            raise SolverError("scan values must be finite and match the grid", {"scan": list(zip(xs, ys))})
    k = int(np.argmin(ys))
    if k == 0 or k == len(xs) - 1:
        raise SolverError(
            f"grid minimum at endpoint x={xs[k]}; no interior bracket",
            {"scan": list(zip(xs, ys))},
        )
    return Bracket(xs[k - 1], xs[k + 1], xs[k])


def trapezoid_mean(values, step: float) -> float:
    """Average of uniformly sampled data by the trapezoidal rule.

    Equivalent to ``trapezoid(values, dx=step) / ((len(values) - 1) * step)``,
    accumulated with exactly rounded summation so the result does not depend
    on the length of the grid beyond the rule itself.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise DomainError(f"trapezoid_mean needs at least 2 samples, got {v.size}")
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    interior = math.fsum(v[1:-1].tolist())
    total = (interior + 0.5 * (v[0] + v[-1])) * step
    return total / ((v.size - 1) * step)


def logsumexp(logs) -> float:
    """``log(sum(exp(logs)))`` without overflow; ``-inf`` for an empty input."""
    x = np.asarray(logs, dtype=float).ravel()
    if x.size == 0:
        return -math.inf
    m = float(np.max(x))
    if not math.isfinite(m):
        return m
    return m + math.log(math.fsum(np.exp(x - m).tolist()))


def signed_log_add(log_a: float, sign_a: float, log_b: float, sign_b: float):
    """Add two numbers stored as (log-magnitude, sign); returns the same pair."""
    if sign_a == 0 or log_a == -math.inf:
        return log_b, sign_b
    if sign_b == 0 or log_b == -math.inf:
        return log_a, sign_a
    if log_a < log_b:
        log_a, sign_a, log_b, sign_b = log_b, sign_b, log_a, sign_a
    r = math.exp(log_b - log_a)
    if sign_a == sign_b:
        return log_a + math.log1p(r), sign_a
    if r == 1.0:
        return -math.inf, 0.0
    return log_a + math.log1p(-r), sign_a
