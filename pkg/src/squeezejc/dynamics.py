"""Resonant Jaynes-Cummings evolution for an atom starting in its ground state.

With the atom in ``|g>`` and the field in ``sum_n c_n |n>``, the
interaction-picture state at dimensionless time ``lt = lambda * t`` is

    C_g[n] = c[n] cos(sqrt(n) lt)
    C_e[n] = -i c[n+1] sin(sqrt(n+1) lt)

so no Hamiltonian matrix is ever built.  Time series are evaluated by
accumulating over photon number in ascending order for every grid point,
which makes each sample independent of how the grid is chunked.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from .fields import FockAmplitudes
from .numerics import DomainError, trapezoid_mean

__all__ = [
    "JointState",
    "AtomDensity",
    "TimeSeries",
    "time_grid",
    "evolve",
    "inversion",
    "state_inversion",
    "reduce_atom",
    "linear_entropy",
    "field_purity",
    "entropy_series",
    "mean_linear_entropy",
    "inversion_envelope",
    "SERIES_STEP",
    "AVERAGE_STEP",
    "MAX_AVERAGE_STEP",
]

SERIES_STEP = 0.02
AVERAGE_STEP = 0.05
MAX_AVERAGE_STEP = 0.05
CHUNK = 4096


@dataclass(frozen=True)
class JointState:
    lambda_t: float
    cg: np.ndarray
    ce: np.ndarray

    @property
    def norm(self) -> float:
        return math.fsum((np.abs(self.cg) ** 2).tolist()) + math.fsum((np.abs(self.ce) ** 2).tolist())


@dataclass(frozen=True)
class AtomDensity:
    """2x2 atomic density matrix, rows and columns ordered (e, g)."""

    matrix: np.ndarray

    @property
    def purity(self) -> float:
        m = self.matrix
        return float(np.real(np.sum(m * m.T)))


@dataclass(frozen=True)
class TimeSeries:
    start: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError(f"time step must be positive, got {self.step}")

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def grid(self) -> np.ndarray:
        return time_grid(self.start, self.step, self.count)

    def window(self, lo: float, hi: float) -> np.ndarray:
        g = self.grid
        return self.values[(g >= lo - 1e-9) & (g <= hi + 1e-9)]


def time_grid(start: float, step: float, count: int) -> np.ndarray:
    """``start + k * step`` for ``k < count``; no cumulative rounding."""
    return start + step * np.arange(count, dtype=float)


def _grid_count(stop: float, step: float, start: float = 0.0) -> int:
    return int(math.floor((stop - start) / step + 1e-9)) + 1


def evolve(amps: FockAmplitudes, lambda_t: float) -> JointState:
    c = np.asarray(amps.c, dtype=float)
    lt = float(lambda_t)
    if not math.isfinite(lt):
        raise DomainError(f"lambda_t must be finite, got {lambda_t}")
    root_n = np.sqrt(np.arange(c.size, dtype=float))
    cg = c * np.cos(root_n * lt) + 0j
    ce = -1j * c[1:] * np.sin(root_n[1:] * lt)
    return JointState(lt, cg, ce)


def state_inversion(state: JointState) -> float:
    """Half the excited-minus-ground population of a (renormalized) joint state."""
    pe = math.fsum((np.abs(state.ce) ** 2).tolist())
    pg = math.fsum((np.abs(state.cg) ** 2).tolist())
    return 0.5 * (pe - pg) / (pe + pg)


def _chunks(count: int):
    return [(i, min(i + CHUNK, count)) for i in range(0, count, CHUNK)]


def _map_chunks(fn, count: int, workers: int) -> np.ndarray:
    spans = _chunks(count)
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, spans))
    else:
        parts = [fn(s) for s in spans]
    return np.concatenate(parts) if parts else np.empty(0)


def inversion(P, start: float = 0.0, step: float = SERIES_STEP, count: int | None = None,
              stop: float | None = None, norm_tol: float = 1e-8, workers: int = 1) -> TimeSeries:
    """Atomic inversion ``-1/2 sum_n P(n) cos(2 lt sqrt(n))`` on a uniform grid.

    Works for any photon-number distribution ``P`` summing to one within
    ``norm_tol``; it is renormalized to the retained mass. Give either
    ``count`` or ``stop``.
    """
    P = np.asarray(P, dtype=float)
    total = math.fsum(P.tolist())
    if P.ndim != 1 or abs(total - 1.0) > norm_tol or np.any(P < 0):
        raise DomainError(f"P must be a normalized distribution (sum={total!r}, tol={norm_tol})")
    count = _resolve_count(start, step, count, stop)
    two_root_n = 2.0 * np.sqrt(np.arange(P.size, dtype=float))

    def block(span):
        t = time_grid(start, step, count)[span[0]:span[1]]
        acc = np.zeros_like(t)
        for n in range(P.size):
            if P[n] != 0.0:
                acc += P[n] * np.cos(two_root_n[n] * t)
        return (-0.5 / total) * acc

    return TimeSeries(start, step, _map_chunks(block, count, workers))


def _resolve_count(start, step, count, stop) -> int:
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    if count is None:
        if stop is None:
            raise DomainError("give either count or stop")
        if not stop > start:
            raise DomainError(f"stop must exceed start, got start={start}, stop={stop}")
        count = _grid_count(stop, step, start)
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    return int(count)


def reduce_atom(state: JointState) -> AtomDensity:
    """Partial trace over the field, laid out as ``[[ee, eg], [ge, gg]]``.

    The off-diagonal follows the convention ``rho[e, g] = sum_n conj(C_e[n]) C_g[n]``.
    The result is divided by the retained norm so truncation of the photon
    tail does not masquerade as mixedness.
    """
    ce, cg = state.ce, state.cg
    ree = math.fsum((np.abs(ce) ** 2).tolist())
    rgg = math.fsum((np.abs(cg) ** 2).tolist())
    prod = np.conj(ce) * cg[: ce.size]
    reg = complex(math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist()))
    m = np.array([[ree, reg], [np.conj(reg), rgg]], dtype=complex)
    return AtomDensity(m / (ree + rgg))


def linear_entropy(rho: AtomDensity) -> float:
    """``2 (1 - Tr rho^2)``: 0 for a pure qubit, 1 when maximally mixed."""
    m = np.asarray(rho.matrix if isinstance(rho, AtomDensity) else rho)
    purity = float(np.real(np.sum(m * m.T)))
    return min(max(2.0 * (1.0 - purity), 0.0), 1.0)


def field_purity(state: JointState) -> float:
    """``Tr rho_F^2`` from the full field density matrix.

    Deliberately quadratic in the cutoff: it is the independent check on the
    two-level route through :func:`reduce_atom`.
    """
    n = state.cg.size
    ce = np.zeros(n, dtype=complex)
    ce[: state.ce.size] = state.ce
    rho_f = np.outer(state.cg, np.conj(state.cg)) + np.outer(ce, np.conj(ce))
    rho_f /= np.trace(rho_f).real
    return float(np.sum(np.abs(rho_f) ** 2))


def entropy_series(amps: FockAmplitudes, start: float = 0.0, step: float = SERIES_STEP,
                   count: int | None = None, stop: float | None = None,
                   workers: int = 1) -> TimeSeries:
    """Linear entropy of the atom on a uniform grid of ``lambda t``."""
    c = np.asarray(amps.c, dtype=float)
    norm2 = math.fsum((c * c).tolist()) ** 2
    count = _resolve_count(start, step, count, stop)
    root_n = np.sqrt(np.arange(c.size, dtype=float))

    def block(span):
        t = time_grid(start, step, count)[span[0]:span[1]]
        ree = np.zeros_like(t)
        rgg = np.zeros_like(t)
        reg = np.zeros_like(t)
        cos_n = np.ones_like(t)
        for n in range(c.size):
            if n + 1 < c.size:
                sin_next = np.sin(root_n[n + 1] * t)
                cos_next = np.cos(root_n[n + 1] * t)
            rgg += (c[n] * c[n]) * (cos_n * cos_n)
            if n + 1 < c.size:
                ree += (c[n + 1] * c[n + 1]) * (sin_next * sin_next)
                reg += (c[n + 1] * c[n]) * (sin_next * cos_n)
                cos_n = cos_next
        purity = (ree * ree + rgg * rgg + 2.0 * reg * reg) / norm2
        return np.clip(2.0 * (1.0 - purity), 0.0, 1.0)

    return TimeSeries(start, step, _map_chunks(block, count, workers))


def mean_linear_entropy(amps: FockAmplitudes, lambda_T: float = 1000.0,
                        step: float = AVERAGE_STEP, workers: int = 1) -> float:
    """Trapezoidal time average of the linear entropy over ``[0, lambda_T]``."""
    if not (math.isfinite(lambda_T) and lambda_T > 0):
        raise DomainError(f"lambda_T must be positive and finite, got {lambda_T}")
    if not 0 < step <= MAX_AVERAGE_STEP:
        raise DomainError(
            f"step {step} violates the sampling guard 0 < step <= {MAX_AVERAGE_STEP}; "
            "coarser grids alias the fastest Rabi frequencies"
        )
    series = entropy_series(amps, 0.0, step, stop=lambda_T, workers=workers)
    return trapezoid_mean(series.values, step)


def inversion_envelope(series: TimeSeries, width: float = 2.0) -> TimeSeries:
    """Sliding maximum of ``|W|`` over a window of ``width`` in ``lambda t``.

    The window should span several Rabi periods so that only the
    collapse/revival envelope survives.
    """
    size = max(1, int(round(width / series.step)))
    env = maximum_filter1d(np.abs(series.values), size=size, mode="nearest")
    return TimeSeries(series.start, series.step, env)
