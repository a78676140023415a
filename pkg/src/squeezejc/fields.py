"""Squeezed coherent states of a single mode in the photon-number basis.

States are labelled by their mean photon numbers: ``n_c = |alpha|^2`` from
the displacement and ``n_s = sinh^2 r`` from the squeezing, both real and
nonnegative.  Number-basis amplitudes are generated by a three-term
recurrence inherited from the Hermite polynomials,

    c[n+1] = (beta/mu) c[n] / sqrt(n+1) - (nu/mu) sqrt(n/(n+1)) c[n-1],

which keeps every intermediate bounded where the closed form would
overflow ``H_n`` and ``n!`` separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .numerics import DomainError

__all__ = [
    "AmplitudeUnderflowError",
    "TruncationError",
    "SqueezeParams",
    "FockAmplitudes",
    "FieldMoments",
    "params_from_means",
    "choose_cutoff",
    "amplitudes",
    "photon_distribution",
    "moments",
    "distribution_moments",
    "photon_variance",
    "mandel_q",
    "coherent_amplitudes",
    "log_distribution_direct",
    "DEFAULT_TAIL_TOL",
]

DEFAULT_TAIL_TOL = 1e-12

_LOG_TINY = math.log(np.finfo(float).tiny)
_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)


class AmplitudeUnderflowError(ArithmeticError):
    pass


class TruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SqueezeParams:
    """Real squeezed-coherent-state parameters.

    ``mu = cosh r`` and ``nu = sinh r`` with ``r = asinh(sqrt(n_s))``, and
    ``beta = alpha (mu + nu)``.
    """

    n_c: float
    n_s: float

    @property
    def alpha(self) -> float:
        return math.sqrt(self.n_c)

    @property
    def nu(self) -> float:
        return math.sqrt(self.n_s)

    @property
    def mu(self) -> float:
        return math.sqrt(1.0 + self.n_s)

    @property
    def beta(self) -> float:
        return self.alpha * (self.mu + self.nu)

    @property
    def r(self) -> float:
        return math.asinh(self.nu)

    @property
    def mean(self) -> float:
        return self.n_c + self.n_s

    @property
    def log_c0(self) -> float:
        mu, nu, beta = self.mu, self.nu, self.beta
        return -0.5 * math.log(mu) - 0.5 * beta * beta * (1.0 - nu / mu)


@dataclass(frozen=True)
class FockAmplitudes:
    """Real number-basis amplitudes ``c[0..n_max]`` of a truncated state.

    ``tail_bound`` bounds the discarded probability ``1 - sum(c**2)``.
    """

    params: SqueezeParams
    c: np.ndarray
    tail_bound: float
    tail_tol: float

    @property
    def n_max(self) -> int:
        return self.c.size - 1


@dataclass(frozen=True)
class FieldMoments:
    mean: float
    variance: float
    mandel_q: float


def _check_mean(name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v}")
    if v < 0:
        raise DomainError(f"{name} must be nonnegative, got {v}")
    return v


def params_from_means(n_c: float, n_s: float) -> SqueezeParams:
    """Parameters of the state with ``n_c`` coherent and ``n_s`` squeezed photons."""
    return SqueezeParams(_check_mean("n_c", n_c), _check_mean("n_s", n_s))


def _check_tail_tol(tail_tol: float) -> float:
    if not (isinstance(tail_tol, (int, float)) and 0.0 < tail_tol < 1.0):
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    return float(tail_tol)


def _ladder_linear(p: SqueezeParams, n_stop: int) -> np.ndarray:
    c0 = math.exp(p.log_c0)
    if p.log_c0 < _LOG_TINY or c0 == 0.0:
        raise AmplitudeUnderflowError(
            f"c_0 = exp({p.log_c0:.1f}) underflows double precision for "
            f"(n_c={p.n_c}, n_s={p.n_s}); use the log-space path (method='log')"
        )
    a = p.beta / p.mu
    b = p.nu / p.mu
    c = np.zeros(n_stop + 1)
    c[0] = c0
    if n_stop >= 1:
        c[1] = a * c0
    for n in range(1, n_stop):
        c[n + 1] = a * c[n] / math.sqrt(n + 1) - b * math.sqrt(n / (n + 1)) * c[n - 1]
    return c


def _ladder_log(p: SqueezeParams, n_stop: int):
    """Same recurrence with periodic rescaling; returns (log|c|, sign)."""
    a = p.beta / p.mu
    b = p.nu / p.mu
    logc = np.full(n_stop + 1, -math.inf)
    sign = np.zeros(n_stop + 1)
    scale = p.log_c0
    prev, cur = 0.0, 1.0
    logc[0], sign[0] = scale, 1.0
    if n_stop >= 1:
        prev, cur = cur, a
    for n in range(1, n_stop + 1):
        if n >= 2:
            k = n - 1
            prev, cur = cur, a * cur / math.sqrt(k + 1) - b * math.sqrt(k / (k + 1)) * prev
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            scale += _LOG_RESCALE
        if cur != 0.0:
            logc[n] = math.log(abs(cur)) + scale
            sign[n] = math.copysign(1.0, cur)
    return logc, sign


def _ladder(p: SqueezeParams, n_stop: int, method: str) -> np.ndarray:
    if method == "linear":
        return _ladder_linear(p, n_stop)
    if method == "log" or (method == "auto" and p.log_c0 < _LOG_TINY):
        logc, sign = _ladder_log(p, n_stop)
        with np.errstate(under="ignore"):
            return sign * np.exp(logc)
    if method == "auto":
        return _ladder_linear(p, n_stop)
    raise DomainError(f"method must be 'auto', 'linear' or 'log', got {method!r}")


def _initial_cutoff(p: SqueezeParams) -> int:
    m = moments(p)
    return int(math.ceil(m.mean + 12.0 * math.sqrt(m.variance) + 25.0))


def _tails(P: np.ndarray) -> np.ndarray:
    """tails[n] bounds the probability beyond index n.

    Mass past the end of ``P`` is the normalization deficit less the
    recurrence's accumulated rounding, taken as 10 eps per term.
    """
    slack = 10.0 * np.finfo(float).eps * P.size
    beyond = max(0.0, 1.0 - math.fsum(P.tolist()) - slack)
    suffix = np.cumsum(P[::-1])[::-1]
    out = np.empty_like(P)
    out[:-1] = suffix[1:]
    out[-1] = 0.0
    return out + beyond


def _certified(p: SqueezeParams, tail_tol: float, method: str):
    cap = int(100 * (p.mean + 1.0))
    n_stop = min(_initial_cutoff(p), cap)
    while True:
        c = _ladder(p, n_stop, method)
        P = c * c
        tails = _tails(P)
        quarter = P[(3 * n_stop) // 4:]
        # the last quarter must be negligible so rounding in the global sum
        # cannot hide unresolved mass beyond n_stop
        if tails[-1] < tail_tol and math.fsum(quarter.tolist()) < 1e-3 * tail_tol:
            break
        if n_stop >= cap:
            raise TruncationError(
                f"tail mass {tails[-1]:.3e} not below {tail_tol:.1e} at the hard cap "
                f"n_max={cap} for (n_c={p.n_c}, n_s={p.n_s})"
            )
        n_stop = min(2 * n_stop, cap)
    n_max = int(np.argmax(tails < tail_tol))
    return c[: n_max + 1], float(tails[n_max])


def choose_cutoff(params: SqueezeParams, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest ``n_max`` whose discarded tail is below ``tail_tol``."""
    c, _ = _certified(params, _check_tail_tol(tail_tol), "auto")
    return c.size - 1


def amplitudes(params: SqueezeParams, tail_tol: float = DEFAULT_TAIL_TOL,
               method: str = "auto") -> FockAmplitudes:
    """Number-basis amplitudes of ``D(alpha) S(r)|0>``, truncated at the cutoff.

    ``method="linear"`` runs the recurrence directly and raises
    :class:`AmplitudeUnderflowError` if ``c_0`` is not representable;
    ``"log"`` carries a separate log-scale; ``"auto"`` switches to the
    log-scaled recurrence only when needed.
    """
    tail_tol = _check_tail_tol(tail_tol)
    c, tail = _certified(params, tail_tol, method)
    c.setflags(write=False)
    return FockAmplitudes(params, c, tail, tail_tol)


def coherent_amplitudes(n_c: float, n_max: int) -> np.ndarray:
    """Poisson ladder ``exp(-n_c/2) alpha^n / sqrt(n!)`` evaluated in log space."""
    n = np.arange(n_max + 1)
    if n_c == 0:
        return (n == 0).astype(float)
    return np.exp(-0.5 * n_c + n * 0.5 * math.log(n_c) - 0.5 * gammaln(n + 1))


def photon_distribution(amps: FockAmplitudes) -> np.ndarray:
    return amps.c * amps.c


def photon_variance(n_c, n_s):
    """Closed-form photon-number variance for real parameters (vectorized)."""
    n_c = np.asarray(n_c, dtype=float)
    n_s = np.asarray(n_s, dtype=float)
    v = 2 * n_s * (1 + n_s) + n_c * (1 + 2 * n_s - 2 * np.sqrt(n_s * (1 + n_s)))
    return v if v.ndim else float(v)


def mandel_q(n_c, n_s):
    """``variance / mean - 1``; zero for the vacuum (vectorized)."""
    n_c = np.asarray(n_c, dtype=float)
    n_s = np.asarray(n_s, dtype=float)
    mean = n_c + n_s
    var = photon_variance(n_c, n_s)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(mean > 0, var / np.where(mean > 0, mean, 1.0) - 1.0, 0.0)
    return q if q.ndim else float(q)


def moments(params: SqueezeParams) -> FieldMoments:
    """Mean, variance and Mandel Q from the closed forms."""
    return FieldMoments(
        mean=params.n_c + params.n_s,
        variance=photon_variance(params.n_c, params.n_s),
        mandel_q=mandel_q(params.n_c, params.n_s),
    )


def distribution_moments(P) -> FieldMoments:
    """Moments computed by summing over a photon-number distribution."""
    P = np.asarray(P, dtype=float)
    n = np.arange(P.size, dtype=float)
    total = math.fsum(P.tolist())
    mean = math.fsum((n * P).tolist()) / total
    second = math.fsum((n * n * P).tolist()) / total
    var = max(second - mean * mean, 0.0)
    q = var / mean - 1.0 if mean > 0 else 0.0
    return FieldMoments(mean, var, q)


def _log_abs_hermite(n_max: int, x: float) -> np.ndarray:
    """log|H_n(x)| for n = 0..n_max by the physicists' recurrence, rescaled."""
    out = np.full(n_max + 1, -math.inf)
    scale = 0.0
    prev, cur = 0.0, 1.0
    out[0] = 0.0
    for n in range(1, n_max + 1):
        prev, cur = cur, 2.0 * x * cur - 2.0 * (n - 1) * prev
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            scale += _LOG_RESCALE
        if cur != 0.0:
            out[n] = math.log(abs(cur)) + scale
    return out


def log_distribution_direct(params: SqueezeParams, n_max: int) -> np.ndarray:
    """``log P(n)`` straight from the Hermite-polynomial closed form.

    Independent of the amplitude recurrence: factorials via ``gammaln`` and
    ``H_n`` via its own rescaled recurrence at ``x = beta / sqrt(2 mu nu)``.
    """
    n = np.arange(n_max + 1, dtype=float)
    mu, nu, beta = params.mu, params.nu, params.beta
    if nu == 0.0:
        if beta == 0.0:
            return np.where(n == 0, 0.0, -math.inf)
        return n * math.log(beta * beta) - beta * beta - gammaln(n + 1)
    x = beta / math.sqrt(2.0 * mu * nu)
    log_h = _log_abs_hermite(n_max, x)
    return (
        -gammaln(n + 1)
        - math.log(mu)
        + n * math.log(nu / (2.0 * mu))
        + 2.0 * log_h
        - beta * beta * (1.0 - nu / mu)
    )
