"""
Power-law decay fits and the Lyapunov envelope.

For dL/dt + H <= 0 and L <= C H^theta N^(1-theta) with N bounded, L decays at
least like the solution of dL/dt = -c0 L^(1/theta), c0 = C^(-1/theta) N^(1-1/theta):

    L(t) = L0 (1 + (1-theta)/theta * c0 * L0^((1-theta)/theta) * t)^(-theta/(1-theta))
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from vnslab.errors import DataError, FitError, UsageError

MIN_FIT_SAMPLES = 10
N_BOUND_TOLERANCE = 0.10


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    stderr: float
    prefactor: float
    samples: int
    window: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "stderr": self.stderr,
            "prefactor": self.prefactor,
            "samples": self.samples,
            "window": list(self.window),
        }


def decay_fit(times, values, window: tuple[float, float] | None = None) -> DecayFit:
    """Least-squares slope of log(value) against log(t) over t in the window (t > 0 only)."""
    times = np.asarray(times, float)
    values = np.asarray(values, float)
    if times.shape != values.shape:
        raise FitError("times and values differ in length")
    lo, hi = window if window is not None else (0.0, math.inf)
    selected = (times > 0) & (times >= lo) & (times <= hi)
    t, v = times[selected], values[selected]
    if t.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples in the window, got {t.size}")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise FitError("nonpositive or non-finite values in the fit window")
    result = stats.linregress(np.log(t), np.log(v))
    return DecayFit(
        exponent=float(result.slope),
        stderr=float(result.stderr),
        prefactor=float(math.exp(result.intercept)),
        samples=int(t.size),
        window=(float(t[0]), float(t[-1])),
    )


def _check_theta(theta: float) -> None:
    if not 0 < theta < 1:
        raise UsageError(f"theta must lie in (0, 1), got {theta}")


def envelope_rate(n0: float, theta: float, c: float) -> float:
    """c0 = C^(-1/theta) N0^(1-1/theta)."""
    return c ** (-1 / theta) * n0 ** (1 - 1 / theta)


def lyapunov_envelope(l0: float, n0: float, theta: float, c: float, t):
    _check_theta(theta)
    if not (l0 > 0 and n0 > 0 and c > 0):
        raise UsageError("envelope needs positive L0, N0 and C")
    t = np.asarray(t, float)
    ratio = (1 - theta) / theta
    c0 = envelope_rate(n0, theta, c)
    out = l0 * (1 + ratio * c0 * l0 ** ratio * t) ** (-theta / (1 - theta))
    return float(out) if out.ndim == 0 else out


def asymptotic_exponent(theta: float) -> float:
    _check_theta(theta)
    return -theta / (1 - theta)


@dataclass(frozen=True, eq=False)
class LyapunovVerdict:
    theta: float
    ratios: np.ndarray
    c_emp: float
    n_max: float
    envelope: np.ndarray
    holds: bool
    violations: int
    n_bound_exceeded: bool

    def as_dict(self) -> dict:
        return {
            "theta": self.theta,
            "c_emp": self.c_emp,
            "n_max": self.n_max,
            "holds": self.holds,
            "violations": self.violations,
            "n_bound_exceeded": self.n_bound_exceeded,
        }


def lyapunov_check(times, l_values, h_values, n_values, theta: float,
                   rtol: float = 1e-9) -> LyapunovVerdict:
    """
    Interpolation ratios L/(H^theta N^(1-theta)), their max C_emp, and whether L
    stays under the envelope built from (L0, max N, theta, C_emp).
    """
    _check_theta(theta)
    t = np.asarray(times, float)
    big_l = np.asarray(l_values, float)
    big_h = np.asarray(h_values, float)
    big_n = np.asarray(n_values, float)
    if not (t.shape == big_l.shape == big_h.shape == big_n.shape) or t.size == 0:
        raise DataError("L, H and N series must be nonempty and of equal length")
    if np.any(big_l <= 0) or np.any(big_h <= 0) or np.any(big_n <= 0):
        raise DataError("L, H and N must be positive at every sample")
    ratios = big_l / (big_h ** theta * big_n ** (1 - theta))
    c_emp = float(np.max(ratios))
    n_max = float(np.max(big_n))
    envelope = lyapunov_envelope(float(big_l[0]), n_max, theta, c_emp, t - t[0])
    envelope = np.atleast_1d(envelope)
    violations = int(np.sum(big_l > envelope * (1 + rtol)))
    return LyapunovVerdict(
        theta=theta,
        ratios=ratios,
        c_emp=c_emp,
        n_max=n_max,
        envelope=envelope,
        holds=violations == 0,
        violations=violations,
        n_bound_exceeded=bool(n_max > (1 + N_BOUND_TOLERANCE) * big_n[0]),
    )
