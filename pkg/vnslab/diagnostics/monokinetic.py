"""
Distance of f to the monokinetic profile rho (x) delta_{v = u(x)}, and the
asymptotic density rho_inf = rho_0 - div int_0^T j.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from vnslab.besov import besov_norm, dyadic_decompose
from vnslab.diagnostics.decay import decay_fit
from vnslab.errors import FitError, InternalError, UsageError
from vnslab.kinetic import MomentFields, ParticleEnsemble, cic_stencil, deposit, minimum_image
from vnslab.spectral import SpectralField, derive, physical_components, without_mean

log = logging.getLogger(__name__)

EXACT_W1_LIMIT = 64


@dataclass(frozen=True)
class MonokineticMetrics:
    w1_bound: float
    cs_bound: float
    j_minus_rho_u_l1: float

    def as_dict(self) -> dict:
        return {
            "w1_bound": self.w1_bound,
            "cs_bound": self.cs_bound,
            "j_minus_rho_u_l1": self.j_minus_rho_u_l1,
        }


def _slip(ens: ParticleEnsemble, u: SpectralField) -> np.ndarray:
    return ens.velocities - cic_stencil(ens.positions, u.grid).gather(physical_components(u))


def monokinetic_metrics(ens: ParticleEnsemble, u: SpectralField,
                        moments: MomentFields | None = None) -> MonokineticMetrics:
    """
    w1_bound = sum w |V - u(X)| (cost of the diagonal coupling), cs_bound =
    sqrt(M0 sum w |V - u(X)|^2), and |j - rho u|_{L1} by node quadrature.
    """
    if ens.count == 0:
        return MonokineticMetrics(0.0, 0.0, 0.0)
    slip = np.sqrt(np.sum(_slip(ens, u) ** 2, axis=1))
    w1 = float(np.sum(ens.weights * slip))
    cs = math.sqrt(ens.mass * float(np.sum(ens.weights * slip ** 2)))
    moments = deposit(ens, u.grid, u) if moments is None else moments
    gap = moments.j_nodes - moments.rho_nodes[np.newaxis] * physical_components(u)
    l1 = float(np.sum(np.sqrt(np.sum(gap ** 2, axis=0))) * u.grid.cell_volume)
    return MonokineticMetrics(w1, cs, l1)


def exact_w1(ens: ParticleEnsemble, u: SpectralField) -> float:
    """
    W1 between sum w_i delta_(X_i, V_i) and sum w_k delta_(X_k, u(X_k)) by linear
    programming, periodic minimum-image distance in x.
    """
    n = ens.count
    if n == 0:
        return 0.0
    if n > EXACT_W1_LIMIT:
        raise UsageError(f"exact W1 is limited to {EXACT_W1_LIMIT} particles, got {n}")
    targets = cic_stencil(ens.positions, u.grid).gather(physical_components(u))
    dx = minimum_image(ens.positions[:, np.newaxis, :] - ens.positions[np.newaxis, :, :], ens.box)
    dv = ens.velocities[:, np.newaxis, :] - targets[np.newaxis, :, :]
    cost = np.sqrt(np.sum(dx ** 2, axis=2) + np.sum(dv ** 2, axis=2))
    rows = np.kron(np.eye(n), np.ones((1, n)))
    cols = np.kron(np.ones((1, n)), np.eye(n))
    a_eq = np.vstack([rows, cols])[:-1]
    b_eq = np.concatenate([ens.weights, ens.weights])[:-1]
    result = optimize.linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not result.success:
        raise InternalError(f"transport LP failed: {result.message}")
    return float(result.fun)


@dataclass(frozen=True, eq=False)
class AsymptoticDensity:
    rho_infty: SpectralField
    residual: float
    mass: float
    tail: float
    conclusive: bool

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "mass": self.mass,
            "tail": self.tail,
            "conclusive": self.conclusive,
        }


def _tail_estimate(times, j_l1) -> float:
    """int_T^inf |j|_{L1} from a power-law fit over the second half of the series."""
    times = np.asarray(times, float)
    j_l1 = np.asarray(j_l1, float)
    if times.size == 0:
        return math.inf
    if np.all(j_l1 == 0):
        return 0.0
    half = times[times.size // 2]
    fit = decay_fit(times, j_l1, (half, times[-1]))
    if fit.exponent >= -1:
        return math.inf
    end = times[-1]
    return -fit.prefactor * end ** (fit.exponent + 1) / (fit.exponent + 1)


def asymptotic_density(rho0: SpectralField, rho_end: SpectralField, momentum_integral: SpectralField,
                       times=(), j_l1=(), tolerance: float = 1e-3) -> AsymptoticDensity:
    """
    rho_inf = rho0 - div int_0^T j, and |rho(T) - rho_inf| in the B^{-1}_{2,inf}
    proxy. Inconclusive unless the fitted tail int_T^inf |j|_{L1} is below tolerance.
    """
    rho_infty = rho0 - derive(momentum_integral, "div")
    residual = besov_norm(dyadic_decompose(without_mean(rho_end - rho_infty)), -1, math.inf)
    try:
        tail = _tail_estimate(times, j_l1)
    except FitError as e:
        log.info("Asymptotic density tail not estimated: %s", e)
        tail = math.inf
    mass = float(rho_infty.mean[0] * rho_infty.grid.measure)
    return AsymptoticDensity(rho_infty, residual, mass, tail, tail <= tolerance)
