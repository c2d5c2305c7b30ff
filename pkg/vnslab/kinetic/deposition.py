"""
Moment deposition (rho, j, m2), the Brinkman force and the moment-bound monitor.

Deposition and field interpolation share one CIC stencil, so
    sum_nodes u . brinkman dV = sum_i w_i (V_i - u(X_i)) . u(X_i)
holds to round-off.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from vnslab.errors import UsageError
from vnslab.kinetic.kernel import CicStencil, cic_stencil
from vnslab.kinetic.particles import ParticleEnsemble
from vnslab.kinetic.profiles import moment_constant
from vnslab.spectral import Grid, SpectralField, physical_components, to_spectral

log = logging.getLogger(__name__)

MONITOR_SLACK = 1.05


@dataclass(frozen=True, eq=False)
class MomentFields:
    rho: SpectralField
    j: SpectralField
    m2: SpectralField
    brinkman: SpectralField
    rho_nodes: np.ndarray
    j_nodes: np.ndarray
    m2_nodes: np.ndarray
    brinkman_nodes: np.ndarray

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def mass(self) -> float:
        return float(np.sum(self.rho_nodes) * self.grid.cell_volume)

    @property
    def rho_linf(self) -> float:
        return float(np.max(self.rho_nodes))

    @property
    def j_linf(self) -> float:
        return float(np.max(np.sqrt(np.sum(self.j_nodes ** 2, axis=0))))

    @property
    def m2_linf(self) -> float:
        return float(np.max(self.m2_nodes))

    @classmethod
    def zeros(cls, grid: Grid) -> MomentFields:
        d = grid.dimension
        scalar = np.zeros(grid.shape)
        vector = np.zeros((d,) + grid.shape)
        return cls(
            rho=SpectralField.zeros(grid),
            j=SpectralField.zeros(grid, d),
            m2=SpectralField.zeros(grid),
            brinkman=SpectralField.zeros(grid, d),
            rho_nodes=scalar,
            j_nodes=vector,
            m2_nodes=scalar.copy(),
            brinkman_nodes=vector.copy(),
        )


def _sample_at_particles(stencil: CicStencil, u: SpectralField | None, dimension: int) -> np.ndarray:
    if u is None:
        return np.zeros((stencil.count, dimension))
    return stencil.gather(physical_components(u))


def deposit(ens: ParticleEnsemble, grid: Grid, u: SpectralField | None = None) -> MomentFields:
    """rho, j, m2 and brinkman = sum w_i (V_i - u(X_i)) on the grid nodes; u = None means u = 0."""
    if ens.dimension != grid.dimension:
        raise UsageError(f"ensemble is {ens.dimension}-d but grid is {grid.dimension}-d")
    if u is not None and u.grid != grid:
        raise UsageError("velocity field lives on a different grid")
    if ens.count == 0:
        return MomentFields.zeros(grid)
    stencil = cic_stencil(ens.positions, grid)
    w = ens.weights[:, np.newaxis]
    v = ens.velocities
    u_at = _sample_at_particles(stencil, u, grid.dimension)
    quantities = np.concatenate(
        [w, w * v, w * np.sum(v * v, axis=1, keepdims=True), w * (v - u_at)],
        axis=1,
    )
    nodes = stencil.scatter(quantities)
    d = grid.dimension
    rho_nodes, j_nodes = nodes[0], nodes[1:1 + d]
    m2_nodes, brinkman_nodes = nodes[1 + d], nodes[2 + d:]
    return MomentFields(
        rho=to_spectral(rho_nodes, grid),
        j=to_spectral(j_nodes, grid),
        m2=to_spectral(m2_nodes, grid),
        brinkman=to_spectral(brinkman_nodes, grid),
        rho_nodes=rho_nodes,
        j_nodes=j_nodes,
        m2_nodes=m2_nodes,
        brinkman_nodes=brinkman_nodes,
    )


def brinkman_force(ens: ParticleEnsemble, grid: Grid) -> Callable[[SpectralField], SpectralField]:
    """Closure u -> deposited sum w_i (V_i - u(X_i)), reusing one stencil for every stage."""
    if ens.count == 0:
        zero = SpectralField.zeros(grid, grid.dimension)
        return lambda u: zero
    stencil = cic_stencil(ens.positions, grid)
    momentum = stencil.scatter(ens.weights[:, np.newaxis] * ens.velocities)

    def force(u: SpectralField) -> SpectralField:
        drag = stencil.scatter(ens.weights[:, np.newaxis] * stencil.gather(physical_components(u)))
        return to_spectral(momentum - drag, grid)

    return force


def relative_kinetic_energy(ens: ParticleEnsemble, u: SpectralField | None) -> float:
    """sum w_i |V_i - u(X_i)|^2."""
    if ens.count == 0:
        return 0.0
    if u is None:
        slip = ens.velocities
    else:
        slip = ens.velocities - cic_stencil(ens.positions, u.grid).gather(physical_components(u))
    return float(np.sum(ens.weights * np.sum(slip * slip, axis=1)))


# ---------------------------------------------------------------------------
# Monitor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    status: str  # pass | fail | not-applicable
    measured: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.measured

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class MonitorReport:
    t: float
    lipschitz_budget: float
    delta: float
    q: float
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def failed(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def check(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "lipschitz_budget": self.lipschitz_budget,
            "delta": self.delta,
            "q": self.q,
            "checks": [c.as_dict() for c in self.checks],
        }


def _verdict(name: str, measured: float, bound: float, slack: float, applicable: bool = True) -> BoundCheck:
    if not applicable:
        return BoundCheck(name, "not-applicable", measured, bound)
    return BoundCheck(name, "pass" if measured <= slack * bound else "fail", measured, bound)


def moment_bound_monitor(moments: MomentFields, ens: ParticleEnsemble, lip_budget: float, t: float, *,
                         u_linf_integral: float = 0.0, u_linf_memory: float = 0.0,
                         delta: float = 0.1, q: float = 6.0,
                         slack: float = MONITOR_SLACK) -> MonitorReport:
    """
    Compare node maxima of rho, |j| and m2 with the a priori bounds from f0.

    u_linf_integral is int_0^t |u|_inf; u_linf_memory is int_0^t e^{s-t} |u|_inf ds.
    Bounds that need a small Lipschitz budget report not-applicable when
    lip_budget > delta. Monitors report; they never abort.
    """
    profile = ens.profile
    if profile is None:
        return MonitorReport(t, lip_budget, delta, q, [])
    d = profile.dimension
    small = lip_budget <= delta
    growth = math.exp(d * t)
    c_q = moment_constant(q, d)
    one_plus = 1.0 + u_linf_integral

    checks = [
        _verdict("density-factor-two", moments.rho_linf, 2 * profile.mixed_norm, slack, small),
        _verdict("density-nq", moments.rho_linf,
                 c_q * growth * one_plus ** q * profile.n_q(q), slack),
        _verdict("momentum-nq", moments.j_linf,
                 c_q * growth * one_plus ** (q + 1) * profile.n_q(q + 1), slack),
        _verdict("energy-density-nq", moments.m2_linf,
                 c_q * growth * one_plus ** (q + 2) * profile.n_q(q + 2), slack),
        _verdict("energy-density", moments.m2_linf,
                 4 * math.exp(-2 * t) * profile.energy_mixed_norm
                 + 4 * u_linf_memory ** 2 * profile.mixed_norm, slack, small),
    ]
    report = MonitorReport(t, lip_budget, delta, q, checks)
    for c in report.failed:
        log.warning("Moment bound %s failed at t=%.4g: %.6g > %.6g", c.name, t, c.measured, c.bound)
    return report
