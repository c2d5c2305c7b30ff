"""
Energy and dissipation functionals of the coupled system, one EnergyRecord per sample.

    E0 = 1/2 |u|^2 + 1/2 sum w |V|^2
    E1 = D0 = |grad u|^2 + sum w |V - u(X)|^2
    E2 = |u_t|^2 + sum w |V - u(X)|^2
    D1 = 1/2 D0 + (|grad^2 u|^2 + |grad^2 P|^2) / (24 R0)
    D2 = |grad u_t|^2 + |sqrt(rho) u_t|^2
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from vnslab.besov import besov_norm, dyadic_decompose, sobolev_norm
from vnslab.diagnostics.lipschitz import loglip_norm
from vnslab.diagnostics.monokinetic import monokinetic_metrics
from vnslab.errors import InternalError
from vnslab.fluid import FluidState
from vnslab.kinetic import MomentFields, ParticleEnsemble, relative_kinetic_energy
from vnslab.spectral import derive, l2_norm, physical_components, without_mean


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    E0: float
    E1: float
    E2: float
    D0: float
    D1: float
    D2: float
    int_D0: float
    lipschitz_budget: float
    besov_m3_2: float
    besov_m1_2: float
    besov_m_half_d: float
    h_half: float
    rho_linf: float
    j_linf: float
    m2_linf: float
    w1_bound: float
    cs_bound: float
    j_minus_rho_u_l1: float
    loglip: float
    weighted_energy: float
    weighted_dissipation: float
    energy_residual: float
    mass: float

    def as_dict(self) -> dict:
        return asdict(self)


ENERGY_FIELDS = tuple(f.name for f in fields(EnergyRecord))


def weighted_energy(t: float, e0: float, e1: float, e2: float, r0: float, c_f0: float) -> float:
    """2(2 + C f0)(t E1 + 2 E0) + 25 R0 E1 + t E2."""
    return 2 * (2 + c_f0) * (t * e1 + 2 * e0) + 25 * r0 * e1 + t * e2


def weighted_dissipation(t: float, d0: float, d1: float, d2: float, r0: float, c_f0: float) -> float:
    """2(1 + C f0) D0 + 2 t D1 + R0 D1 + t D2."""
    return 2 * (1 + c_f0) * d0 + 2 * t * d1 + r0 * d1 + t * d2


def energy_functionals(state: FluidState, moments: MomentFields, ens: ParticleEnsemble, *,
                       r0: float = 1.0, weight_constant: float = 1.0,
                       lipschitz_budget: float = 0.0, dissipation_integral: float = 0.0,
                       initial_energy: float | None = None, eta: float = 0.25,
                       besov: bool = True, loglip: bool = True) -> EnergyRecord:
    """
    Kinetic integrals are particle sums. u_t and P must already be attached to
    the state (fluid.with_derivatives). Disabled monitors leave NaN columns.
    """
    if state.u_t is None or state.pressure is None:
        raise InternalError("energy functionals need u_t and P cached on the fluid state")
    u, u_t, t = state.u, state.u_t, state.t
    grid = state.grid

    fluid_energy = l2_norm(u) ** 2
    grad_sq = l2_norm(derive(u, "grad")) ** 2
    kinetic = float(np.sum(ens.weights * np.sum(ens.velocities ** 2, axis=1))) if ens.count else 0.0
    slip = relative_kinetic_energy(ens, u)
    u_t_sq = l2_norm(u_t) ** 2

    e0 = 0.5 * fluid_energy + 0.5 * kinetic
    d0 = grad_sq + slip
    e1 = d0
    e2 = u_t_sq + slip
    second = l2_norm(derive(u, "hessian")) ** 2 + l2_norm(derive(state.pressure, "hessian")) ** 2
    d1 = 0.5 * d0 + second / (24 * r0)
    u_t_nodes = physical_components(u_t)
    weighted_u_t = float(np.sum(moments.rho_nodes * np.sum(u_t_nodes ** 2, axis=0)) * grid.cell_volume)
    d2 = l2_norm(derive(u_t, "grad")) ** 2 + weighted_u_t

    if besov:
        spectrum = dyadic_decompose(without_mean(u))
        b_m3_2 = besov_norm(spectrum, -1.5, math.inf)
        b_m1_2 = besov_norm(spectrum, -0.5, math.inf)
        b_half_d = besov_norm(spectrum, -grid.dimension / 2, math.inf)
        h_half = sobolev_norm(u, 0.5)
    else:
        b_m3_2 = b_m1_2 = b_half_d = h_half = math.nan

    mono = monokinetic_metrics(ens, u, moments)
    if initial_energy is None or initial_energy == 0:
        residual = 0.0
    else:
        residual = abs(e0 + dissipation_integral - initial_energy) / initial_energy

    return EnergyRecord(
        t=t,
        E0=e0,
        E1=e1,
        E2=e2,
        D0=d0,
        D1=d1,
        D2=d2,
        int_D0=dissipation_integral,
        lipschitz_budget=lipschitz_budget,
        besov_m3_2=b_m3_2,
        besov_m1_2=b_m1_2,
        besov_m_half_d=b_half_d,
        h_half=h_half,
        rho_linf=moments.rho_linf,
        j_linf=moments.j_linf,
        m2_linf=moments.m2_linf,
        w1_bound=mono.w1_bound,
        cs_bound=mono.cs_bound,
        j_minus_rho_u_l1=mono.j_minus_rho_u_l1,
        loglip=loglip_norm(u, eta) if loglip else math.nan,
        weighted_energy=weighted_energy(t, e0, e1, e2, r0, weight_constant),
        weighted_dissipation=weighted_dissipation(t, d0, d1, d2, r0, weight_constant),
        energy_residual=residual,
        mass=ens.mass,
    )
