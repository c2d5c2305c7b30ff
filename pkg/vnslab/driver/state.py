"""Run state of the coupled solver and its initialization from a RunConfig."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from vnslab.besov import besov_norm, dyadic_decompose, sobolev_norm
from vnslab.config import RunConfig
from vnslab.driver.initial import initial_velocity
from vnslab.errors import ConfigError
from vnslab.fluid import FluidState, with_derivatives
from vnslab.kinetic import (
    InitialProfile,
    MomentFields,
    ParticleEnsemble,
    deposit,
    profile_from_config,
    relative_kinetic_energy,
    sample_initial,
)
from vnslab.spectral import Grid, SpectralField, derive, grad_linf_norm, l2_norm, linf_norm, without_mean

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InitialReport:
    """Data norms at t = 0 and whether the amplitudes count as small."""
    energy: float
    higher_energy: float
    besov_m3_2: float
    h_half: float
    n_q: float
    mass: float
    mixed_norm: float
    r0: float
    smallness: float
    threshold: float

    @property
    def small(self) -> bool:
        return self.smallness <= self.threshold

    def as_dict(self) -> dict:
        return {
            "E0": self.energy,
            "E1": self.higher_energy,
            "besov_m3_2": self.besov_m3_2,
            "h_half": self.h_half,
            "n_q": self.n_q,
            "mass": self.mass,
            "mixed_norm": self.mixed_norm,
            "r0": self.r0,
            "smallness": self.smallness,
            "threshold": self.threshold,
            "small": self.small,
        }


@dataclass(frozen=True, eq=False)
class RunState:
    fluid: FluidState
    ensemble: ParticleEnsemble
    moments: MomentFields
    config: RunConfig
    initial: InitialReport
    u0: SpectralField
    rho0: SpectralField
    momentum_integral: SpectralField
    lipschitz_budget: float = 0.0
    u_linf_integral: float = 0.0
    u_linf_memory: float = 0.0
    grad_linf: float = 0.0
    u_linf: float = 0.0
    dissipation: float = 0.0
    dissipation_integral: float = 0.0
    step_index: int = 0
    history: tuple = field(default=())

    @property
    def grid(self) -> Grid:
        return self.fluid.grid

    @property
    def t(self) -> float:
        return self.fluid.t

    @property
    def has_particles(self) -> bool:
        return self.ensemble.count > 0

    @property
    def profile(self) -> InitialProfile | None:
        return self.ensemble.profile


def grid_from_config(cfg: RunConfig) -> Grid:
    return Grid(cfg.dimension, cfg.points, cfg.box)


def _check_profile(profile: InitialProfile, grid: Grid) -> None:
    if 3 * profile.width > grid.box / 2:
        raise ConfigError(
            f"particle_width={profile.width} is too wide for box {grid.box:.6g}; need 3*width <= L/2"
        )
    if profile.width < grid.spacing:
        raise ConfigError(f"particle_width={profile.width} is below the grid spacing {grid.spacing:.6g}")


def dissipation_rate(u: SpectralField, ens: ParticleEnsemble) -> float:
    """D0 = |grad u|^2 + sum w |V - u(X)|^2."""
    return l2_norm(derive(u, "grad")) ** 2 + relative_kinetic_energy(ens, u)


def initialize(cfg: RunConfig, u0: SpectralField | None = None) -> RunState:
    """Sample f0, build u0 (or take the given one) and report the data norms."""
    grid = grid_from_config(cfg)
    if cfg.particles > 0:
        profile = profile_from_config(cfg)
        _check_profile(profile, grid)
        ens = sample_initial(profile, cfg.particles, cfg.seed, cfg.sampling)
    else:
        profile = None
        ens = ParticleEnsemble.empty(cfg.dimension, cfg.box)
    if u0 is None:
        u0 = initial_velocity(cfg, grid)
    elif u0.grid != grid:
        raise ConfigError("supplied initial velocity lives on a different grid")
    moments = deposit(ens, grid, u0)
    fluid = with_derivatives(FluidState(u=u0), moments, cfg.cutoff)

    kinetic = 2 * ens.kinetic_energy()
    energy = 0.5 * l2_norm(u0) ** 2 + 0.5 * kinetic
    dissipation = dissipation_rate(u0, ens)
    h1_sq = l2_norm(u0) ** 2 + sobolev_norm(u0, 1) ** 2
    initial = InitialReport(
        energy=energy,
        higher_energy=dissipation,
        besov_m3_2=besov_norm(dyadic_decompose(without_mean(u0)), -1.5, math.inf),
        h_half=sobolev_norm(u0, 0.5),
        n_q=profile.n_q(cfg.moment_q) if profile else 0.0,
        mass=ens.mass,
        mixed_norm=profile.mixed_norm if profile else 0.0,
        r0=profile.r0 if profile else 1.0,
        smallness=h1_sq + kinetic,
        threshold=cfg.smallness_threshold,
    )
    log.info(
        "Initialized d=%d N=%d L=%.6g with %d particles: E0=%.6g, M0=%.6g, small=%s",
        grid.dimension, grid.points, grid.box, ens.count, energy, ens.mass, initial.small,
    )
    return RunState(
        fluid=fluid,
        ensemble=ens,
        moments=moments,
        config=cfg,
        initial=initial,
        u0=u0,
        rho0=moments.rho,
        momentum_integral=SpectralField.zeros(grid, grid.dimension),
        grad_linf=grad_linf_norm(u0),
        u_linf=linf_norm(u0),
        dissipation=dissipation,
    )
