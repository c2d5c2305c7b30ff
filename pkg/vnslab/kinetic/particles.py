"""
Weighted particles for f and the exact-drag characteristic integrator.

Characteristics: X' = V, V' = u(X) - V. With u frozen at a midpoint position
X* over a step the system integrates in closed form:

    V+ = e^{-dt} V + (1 - e^{-dt}) u(X*)
    X+ = X + (1 - e^{-dt}) V + (dt - 1 + e^{-dt}) u(X*)
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from vnslab.errors import ConfigError, InternalError, UsageError
from vnslab.kinetic.kernel import cic_stencil
from vnslab.kinetic.profiles import InitialProfile, minimum_image
from vnslab.spectral import SpectralField, physical_components

log = logging.getLogger(__name__)

MIN_PARTICLES = 1000
SAMPLING_METHODS = ("quasi", "random", "lattice")


@dataclass(frozen=True, eq=False)
class ParticleEnsemble:
    positions: np.ndarray
    velocities: np.ndarray
    weights: np.ndarray
    initial_positions: np.ndarray
    initial_velocities: np.ndarray
    box: float
    profile: InitialProfile | None = None

    @classmethod
    def from_arrays(cls, positions, velocities, weights, box: float,
                    profile: InitialProfile | None = None) -> ParticleEnsemble:
        positions = np.mod(np.asarray(positions, float), box)
        velocities = np.asarray(velocities, float)
        weights = np.asarray(weights, float)
        if positions.shape != velocities.shape or positions.shape[0] != weights.shape[0]:
            raise UsageError("positions, velocities and weights disagree on particle count")
        if np.any(weights <= 0):
            raise UsageError("particle weights must be positive")
        return cls(positions, velocities, weights, positions.copy(), velocities.copy(), box, profile)

    @classmethod
    def empty(cls, dimension: int, box: float) -> ParticleEnsemble:
        zero = np.zeros((0, dimension))
        return cls(zero, zero.copy(), np.zeros(0), zero.copy(), zero.copy(), box, None)

    @property
    def count(self) -> int:
        return self.weights.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def kinetic_energy(self) -> float:
        """1/2 sum w |V|^2."""
        return 0.5 * float(np.sum(self.weights * np.sum(self.velocities ** 2, axis=1)))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _velocity_from_uniform(profile: InitialProfile, uniform: np.ndarray) -> np.ndarray:
    """Map uniforms in (0,1)^d onto velocities distributed like h(v)."""
    d = profile.dimension
    axis = np.eye(d)[0]
    if profile.family == "maxwellian":
        return profile.drift_speed * axis + profile.thermal_speed * ndtri(uniform)
    if profile.family == "two_beam":
        first = uniform[:, 0]
        sign = np.where(first < 0.5, -1.0, 1.0)
        remapped = uniform.copy()
        remapped[:, 0] = np.where(first < 0.5, 2 * first, 2 * first - 1)
        remapped = np.clip(remapped, 1e-12, 1 - 1e-12)
        return sign[:, np.newaxis] * profile.drift_speed * axis + profile.thermal_speed * ndtri(remapped)
    # bump: invert the radial CDF, r^{d-1}(1 - r^2/R^2)^2 on [0, R]
    radius = profile.bump_radius
    r = np.linspace(0.0, radius, 4097)
    pdf = r ** (d - 1) * (1 - (r / radius) ** 2) ** 2
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(r))])
    cdf /= cdf[-1]
    rad = np.interp(uniform[:, 0], cdf, r)
    if d == 2:
        angle = 2 * math.pi * uniform[:, 1]
        direction = np.stack([np.cos(angle), np.sin(angle)], axis=1)
    else:
        cos_t = 1 - 2 * uniform[:, 1]
        sin_t = np.sqrt(np.clip(1 - cos_t ** 2, 0.0, None))
        phi = 2 * math.pi * uniform[:, 2]
        direction = np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=1)
    return rad[:, np.newaxis] * direction


def _sample_uniform(profile: InitialProfile, uniform: np.ndarray):
    d = profile.dimension
    uniform = np.clip(uniform, 1e-12, 1 - 1e-12)
    positions = np.asarray(profile.center) + profile.width * ndtri(uniform[:, :d])
    velocities = _velocity_from_uniform(profile, uniform[:, d:])
    weights = np.full(uniform.shape[0], profile.mass / uniform.shape[0])
    return positions, velocities, weights


def _sample_lattice(profile: InitialProfile, n_particles: int):
    """Tensor midpoint quadrature of f0 on a truncated phase-space box."""
    d = profile.dimension
    side = max(2, round(n_particles ** (1 / (2 * d))))
    x_half = min(5 * profile.width, profile.box / 2)
    axes = []
    for axis in range(d):
        lo = profile.center[axis] - x_half
        axes.append(lo + (np.arange(side) + 0.5) * (2 * x_half / side))
    mean = profile.mean_velocity
    for axis in range(d):
        if profile.family == "bump":
            lo, hi = -profile.bump_radius, profile.bump_radius
        elif profile.family == "two_beam" and axis == 0:
            lo = -profile.drift_speed - 6 * profile.thermal_speed
            hi = -lo
        else:
            lo = mean[axis] - 6 * profile.thermal_speed
            hi = mean[axis] + 6 * profile.thermal_speed
        axes.append(lo + (np.arange(side) + 0.5) * ((hi - lo) / side))
    cell = np.prod([a[1] - a[0] for a in axes])
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2 * d)
    positions, velocities = mesh[:, :d], mesh[:, d:]
    weights = profile.density(positions, velocities) * cell
    keep = weights > 1e-14 * weights.max()
    positions, velocities, weights = positions[keep], velocities[keep], weights[keep]
    weights *= profile.mass / weights.sum()
    return positions, velocities, weights


def sample_initial(profile: InitialProfile, n_particles: int, seed: int = 0,
                   method: str = "quasi") -> ParticleEnsemble:
    """
    Represent f0 by weighted particles.

    quasi:   scrambled Sobol points mapped through the inverse CDFs, equal weights,
             count rounded up to a power of two
    random:  seeded pseudo-random draws, equal weights
    lattice: tensor midpoint quadrature with weights f0 dx dv
    """
    if n_particles < MIN_PARTICLES:
        raise ConfigError(f"need at least {MIN_PARTICLES} particles, got {n_particles}")
    d = profile.dimension
    if method == "quasi":
        sampler = qmc.Sobol(2 * d, scramble=True, seed=seed)
        uniform = sampler.random_base2(math.ceil(math.log2(n_particles)))
        positions, velocities, weights = _sample_uniform(profile, uniform)
    elif method == "random":
        rng = np.random.default_rng(seed)
        positions, velocities, weights = _sample_uniform(profile, rng.random((n_particles, 2 * d)))
    elif method == "lattice":
        positions, velocities, weights = _sample_lattice(profile, n_particles)
    else:
        raise ConfigError(f"unknown sampling method {method!r}; expected one of {SAMPLING_METHODS}")
    log.info("Sampled %d %s particles (%s), mass %.6g", weights.size, profile.family, method, weights.sum())
    return ParticleEnsemble.from_arrays(positions, velocities, weights, profile.box, profile)


# ---------------------------------------------------------------------------
# Characteristics
# ---------------------------------------------------------------------------

def _field_sampler(u: SpectralField | None):
    if u is None:
        return None
    nodes = physical_components(u)
    return lambda x: cic_stencil(x, u.grid).gather(nodes)


def advance(ens: ParticleEnsemble, u: SpectralField | None, dt: float) -> ParticleEnsemble:
    """One exact-drag step with u frozen; u = None means u = 0."""
    if not dt > 0:
        raise UsageError(f"dt must be positive, got {dt}")
    if ens.count == 0:
        return ens
    sample = _field_sampler(u)
    x, v = ens.positions, ens.velocities
    a_half = -math.expm1(-dt / 2)
    a_full = -math.expm1(-dt)
    b_full = dt + math.expm1(-dt)
    if sample is None:
        u_star = 0.0
    else:
        b_half = dt / 2 + math.expm1(-dt / 2)
        x_star = np.mod(x + a_half * v + b_half * sample(x), ens.box)
        u_star = sample(x_star)
    velocities = math.exp(-dt) * v + a_full * u_star
    positions = np.mod(x + a_full * v + b_full * u_star, ens.box)
    return replace(ens, positions=positions, velocities=velocities)


def flow_jacobian_probe(ens: ParticleEnsemble, u_history: Sequence[SpectralField | None],
                        dt: float, tracked: int = 4, step: float | None = None) -> np.ndarray:
    """
    det D_{x,v} Z for the first `tracked` particles, by centered differences of
    perturbed seeds (2*2d + 1 seeds per particle) pushed through the same steps.
    """
    d = ens.dimension
    tracked = min(tracked, ens.count)
    if tracked == 0:
        return np.zeros(0)
    step = 1e-7 * ens.box if step is None else step
    seeds = np.concatenate([ens.initial_positions[:tracked], ens.initial_velocities[:tracked]], axis=1)
    offsets = np.concatenate([np.zeros((1, 2 * d)), step * np.eye(2 * d), -step * np.eye(2 * d)])
    phase = (seeds[:, np.newaxis, :] + offsets[np.newaxis]).reshape(-1, 2 * d)
    cloud = ParticleEnsemble.from_arrays(phase[:, :d], phase[:, d:], np.ones(phase.shape[0]), ens.box)
    for u in u_history:
        cloud = advance(cloud, u, dt)
    stencil = 1 + 4 * d
    x = cloud.positions.reshape(tracked, stencil, d)
    v = cloud.velocities.reshape(tracked, stencil, d)
    dx = minimum_image(x - x[:, :1], ens.box)
    if np.any(np.abs(dx) > ens.box / 4):
        raise InternalError("finite-difference stencil spread over a quarter of the box")
    z = np.concatenate([dx, v - v[:, :1]], axis=2)
    plus, minus = z[:, 1:1 + 2 * d], z[:, 1 + 2 * d:]
    jacobian = np.swapaxes((plus - minus) / (2 * step), 1, 2)
    return np.linalg.det(jacobian)
