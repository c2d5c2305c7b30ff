"""
Analytic initial distributions f0(x, v) = mass * g(x) * h(v).

g is a periodized-by-minimum-image Gaussian of width `width` around `center`.
h is one of: Maxwellian (drift along the first axis), compact bump
c (1 - |v|^2/R^2)^2 on |v| < R, or two symmetric Maxwellian beams at +-b e_1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from vnslab.errors import ConfigError, UsageError

PROFILE_FAMILIES = ("maxwellian", "bump", "two_beam")


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / special.gamma(d / 2 + 1)


@lru_cache(maxsize=64)
def moment_constant(q: float, d: int) -> float:
    """C_q = integral over R^d of <v>^{-q} dv, by radial quadrature. Needs q > d."""
    if q <= d:
        raise UsageError(f"C_q diverges for q <= d (q={q}, d={d})")
    sphere = d * ball_volume(d)
    value, _ = integrate.quad(lambda r: r ** (d - 1) * (1 + r * r) ** (-q / 2), 0, np.inf)
    return sphere * value


def minimum_image(dx: np.ndarray, box: float) -> np.ndarray:
    return dx - box * np.round(dx / box)


@dataclass(frozen=True)
class InitialProfile:
    family: str
    dimension: int
    box: float
    mass: float = 1.0
    width: float = 1.0
    thermal_speed: float = 1.0
    drift_speed: float = 0.0
    bump_radius: float = 1.0
    center: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        if self.family not in PROFILE_FAMILIES:
            raise ConfigError(f"unknown profile family {self.family!r}; expected one of {PROFILE_FAMILIES}")
        for name in ("mass", "width", "thermal_speed", "bump_radius", "box"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"profile {name} must be positive")
        if self.center is None:
            object.__setattr__(self, "center", (self.box / 2,) * self.dimension)

    # ----------------------------------------------------------------------
    # Densities
    # ----------------------------------------------------------------------

    @property
    def spatial_peak(self) -> float:
        """max_x g(x) for the unit-mass Gaussian."""
        return (2 * math.pi * self.width ** 2) ** (-self.dimension / 2)

    def spatial_density(self, x: np.ndarray) -> np.ndarray:
        dx = minimum_image(np.asarray(x) - np.asarray(self.center), self.box)
        return self.spatial_peak * np.exp(-0.5 * np.sum(dx * dx, axis=-1) / self.width ** 2)

    @property
    def _bump_normalization(self) -> float:
        d = self.dimension
        return (d + 2) * (d + 4) / (8 * ball_volume(d) * self.bump_radius ** d)

    def _maxwellian(self, v: np.ndarray, mean: np.ndarray) -> np.ndarray:
        s = self.thermal_speed
        dv = v - mean
        return (2 * math.pi * s * s) ** (-self.dimension / 2) * np.exp(-0.5 * np.sum(dv * dv, axis=-1) / (s * s))

    def velocity_density(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, float)
        axis = np.eye(self.dimension)[0]
        if self.family == "maxwellian":
            return self._maxwellian(v, self.drift_speed * axis)
        if self.family == "two_beam":
            return 0.5 * (self._maxwellian(v, self.drift_speed * axis)
                          + self._maxwellian(v, -self.drift_speed * axis))
        radial = 1 - np.sum(v * v, axis=-1) / self.bump_radius ** 2
        return self._bump_normalization * np.where(radial > 0, radial, 0.0) ** 2

    def density(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.mass * self.spatial_density(x) * self.velocity_density(v)

    # ----------------------------------------------------------------------
    # Closed-form moments and norms
    # ----------------------------------------------------------------------

    @property
    def mean_velocity(self) -> np.ndarray:
        if self.family == "maxwellian":
            return self.drift_speed * np.eye(self.dimension)[0]
        return np.zeros(self.dimension)

    @property
    def second_moment(self) -> float:
        """integral |v|^2 h(v) dv."""
        d = self.dimension
        if self.family == "bump":
            return self.bump_radius ** 2 * d / (d + 6)
        return d * self.thermal_speed ** 2 + self.drift_speed ** 2

    def relative_second_moment(self, u: np.ndarray | None = None) -> float:
        """integral |v - u|^2 h(v) dv for a constant u."""
        u = np.zeros(self.dimension) if u is None else np.asarray(u, float)
        mean = self.mean_velocity
        return self.second_moment - 2 * float(mean @ u) + float(u @ u)

    @property
    def mixed_norm(self) -> float:
        """||f0||_{L1_v Linf_x}."""
        return self.mass * self.spatial_peak

    @property
    def weighted_mixed_norm(self) -> float:
        """||<v>^2 f0||_{L1_v Linf_x}."""
        return self.mixed_norm * (1 + self.second_moment)

    @property
    def energy_mixed_norm(self) -> float:
        """|| |v|^2 f0 ||_{L1_v Linf_x}."""
        return self.mixed_norm * self.second_moment

    @property
    def r0(self) -> float:
        return max(1.0, 2 * self.mixed_norm)

    def velocity_span(self) -> float:
        if self.family == "bump":
            return self.bump_radius
        return self.drift_speed + 12 * self.thermal_speed

    def n_q(self, q: float) -> float:
        """N_q(f0) = sup <v>^q f0, maximized along the first velocity axis."""
        axis = np.eye(self.dimension)[0]

        def weighted(s):
            s = np.atleast_1d(np.asarray(s, float))
            return (1 + s * s) ** (q / 2) * self.velocity_density(s[:, np.newaxis] * axis)

        span = self.velocity_span()
        s = np.linspace(-span, span, 4001)
        values = weighted(s)
        best = int(np.argmax(values))
        step = s[1] - s[0]
        refined = optimize.minimize_scalar(
            lambda x: -weighted(x)[0],
            bounds=(s[best] - step, s[best] + step),
            method="bounded",
            options={"xatol": 1e-12},
        )
        peak = max(float(values[best]), float(-refined.fun))
        return self.mass * self.spatial_peak * peak


def profile_from_config(cfg) -> InitialProfile:
    return InitialProfile(
        family=cfg.profile,
        dimension=cfg.dimension,
        box=cfg.box,
        mass=cfg.particle_mass,
        width=cfg.particle_width,
        thermal_speed=cfg.thermal_speed,
        drift_speed=cfg.drift_speed,
        bump_radius=cfg.bump_radius,
    )
