"""Initial velocity families, normalized to a prescribed amplitude in a chosen norm."""
from __future__ import annotations

import logging
import math

import numpy as np

from vnslab.besov import sobolev_norm
from vnslab.errors import ConfigError
from vnslab.fluid import taylor_green, truncate
from vnslab.spectral import (
    Grid,
    SpectralField,
    ball_truncate,
    gaussian_blob,
    l2_norm,
    linf_norm,
    lp_norm,
    to_spectral,
)

log = logging.getLogger(__name__)


def velocity_norm(u: SpectralField, name: str) -> float:
    if name == "l2":
        return l2_norm(u)
    if name == "l1":
        return lp_norm(u, 1)
    if name == "h_half":
        return sobolev_norm(u, 0.5)
    if name == "h1":
        return math.sqrt(l2_norm(u) ** 2 + sobolev_norm(u, 1) ** 2)
    if name == "linf":
        return linf_norm(u)
    raise ConfigError(f"unknown velocity norm {name!r}")


def random_solenoidal(grid: Grid, modes: float, seed: int, cutoff: float | None = None) -> SpectralField:
    """Seeded band-limited solenoidal field, |k| <= modes * 2pi/L, unit L2 norm."""
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((grid.dimension,) + grid.shape)
    field = truncate(ball_truncate(to_spectral(samples, grid), modes * grid.fundamental), cutoff)
    size = l2_norm(field)
    if size == 0.0:
        raise ConfigError(f"velocity_modes={modes} keeps no nonzero mode on this grid")
    return field * (1.0 / size)


def _shape(cfg, grid: Grid) -> SpectralField:
    if cfg.velocity == "zero":
        return SpectralField.zeros(grid, grid.dimension, solenoidal=True)
    if cfg.velocity == "taylor_green":
        return truncate(taylor_green(grid), cfg.cutoff)
    if cfg.velocity == "blob":
        momentum = gaussian_blob(grid, cfg.velocity_width, components=grid.dimension,
                                 direction=np.eye(grid.dimension)[1])
        return truncate(momentum, cfg.cutoff)
    if cfg.velocity == "random":
        return random_solenoidal(grid, cfg.velocity_modes, cfg.seed, cfg.cutoff)
    raise ConfigError(f"unknown velocity family {cfg.velocity!r}")


def initial_velocity(cfg, grid: Grid) -> SpectralField:
    """u0 of the configured family with |u0| = velocity_amplitude in the velocity_norm norm."""
    shape = _shape(cfg, grid)
    if cfg.velocity == "zero" or cfg.velocity_amplitude == 0:
        return SpectralField.zeros(grid, grid.dimension, solenoidal=True)
    size = velocity_norm(shape, cfg.velocity_norm)
    if size == 0.0:
        raise ConfigError(f"{cfg.velocity} velocity vanishes after truncation")
    u0 = shape * (cfg.velocity_amplitude / size)
    log.info("Initial %s velocity, |u0|_%s = %.6g", cfg.velocity, cfg.velocity_norm, cfg.velocity_amplitude)
    return u0
