"""
Spectral Navier-Stokes with a Brinkman source on the periodic box.

    u_t - Delta u = Pi( -w.grad u + B(u) + forcing )

Pi dealiases, removes the mean, applies the Leray projector and the optional
Fourier-ball cutoff, so every accepted step lives in the truncated solenoidal
space. The heat part is integrated exactly (IF-RK2) or by Crank-Nicolson
(IMEX-CN).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from vnslab.errors import ConfigError, UsageError
from vnslab.kinetic.deposition import MomentFields
from vnslab.spectral import (
    Grid,
    SpectralField,
    ball_truncate,
    convection,
    dealias,
    derive,
    l2_norm,
    leray_project,
    linf_norm,
    to_spectral,
    without_mean,
)

log = logging.getLogger(__name__)

CFL_LIMIT = 0.5
SCHEMES = ("if-rk2", "imex-cn")

BrinkmanForce = Callable[[SpectralField], SpectralField]


@dataclass(frozen=True, eq=False)
class FluidState:
    u: SpectralField
    t: float = 0.0
    u_t: SpectralField | None = None
    pressure: SpectralField | None = None
    cfl_number: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.u.grid


def truncate(z: SpectralField, cutoff: float | None = None) -> SpectralField:
    """Pi: dealias, drop the mean, Leray-project, then the ball cutoff if one is set."""
    projected = leray_project(without_mean(dealias(z)))
    return ball_truncate(projected, cutoff) if cutoff is not None else projected


def _source(u: SpectralField, advecting: SpectralField | None, brinkman: BrinkmanForce | None,
            forcing: SpectralField | None, nonlinear: bool) -> SpectralField:
    """Unprojected non-diffusive part: -w.grad u + B(u) + forcing."""
    total = SpectralField.zeros(u.grid, u.components)
    if nonlinear:
        total = total - convection(u, advecting)
    if brinkman is not None:
        total = total + brinkman(u)
    if forcing is not None:
        total = total + forcing
    return total


def _check_grid(state: FluidState, moments: MomentFields | None) -> None:
    if moments is not None and moments.grid != state.grid:
        raise ConfigError("moment fields and velocity live on different grids")


def _predict(u: SpectralField, n1: SpectralField, dt: float, scheme: str) -> SpectralField:
    k2 = u.grid.wavenumber_squared
    if scheme == "if-rk2":
        return u.with_coefficients(np.exp(-k2 * dt) * (u.coefficients + dt * n1.coefficients))
    half = 0.5 * dt * k2
    return u.with_coefficients(((1 - half) * u.coefficients + dt * n1.coefficients) / (1 + half))


def _check_step(dt: float, scheme: str) -> None:
    if not dt > 0:
        raise UsageError(f"dt must be positive, got {dt}")
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown time scheme {scheme!r}; expected one of {SCHEMES}")


def predictor(state: FluidState, dt: float, *, brinkman: BrinkmanForce | None = None,
              forcing: SpectralField | None = None, scheme: str = "if-rk2",
              cutoff: float | None = None, nonlinear: bool = True) -> SpectralField:
    """First stage of `step` with self-advection: the field the second stage is evaluated at."""
    _check_step(dt, scheme)
    n1 = truncate(_source(state.u, None, brinkman, forcing, nonlinear), cutoff)
    return _predict(state.u, n1, dt, scheme)


def step(state: FluidState, dt: float, *, brinkman: BrinkmanForce | None = None,
         forcing: SpectralField | tuple[SpectralField, SpectralField] | None = None,
         scheme: str = "if-rk2", cutoff: float | None = None, nonlinear: bool = True,
         advecting: tuple[SpectralField, SpectralField] | None = None) -> FluidState:
    """
    One step of length dt.

    brinkman is a closure u -> B(u) evaluated at every stage velocity.
    advecting = (w_start, w_end) replaces u as the transporting field in the
    convection term; the default is the self-advection u.grad u. A forcing pair
    (f_start, f_end) is applied stage by stage the same way.
    """
    _check_step(dt, scheme)
    grid = state.grid
    u = state.u
    w_start, w_end = advecting if advecting is not None else (None, None)
    f_start, f_end = forcing if isinstance(forcing, tuple) else (forcing, forcing)

    def term(v: SpectralField, w: SpectralField | None, f: SpectralField | None) -> SpectralField:
        return truncate(_source(v, w, brinkman, f, nonlinear), cutoff)

    k2 = grid.wavenumber_squared
    n1 = term(u, w_start, f_start)
    predicted = _predict(u, n1, dt, scheme)
    n2 = term(predicted, w_end, f_end)
    if scheme == "if-rk2":
        decay = np.exp(-k2 * dt)
        coefficients = decay * u.coefficients + 0.5 * dt * (decay * n1.coefficients + n2.coefficients)
    else:
        half = 0.5 * dt * k2
        coefficients = ((1 - half) * u.coefficients
                        + 0.5 * dt * (n1.coefficients + n2.coefficients)) / (1 + half)
    u_next = truncate(u.with_coefficients(coefficients), cutoff)

    cfl = linf_norm(u_next) * dt / grid.spacing
    if cfl > CFL_LIMIT:
        log.warning("CFL number %.3f exceeds %.2f at t=%.4g", cfl, CFL_LIMIT, state.t + dt)
    return FluidState(u=u_next, t=state.t + dt, cfl_number=cfl)


def _force_from_moments(moments: MomentFields | None, grid: Grid) -> SpectralField:
    if moments is None:
        return SpectralField.zeros(grid, grid.dimension)
    return moments.brinkman


def rhs(state: FluidState, moments: MomentFields | None, cutoff: float | None = None,
        nonlinear: bool = True) -> SpectralField:
    """u_t = Delta u + Pi(-u.grad u + brinkman), brinkman deposited against the current u."""
    _check_grid(state, moments)
    u = state.u
    force = _force_from_moments(moments, state.grid)
    source = _source(u, None, lambda v: force, None, nonlinear)
    return derive(u, "laplacian") + truncate(source, cutoff)


def _masked_source(state: FluidState, moments: MomentFields | None, cutoff: float | None,
                   nonlinear: bool) -> SpectralField:
    """The source rhs projects, dealiased and cut off but not yet Leray-projected."""
    force = _force_from_moments(moments, state.grid)
    source = without_mean(dealias(_source(state.u, None, lambda v: force, None, nonlinear)))
    return ball_truncate(source, cutoff) if cutoff is not None else source


def pressure_solve(state: FluidState, moments: MomentFields | None, cutoff: float | None = None,
                   nonlinear: bool = True) -> SpectralField:
    """grad P = (I - Leray) F with F = -u.grad u + brinkman: P_hat = -i k.F_hat / |k|^2."""
    _check_grid(state, moments)
    grid = state.grid
    source = _masked_source(state, moments, cutoff, nonlinear)
    k = grid.wavevector
    k2 = np.sum(k * k, axis=0)
    safe = np.where(k2 > 0, k2, 1.0)
    k_dot = np.sum(k * source.coefficients, axis=0)
    pressure = np.where(k2 > 0, -1j * k_dot / safe, 0.0)
    return SpectralField(grid, pressure[np.newaxis])


def with_derivatives(state: FluidState, moments: MomentFields | None, cutoff: float | None = None,
                     nonlinear: bool = True) -> FluidState:
    """Attach u_t and P computed from the current u and moments."""
    return replace(
        state,
        u_t=rhs(state, moments, cutoff, nonlinear),
        pressure=pressure_solve(state, moments, cutoff, nonlinear),
    )


def stokes_residual(state: FluidState, moments: MomentFields | None, cutoff: float | None = None,
                    nonlinear: bool = True) -> float:
    """|| -Delta u + grad P + u_t - F ||_L2 relative to the largest term."""
    current = state if state.u_t is not None and state.pressure is not None else \
        with_derivatives(state, moments, cutoff, nonlinear)
    source = _masked_source(current, moments, cutoff, nonlinear)
    laplacian = derive(current.u, "laplacian")
    grad_p = derive(current.pressure, "grad")
    defect = current.u_t - laplacian + grad_p - source
    scale = max(l2_norm(laplacian), l2_norm(grad_p), l2_norm(current.u_t), l2_norm(source),
                np.finfo(float).tiny)
    return l2_norm(defect) / scale


# ---------------------------------------------------------------------------
# Taylor-Green vortex
# ---------------------------------------------------------------------------

def taylor_green(grid: Grid, amplitude: float = 1.0, t: float = 0.0) -> SpectralField:
    """u = A e^{-2 kappa^2 t} (sin kx cos ky, -cos kx sin ky, 0), kappa = 2 pi / L; exact for NS."""
    kappa = grid.fundamental
    x, y = grid.coordinates[0], grid.coordinates[1]
    scale = amplitude * math.exp(-2 * kappa ** 2 * t)
    values = np.zeros((grid.dimension,) + grid.shape)
    values[0] = scale * np.sin(kappa * x) * np.cos(kappa * y)
    values[1] = -scale * np.cos(kappa * x) * np.sin(kappa * y)
    field = to_spectral(values, grid)
    return field.with_coefficients(field.coefficients, solenoidal=True)


def taylor_green_pressure(grid: Grid, amplitude: float = 1.0, t: float = 0.0) -> SpectralField:
    kappa = grid.fundamental
    x, y = grid.coordinates[0], grid.coordinates[1]
    scale = 0.25 * amplitude ** 2 * math.exp(-4 * kappa ** 2 * t)
    return to_spectral(scale * (np.cos(2 * kappa * x) + np.cos(2 * kappa * y)), grid)
