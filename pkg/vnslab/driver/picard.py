"""
Picard iteration for the truncated coupled system on a short interval [0, T].

Given a velocity history w, particles are transported by w, the drag
sum w_i (V_i - w(X_i)) is deposited from those particles, and the linear problem

    u_t - Delta u = Pi(sum w_i (V_i - w(X_i)) - w . grad u)

is stepped with the same integrator as the coupled loop. Each step evaluates
the drag and the transporting field at w and at the predictor built from w, so
the fixed point of w -> u is the coupled trajectory step for step. Iterate
gaps are measured in |z|_E^2 = sup_t |z|^2 + int_0^T |grad z|^2.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from vnslab.besov import time_weights
from vnslab.config import RunConfig
from vnslab.driver.coupled import coupled_step
from vnslab.driver.state import RunState, initialize
from vnslab.errors import UsageError
from vnslab.fluid import FluidState, predictor, step
from vnslab.kinetic import advance, brinkman_force
from vnslab.spectral import SpectralField, derive, l2_norm

log = logging.getLogger(__name__)

MAX_ITERATIONS = 50
NOISE_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class PicardResult:
    horizon: float
    dt: float
    steps: int
    radius: float
    cutoff: float
    conditions: dict
    gaps: list[float]
    contraction_factor: float
    status: str
    fixed_point: SpectralField
    coupled_gap: float
    integrator_error: float

    @property
    def iterations(self) -> int:
        return len(self.gaps)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "T": self.horizon,
            "dt": self.dt,
            "steps": self.steps,
            "ball_radius": self.radius,
            "cutoff": self.cutoff,
            "conditions": self.conditions,
            "iterations": self.iterations,
            "gaps": self.gaps,
            "contraction_factor": self.contraction_factor,
            "coupled_gap": self.coupled_gap,
            "integrator_error": self.integrator_error,
        }


def energy_norm(history: list[SpectralField], dt: float) -> float:
    sup = max(l2_norm(z) ** 2 for z in history)
    gradients = np.array([l2_norm(derive(z, "grad")) ** 2 for z in history])
    return math.sqrt(sup + float(np.sum(time_weights(len(history), dt) * gradients)))


def step_conditions(state: RunState, cutoff: float) -> tuple[float, dict]:
    """
    Largest admissible T per condition, and the ball radius M.

    The density and energy conditions scale with |f0|_{L1_v Linf_x}; the same
    norm stands in for C_{f0} in the contraction condition.
    """
    cfg = state.config
    ens = state.ensemble
    radius = math.sqrt(2 * (1 + l2_norm(state.u0) ** 2 + 2 * ens.kinetic_energy()))
    c = cfg.picard_constant
    f0 = state.initial.mixed_norm if state.has_particles else 0.0
    bounds = {
        "lipschitz": (cfg.lipschitz_delta / (c * cutoff ** 1.5 * radius)) ** 2,
        "density": math.log(2) / f0 if f0 > 0 else math.inf,
        "energy": 1 / (f0 * radius ** 2) if f0 > 0 else math.inf,
        "contraction": 1 / (2 * c * (f0 + cutoff ** 3 * radius)),
    }
    return radius, bounds


def _apply_map(state: RunState, w: list[SpectralField], dt: float) -> list[SpectralField]:
    cfg = state.config
    grid = state.grid
    ens = state.ensemble
    fluid = FluidState(u=state.u0)
    history = [state.u0]
    for k in range(len(w) - 1):
        if state.has_particles:
            ens_half = advance(ens, w[k], dt / 2)
            drag = brinkman_force(ens_half, grid)
        else:
            ens_half, drag = ens, None
        guess = predictor(FluidState(u=w[k]), dt, brinkman=drag, scheme=cfg.scheme, cutoff=cfg.cutoff)
        forcing = (drag(w[k]), drag(guess)) if drag is not None else None
        fluid = step(fluid, dt, forcing=forcing, scheme=cfg.scheme, cutoff=cfg.cutoff,
                     advecting=(w[k], guess))
        if state.has_particles:
            ens = advance(ens_half, w[k + 1], dt / 2)
        history.append(fluid.u)
    return history


def _coupled_final(state: RunState, dt: float, steps: int) -> SpectralField:
    for _ in range(steps):
        state = coupled_step(state, dt)
    return state.fluid.u


def _contraction(gaps: list[float]) -> float:
    scale = max(gaps) if gaps else 0.0
    ratios = [b / a for a, b in zip(gaps[:-1], gaps[1:]) if a > NOISE_FLOOR * max(scale, 1.0)]
    return max(ratios) if ratios else 0.0


def picard_local_solve(cfg: RunConfig, horizon: float | None = None, tol: float = 1e-10,
                       max_iterations: int = MAX_ITERATIONS) -> PicardResult:
    """Iterate w -> u on [0, T]; T defaults to half the smallest step-condition bound."""
    if horizon is not None and not horizon > 0:
        raise UsageError(f"T must be positive, got {horizon}")
    state = initialize(cfg)
    cutoff = cfg.cutoff if cfg.cutoff is not None else state.grid.dealias_radius
    radius, bounds = step_conditions(state, cutoff)
    if horizon is None:
        horizon = 0.5 * min(bounds.values())
    conditions = {name: {"bound": bound, "holds": horizon <= bound} for name, bound in bounds.items()}
    steps = max(1, math.ceil(horizon / cfg.dt - 1e-9))
    dt = horizon / steps
    log.info("Picard on [0, %.4g] with %d steps, n=%.4g, M=%.4g", horizon, steps, cutoff, radius)

    w = [state.u0] * (steps + 1)
    gaps: list[float] = []
    status = "max-iterations"
    for iteration in range(max_iterations):
        u = _apply_map(state, w, dt)
        gap = energy_norm([a - b for a, b in zip(u, w)], dt)
        gaps.append(gap)
        w = u
        log.debug("Picard iteration %d: gap %.3e", iteration + 1, gap)
        if not math.isfinite(gap):
            status = "contraction-failure"
            break
        if gap <= tol * max(1.0, energy_norm(w, dt)):
            status = "converged"
            break
    factor = _contraction(gaps)
    if status == "max-iterations" and factor >= 1:
        status = "contraction-failure"
    if status != "converged":
        log.warning("Picard iteration stopped with %s, contraction factor %.3g", status, factor)

    coarse = _coupled_final(state, dt, steps)
    fine = _coupled_final(state, dt / 2, 2 * steps)
    return PicardResult(
        horizon=horizon,
        dt=dt,
        steps=steps,
        radius=radius,
        cutoff=cutoff,
        conditions=conditions,
        gaps=gaps,
        contraction_factor=factor,
        status=status,
        fixed_point=w[-1],
        coupled_gap=l2_norm(w[-1] - coarse),
        integrator_error=l2_norm(coarse - fine),
    )
