"""
Coupled time loop: Strang splitting with kinetic half steps around one fluid step.

    advance(dt/2, u^n) -> fluid step with the drag closure -> advance(dt/2, u^{n+1}) -> deposit
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from vnslab.besov import gradient_theta, l2_theta
from vnslab.config import OUTPUT_ROOT, RunConfig, validate_config
from vnslab.diagnostics import (
    EnergyRecord,
    asymptotic_density,
    decay_fit,
    energy_functionals,
    lipschitz_chain_report,
    lyapunov_check,
    records_column,
    write_series,
    write_summary,
)
from vnslab.driver.state import RunState, dissipation_rate, initialize
from vnslab.errors import DataError, FitError, NumericalAbort, UsageError
from vnslab.fluid import duhamel_split, step, with_derivatives
from vnslab.kinetic import (
    MonitorReport,
    advance,
    brinkman_force,
    deposit,
    flow_jacobian_probe,
    moment_bound_monitor,
    write_particles_binary,
    write_particles_ndjson,
)
from vnslab.spectral import grad_linf_norm, linf_norm, lp_norm
from vnslab.spectral.snapshot import write_field_binary, write_field_ndjson

log = logging.getLogger(__name__)

DENSITY_GUARD = 10.0
ENERGY_GUARD = 1e-2


def _finite(u, ens) -> bool:
    return u.is_finite() and bool(np.all(np.isfinite(ens.positions))) \
        and bool(np.all(np.isfinite(ens.velocities)))


def coupled_step(state: RunState, dt: float) -> RunState:
    if not dt > 0:
        raise UsageError(f"dt must be positive, got {dt}")
    cfg = state.config
    grid = state.grid
    u_now = state.fluid.u

    if state.has_particles:
        ens_half = advance(state.ensemble, u_now, dt / 2)
        force = brinkman_force(ens_half, grid)
    else:
        ens_half, force = state.ensemble, None
    fluid = step(state.fluid, dt, brinkman=force, scheme=cfg.scheme, cutoff=cfg.cutoff)
    u_next = fluid.u
    ens_next = advance(ens_half, u_next, dt / 2) if state.has_particles else ens_half

    if not _finite(u_next, ens_next):
        log.error("Non-finite values at step %d (t=%.6g)", state.step_index + 1, fluid.t)
        raise NumericalAbort(f"non-finite field or particle state at t={fluid.t:.6g}", last_good=state)
    moments = deposit(ens_next, grid, u_next)

    grad_next = grad_linf_norm(u_next)
    u_linf_next = linf_norm(u_next)
    dissipation = dissipation_rate(u_next, ens_next)
    decay = math.exp(-dt)
    history = (state.history + ((u_next, moments.brinkman),))[-cfg.history_length:]
    return replace(
        state,
        fluid=fluid,
        ensemble=ens_next,
        moments=moments,
        lipschitz_budget=state.lipschitz_budget + 0.5 * dt * (state.grad_linf + grad_next),
        u_linf_integral=state.u_linf_integral + 0.5 * dt * (state.u_linf + u_linf_next),
        u_linf_memory=decay * state.u_linf_memory + 0.5 * dt * (decay * state.u_linf + u_linf_next),
        grad_linf=grad_next,
        u_linf=u_linf_next,
        dissipation=dissipation,
        dissipation_integral=state.dissipation_integral + 0.5 * dt * (state.dissipation + dissipation),
        momentum_integral=state.momentum_integral + 0.5 * dt * (state.moments.j + moments.j),
        step_index=state.step_index + 1,
        history=history,
    )


# ---------------------------------------------------------------------------
# Records and monitors
# ---------------------------------------------------------------------------

def attach_derivatives(state: RunState) -> RunState:
    return replace(state, fluid=with_derivatives(state.fluid, state.moments, state.config.cutoff))


def record(state: RunState) -> EnergyRecord:
    cfg = state.config
    fluid = state.fluid if state.fluid.u_t is not None else with_derivatives(state.fluid, state.moments, cfg.cutoff)
    return energy_functionals(
        fluid, state.moments, state.ensemble,
        r0=state.initial.r0,
        weight_constant=cfg.weight_constant,
        lipschitz_budget=state.lipschitz_budget,
        dissipation_integral=state.dissipation_integral,
        initial_energy=state.initial.energy,
        eta=cfg.loglip_eta,
        besov=cfg.monitor_besov,
        loglip=cfg.monitor_loglip,
    )


def monitor(state: RunState) -> MonitorReport | None:
    if not state.has_particles:
        return None
    cfg = state.config
    return moment_bound_monitor(
        state.moments, state.ensemble, state.lipschitz_budget, state.t,
        u_linf_integral=state.u_linf_integral,
        u_linf_memory=state.u_linf_memory,
        delta=cfg.lipschitz_delta,
        q=cfg.moment_q,
    )


def continuation_guard(state: RunState, rec: EnergyRecord) -> str | None:
    """Reason to stop, or None."""
    initial = state.initial
    if state.has_particles and rec.rho_linf > DENSITY_GUARD * 2 * initial.mixed_norm:
        return f"density {rec.rho_linf:.6g} exceeds {DENSITY_GUARD:g}x its a priori bound at t={rec.t:.6g}"
    if rec.E0 > initial.energy * (1 + ENERGY_GUARD):
        return f"energy {rec.E0:.6g} exceeds E0(0)(1+{ENERGY_GUARD:g}) at t={rec.t:.6g}"
    return None


# ---------------------------------------------------------------------------
# Run
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunResult:
    state: RunState
    records: list[EnergyRecord]
    summary: dict
    output_dir: Path


def default_output_dir(cfg: RunConfig) -> Path:
    if cfg.output_dir is not None:
        return Path(cfg.output_dir)
    name = f"{cfg.velocity}-{cfg.profile if cfg.particles else 'fluid'}-d{cfg.dimension}-n{cfg.points}-s{cfg.seed}"
    return OUTPUT_ROOT / name


def write_snapshots(state: RunState, output_dir: Path) -> None:
    write_field_binary(state.fluid.u, output_dir / "velocity.vnsf")
    write_field_ndjson(state.fluid.u, state.t, output_dir / "velocity.ndjson")
    if state.has_particles:
        write_particles_binary(state.ensemble, output_dir / "particles.vnsp")
        write_particles_ndjson(state.ensemble, output_dir / "particles.ndjson")


def _fit(records, column: str, window) -> dict:
    try:
        return decay_fit(records_column(records, "t"), records_column(records, column), window).as_dict()
    except FitError as e:
        return {"error": str(e)}


def _lyapunov(records, l_column: str, h_column: str, theta: float) -> dict:
    n_values = records_column(records, "besov_m_half_d") ** 2
    if np.any(np.isnan(n_values)):
        return {"error": "Besov monitors are disabled", "theta": theta}
    try:
        verdict = lyapunov_check(records_column(records, "t"), records_column(records, l_column),
                                 records_column(records, h_column), n_values, theta)
        return verdict.as_dict()
    except DataError as e:
        return {"error": str(e), "theta": theta}


def _phase_volume(state: RunState, dt: float) -> dict:
    """Flow-Jacobian determinants replayed through the retained velocity history."""
    if not state.has_particles or len(state.history) != state.step_index + 1:
        return {"status": "not-applicable"}
    velocities = [entry[0] for entry in state.history]
    halves = []
    for now, later in zip(velocities[:-1], velocities[1:]):
        halves.extend([now, later])
    dets = flow_jacobian_probe(state.ensemble, halves, dt / 2)
    expected = math.exp(-state.grid.dimension * state.t)
    return {
        "status": "ok",
        "expected": expected,
        "determinants": dets,
        "max_deviation": float(np.max(np.abs(dets - expected))) if dets.size else 0.0,
    }


def _duhamel(state: RunState, dt: float) -> dict:
    if len(state.history) != state.step_index + 1:
        return {"status": "not-applicable", "reason": "history shorter than the run"}
    u_history = [entry[0] for entry in state.history]
    sources = [entry[1] for entry in state.history]
    split = duhamel_split(u_history, sources, state.u0, dt)
    return {"status": "ok", **split.as_dict()}


def summarize(state: RunState, records: list[EnergyRecord], monitors: list[MonitorReport],
              chains: list[dict], j_l1: list[float], status: str, reason: str | None = None) -> dict:
    cfg = state.config
    d = cfg.dimension
    times = [r.t for r in records]
    e0 = records_column(records, "E0")
    density = asymptotic_density(state.rho0, state.moments.rho, state.momentum_integral, times, j_l1)
    failed = sorted({c.name for report in monitors for c in report.failed})
    summary = {
        "status": status,
        "reason": reason,
        "t": state.t,
        "steps": state.step_index,
        "initial": state.initial.as_dict(),
        "final": records[-1].as_dict(),
        "fits": {
            "E0": _fit(records, "E0", cfg.fit_window),
            "E1": _fit(records, "E1", cfg.fit_window),
        },
        "lyapunov": {
            "E0": _lyapunov(records, "E0", "D0", l2_theta(d / 2)),
            "E1": _lyapunov(records, "E1", "D1", gradient_theta(d / 2)),
        },
        "monitors": {
            "checked": len(monitors),
            "failed": failed,
            "last": monitors[-1].as_dict() if monitors else None,
        },
        "lipschitz_chain": chains[-1] if chains else None,
        "energy_residual_max": float(np.max(records_column(records, "energy_residual"))),
        "e0_nonincreasing": bool(np.all(np.diff(e0) <= 1e-12 * max(e0[0], 1e-300))),
        "mass_drift": float(np.max(np.abs(records_column(records, "mass") - state.initial.mass))),
        "w1_within_cs": bool(np.all(records_column(records, "w1_bound") <= records_column(records, "cs_bound"))),
        "asymptotic_density": density.as_dict(),
        "phase_volume": _phase_volume(state, cfg.dt),
        "duhamel": _duhamel(state, cfg.dt),
        "config": cfg.echo(),
    }
    return summary


def run(cfg: RunConfig) -> RunResult:
    validate_config(cfg)
    output_dir = default_output_dir(cfg)
    state = initialize(cfg)
    state = replace(state, history=((state.u0, state.moments.brinkman),))
    records = [record(state)]
    monitors = [m for m in [monitor(state)] if m is not None]
    chains = [lipschitz_chain_report(state.fluid, state.moments, cfg.cutoff).as_dict()] if cfg.monitor_lorentz else []
    j_l1 = [lp_norm(state.moments.j, 1)]
    steps = max(1, round(cfg.t_end / cfg.dt))
    last_recorded = state
    log.info("Running %d steps of dt=%.4g to t=%.4g, output in %s", steps, cfg.dt, steps * cfg.dt, output_dir)

    try:
        for n in range(1, steps + 1):
            state = coupled_step(state, cfg.dt)
            if n % cfg.record_every and n != steps:
                continue
            state = attach_derivatives(state)
            rec = record(state)
            reason = continuation_guard(state, rec)
            if reason is not None:
                log.error("Continuation guard tripped: %s", reason)
                raise NumericalAbort(reason, last_good=last_recorded)
            records.append(rec)
            report = monitor(state)
            if report is not None:
                monitors.append(report)
            if cfg.monitor_lorentz:
                chains.append(lipschitz_chain_report(state.fluid, state.moments, cfg.cutoff).as_dict())
            j_l1.append(lp_norm(state.moments.j, 1))
            last_recorded = state
            log.info("t=%.4g E0=%.6g D0=%.6g B=%.4g residual=%.3g",
                     rec.t, rec.E0, rec.D0, rec.lipschitz_budget, rec.energy_residual)
    except NumericalAbort as e:
        good = e.last_good if isinstance(e.last_good, RunState) else last_recorded
        good_records = [r for r in records if r.t <= good.t]
        write_series(good_records, output_dir / "series.csv")
        write_snapshots(good, output_dir)
        write_summary(summarize(good, good_records, monitors, chains, j_l1[:len(good_records)],
                                "aborted", e.reason), output_dir / "summary.json")
        log.error("Run aborted at t=%.6g; last good state written to %s", good.t, output_dir)
        raise

    summary = summarize(state, records, monitors, chains, j_l1, "completed")
    write_series(records, output_dir / "series.csv")
    write_summary(summary, output_dir / "summary.json")
    write_snapshots(state, output_dir)
    log.info("Run completed: %d records written to %s", len(records), output_dir)
    return RunResult(state, records, summary, output_dir)
