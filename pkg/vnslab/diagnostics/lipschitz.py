"""Sampled log-Lipschitz seminorm and the Lorentz-norm terms that control grad u in L^inf."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from vnslab.besov import lorentz_norm
from vnslab.errors import UsageError
from vnslab.fluid import FluidState, rhs
from vnslab.kinetic import MomentFields
from vnslab.spectral import Grid, SpectralField, convection, derive, grad_linf_norm, physical_components

log = logging.getLogger(__name__)


def loglip_modulus(r, eta: float):
    """r (1 - log r)^(1 - eta) on (0, 1]."""
    r = np.asarray(r, float)
    return r * (1 - np.log(r)) ** (1 - eta)


def _offsets(grid: Grid) -> list[tuple[int, ...]]:
    """Neighbors with |m|_inf <= 2 plus powers of two along each axis, one per +-m pair, |m dx| <= 1."""
    d = grid.dimension
    candidates = set(itertools.product(range(-2, 3), repeat=d))
    p = 1
    while p * grid.spacing <= 1 and p < grid.points // 2:
        for axis in range(d):
            m = [0] * d
            m[axis] = p
            candidates.add(tuple(m))
        p *= 2
    kept = []
    for m in sorted(candidates):
        nonzero = [c for c in m if c != 0]
        if not nonzero or nonzero[0] < 0:
            continue
        if math.sqrt(sum(c * c for c in m)) * grid.spacing <= 1:
            kept.append(m)
    return kept


def loglip_norm(u: SpectralField, eta: float = 0.25) -> float:
    """
    sup |u(y) - u(x)| / w(|y - x|) over node pairs with |y - x| <= 1,
    w(r) = r (1 - log r)^(1 - eta). A lower bound for the true seminorm.
    """
    if not 0 < eta < 0.5:
        raise UsageError(f"eta must lie in (0, 1/2), got {eta}")
    grid = u.grid
    values = physical_components(u)
    axes = tuple(range(1, grid.dimension + 1))
    offsets = _offsets(grid)
    if not offsets:
        log.warning("grid spacing %.4g exceeds 1; no admissible pairs for the log-Lipschitz norm", grid.spacing)
        return 0.0
    best = 0.0
    for m in offsets:
        shifted = np.roll(values, shift=tuple(-c for c in m), axis=axes)
        gap = np.sqrt(np.sum((shifted - values) ** 2, axis=0)).max()
        r = math.sqrt(sum(c * c for c in m)) * grid.spacing
        best = max(best, float(gap / loglip_modulus(r, eta)))
    return best


@dataclass(frozen=True)
class LipschitzChainReport:
    """L^{d,1} norms of the three terms bounding grad u, plus the embedding ratio for grad u."""
    u_t: float
    convection: float
    brinkman: float
    grad_linf: float
    hessian_lorentz: float

    @property
    def total(self) -> float:
        return self.u_t + self.convection + self.brinkman

    @property
    def ratio(self) -> float:
        """|grad u|_inf / |grad^2 u|_{L^{d,1}}."""
        return self.grad_linf / self.hessian_lorentz if self.hessian_lorentz > 0 else 0.0

    def as_dict(self) -> dict:
        return {
            "u_t": self.u_t,
            "convection": self.convection,
            "brinkman": self.brinkman,
            "total": self.total,
            "grad_linf": self.grad_linf,
            "hessian_lorentz": self.hessian_lorentz,
            "ratio": self.ratio,
        }


def lipschitz_chain_report(state: FluidState, moments: MomentFields | None,
                           cutoff: float | None = None) -> LipschitzChainReport:
    d = state.grid.dimension
    u = state.u
    u_t = state.u_t if state.u_t is not None else rhs(state, moments, cutoff)
    force = moments.brinkman if moments is not None else SpectralField.zeros(state.grid, d)
    return LipschitzChainReport(
        u_t=lorentz_norm(u_t, d, 1),
        convection=lorentz_norm(convection(u), d, 1),
        brinkman=lorentz_norm(force, d, 1),
        grad_linf=grad_linf_norm(u),
        hessian_lorentz=lorentz_norm(derive(u, "hessian"), d, 1),
    )
