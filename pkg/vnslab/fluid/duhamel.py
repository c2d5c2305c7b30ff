"""
Fujita-Kato splitting of a recorded velocity history:

    u = e^{t Delta} u0  +  int_0^t e^{(t-s) Delta} P S(s) ds  +  remainder

with S the deposited Brinkman force sum_i w_i (V_i - u(X_i)). The Duhamel
integral is advanced with the same trapezoid-in-the-integrating-factor rule
the solver uses, so with the nonlinearity off the remainder is pure
quadrature error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from vnslab.besov import (
    chemin_lerner_norm,
    dyadic_decompose,
    lebesgue_time_norm,
    sobolev_norm,
    time_weights,
)
from vnslab.errors import UsageError
from vnslab.fluid.solver import truncate
from vnslab.spectral import SpectralField, heat_propagate, l2_norm, without_mean


@dataclass(frozen=True)
class DuhamelNorms:
    """
    Norms of one history at critical index s_c = d/2 - 1:
    sup_t |.|_{H^{s_c}}, L^inf B^{s_c}_{2,1}, L^2 B^{s_c+1}_{2,1}, L~^1 B^{s_c+2}_{2,1}.
    """
    sup_sobolev: float
    sup_besov: float
    l2_besov: float
    l1_besov: float

    def as_dict(self) -> dict:
        return {
            "sup_sobolev": self.sup_sobolev,
            "sup_besov": self.sup_besov,
            "l2_besov": self.l2_besov,
            "l1_besov": self.l1_besov,
        }


@dataclass(frozen=True, eq=False)
class DuhamelSplit:
    times: np.ndarray
    linear_data: list[SpectralField]
    linear_source: list[SpectralField]
    remainder: list[SpectralField]
    data_norms: DuhamelNorms
    source_norms: DuhamelNorms
    remainder_norms: DuhamelNorms
    u0_sobolev: float
    source_l43_l2: float

    @property
    def smallness(self) -> float:
        """|u0|_{H^{s_c}} + |S|_{L^{4/3} L^2}."""
        return self.u0_sobolev + self.source_l43_l2

    @property
    def quadratic_constant(self) -> float:
        """Empirical C in |remainder|_{L^inf B^{s_c}_{2,1}} <= C (|u0|^2 + |S|^2)."""
        scale = self.u0_sobolev ** 2 + self.source_l43_l2 ** 2
        return self.remainder_norms.sup_besov / scale if scale > 0 else 0.0

    def as_dict(self) -> dict:
        return {
            "u0_sobolev": self.u0_sobolev,
            "source_l43_l2": self.source_l43_l2,
            "smallness": self.smallness,
            "quadratic_constant": self.quadratic_constant,
            "data": self.data_norms.as_dict(),
            "source": self.source_norms.as_dict(),
            "remainder": self.remainder_norms.as_dict(),
        }


def _history_norms(history: Sequence[SpectralField], dt: float) -> DuhamelNorms:
    s = history[0].grid.dimension / 2 - 1
    series = [dyadic_decompose(without_mean(z)) for z in history]
    return DuhamelNorms(
        sup_sobolev=max(sobolev_norm(z, s) for z in history),
        sup_besov=lebesgue_time_norm(series, math.inf, s, 1, dt),
        l2_besov=lebesgue_time_norm(series, 2, s + 1, 1, dt),
        l1_besov=chemin_lerner_norm(series, 1, s + 2, 1, dt),
    )


def duhamel_split(u_history: Sequence[SpectralField], brinkman_history: Sequence[SpectralField],
                  u0: SpectralField, dt: float) -> DuhamelSplit:
    """
    Histories are sampled at t_m = m dt, m = 0..M, with u_history[0] = u0.

    brinkman_history holds the deposited force sum_i w_i (V_i - u(X_i)), the
    particle form of j - rho u; the two coincide when u is constant.
    """
    if not dt > 0:
        raise UsageError(f"dt must be positive, got {dt}")
    if not u_history:
        raise UsageError("empty velocity history")
    if len(u_history) != len(brinkman_history):
        raise UsageError(
            f"velocity history has {len(u_history)} samples but Brinkman history has {len(brinkman_history)}"
        )
    if any(z is None for z in u_history) or any(z is None for z in brinkman_history):
        raise UsageError("history has gaps")
    grid = u0.grid
    if any(z.grid != grid for z in list(u_history) + list(brinkman_history)):
        raise UsageError("histories mix grids")

    count = len(u_history)
    times = dt * np.arange(count)
    decay = np.exp(-grid.wavenumber_squared * dt)

    linear_data = [heat_propagate(u0, t) for t in times]
    projected = [truncate(s) for s in brinkman_history]
    linear_source = [SpectralField.zeros(grid, u0.components)]
    for m in range(count - 1):
        previous = linear_source[-1].coefficients
        coefficients = decay * previous + 0.5 * dt * (decay * projected[m].coefficients
                                                      + projected[m + 1].coefficients)
        linear_source.append(SpectralField(grid, coefficients))
    remainder = [u - a - b for u, a, b in zip(u_history, linear_data, linear_source)]

    s = grid.dimension / 2 - 1
    source_l2 = np.array([l2_norm(z) for z in brinkman_history])
    weights = time_weights(count, dt)
    source_l43 = float(np.sum(weights * source_l2 ** (4 / 3)) ** 0.75)
    return DuhamelSplit(
        times=times,
        linear_data=linear_data,
        linear_source=linear_source,
        remainder=remainder,
        data_norms=_history_norms(linear_data, dt),
        source_norms=_history_norms(linear_source, dt),
        remainder_norms=_history_norms(remainder, dt),
        u0_sobolev=sobolev_norm(u0, s),
        source_l43_l2=source_l43,
    )

