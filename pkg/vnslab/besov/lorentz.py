"""Lorentz norms from the decreasing rearrangement of node samples."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vnslab.errors import UsageError
from vnslab.spectral import SpectralField, magnitude


@dataclass(frozen=True, eq=False)
class ReArrangement:
    """Discrete f*: node magnitudes sorted non-increasingly, each carrying one cell measure."""
    values: np.ndarray
    cell_measure: float

    @property
    def measure(self) -> float:
        return self.values.size * self.cell_measure

    @property
    def breakpoints(self) -> np.ndarray:
        """t_0 = 0 < t_1 < ... < t_n = measure; f* is constant on (t_{i-1}, t_i]."""
        return self.cell_measure * np.arange(self.values.size + 1)


def rearrange(z: SpectralField) -> ReArrangement:
    values = np.sort(magnitude(z).ravel())[::-1]
    return ReArrangement(values, z.grid.cell_volume)


def rearranged_norm(f: ReArrangement, p: float, r: float) -> float:
    """
    || t^{1/p} f*(t) ||_{L^r(dt/t)}, integrated exactly on each constant piece:
    sum_i f_i^r (p/r) (t_i^{r/p} - t_{i-1}^{r/p}).
    """
    if p <= 1 or math.isinf(p):
        raise UsageError(f"Lorentz exponent p must lie in (1, inf), got {p}")
    if r < 1:
        raise UsageError(f"Lorentz exponent r must be >= 1, got {r}")
    t = f.breakpoints
    if math.isinf(r):
        return float(np.max(t[1:] ** (1.0 / p) * f.values, initial=0.0))
    steps = np.diff(t ** (r / p))
    return float((np.sum(f.values ** r * steps) * p / r) ** (1.0 / r))


def lorentz_norm(z: SpectralField, p: float, r: float) -> float:
    return rearranged_norm(rearrange(z), p, r)
