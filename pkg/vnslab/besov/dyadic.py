"""
Littlewood-Paley shells on the lattice and the norms built from them.

Shell j holds the modes with 2^(j-1) < |k| <= 2^j (sharp cutoffs), so the
shells partition the nonzero lattice and sum_j |Delta_j z|^2 = |z|^2 exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from vnslab.errors import PreconditionError, UsageError
from vnslab.spectral import Grid, SpectralField, l2_norm

SUMMATION_EXPONENTS = (1, 2, math.inf)


@dataclass(frozen=True, eq=False)
class DyadicSpectrum:
    """Per-shell L2 norms |Delta_j z| for j = j_min .. j_max."""
    indices: np.ndarray
    shell_norms: np.ndarray

    @property
    def j_min(self) -> int:
        return int(self.indices[0])

    @property
    def j_max(self) -> int:
        return int(self.indices[-1])

    def shells(self) -> list[tuple[int, float]]:
        return [(int(j), float(a)) for j, a in zip(self.indices, self.shell_norms)]


@lru_cache(maxsize=16)
def shell_layout(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """(shell offset per mode, shell indices). The zero mode gets offset -1."""
    k = grid.wavenumber
    nonzero = k > 0
    j = np.zeros(k.shape, dtype=np.int64)
    j[nonzero] = np.ceil(np.log2(k[nonzero]) - 1e-12).astype(np.int64)
    j_min, j_max = int(j[nonzero].min()), int(j[nonzero].max())
    offset = np.where(nonzero, j - j_min, -1)
    return offset, np.arange(j_min, j_max + 1)


def _mode_energy(z: SpectralField) -> np.ndarray:
    return z.grid.measure * np.sum(np.abs(z.coefficients) ** 2, axis=0)


def _check_zero_mean(z: SpectralField, tol: float) -> None:
    zero_mode = np.abs(z.coefficients[(slice(None),) + (0,) * z.grid.dimension])
    mean_norm = math.sqrt(z.grid.measure * float(np.sum(zero_mode ** 2)))
    if mean_norm > tol * max(l2_norm(z), np.finfo(float).tiny):
        raise PreconditionError("homogeneous Besov routines need a field with zero mean")


def _spectrum_from_energy(grid: Grid, energy: np.ndarray) -> DyadicSpectrum:
    offset, indices = shell_layout(grid)
    nonzero = offset >= 0
    sums = np.bincount(offset[nonzero], weights=energy[nonzero], minlength=indices.size)
    return DyadicSpectrum(indices, np.sqrt(sums))


def dyadic_decompose(z: SpectralField, tol: float = 1e-12) -> DyadicSpectrum:
    _check_zero_mean(z, tol)
    return _spectrum_from_energy(z.grid, _mode_energy(z))


def dyadic_pieces(z: SpectralField, tol: float = 1e-12) -> list[tuple[int, SpectralField]]:
    """The localized fields Delta_j z themselves."""
    _check_zero_mean(z, tol)
    offset, indices = shell_layout(z.grid)
    return [
        (int(j), z.with_coefficients(z.coefficients * (offset == position)))
        for position, j in enumerate(indices)
    ]


def heat_series(z: SpectralField, times: Sequence[float]) -> list[DyadicSpectrum]:
    """Dyadic spectra of e^{t Delta} z for each t, straight from the mode energies."""
    _check_zero_mean(z, 1e-12)
    energy = _mode_energy(z)
    k2 = z.grid.wavenumber_squared
    return [_spectrum_from_energy(z.grid, energy * np.exp(-2.0 * k2 * t)) for t in times]


def _ell(values: np.ndarray, r: float) -> float:
    if r not in SUMMATION_EXPONENTS:
        raise UsageError(f"summation exponent must be 1, 2 or inf, got {r}")
    if values.size == 0:
        return 0.0
    if r == 1:
        return float(np.sum(values))
    if r == 2:
        return float(np.sqrt(np.sum(values * values)))
    return float(np.max(values))


def besov_norm(spec: DyadicSpectrum, s: float, r: float) -> float:
    """|| 2^{js} |Delta_j z| ||_{l^r}."""
    return _ell(np.exp2(spec.indices * s) * spec.shell_norms, r)


def sobolev_norm(z: SpectralField, s: float) -> float:
    """Homogeneous H^s norm by Parseval over nonzero modes."""
    k2 = z.grid.wavenumber_squared
    weight = np.zeros_like(k2)
    nonzero = k2 > 0
    weight[nonzero] = k2[nonzero] ** s
    return math.sqrt(float(np.sum(weight * _mode_energy(z))))


# ---------------------------------------------------------------------------
# Time norms
# ---------------------------------------------------------------------------

def time_weights(count: int, dt: float) -> np.ndarray:
    """Trapezoid weights on a uniform grid; a single sample gets weight dt."""
    if count == 0:
        raise UsageError("empty time series")
    if not dt > 0:
        raise UsageError(f"time step must be positive, got {dt}")
    if count == 1:
        return np.array([dt])
    weights = np.full(count, dt)
    weights[[0, -1]] = dt / 2
    return weights


def time_norm(values: np.ndarray, weights: np.ndarray, rho: float) -> np.ndarray:
    """L^rho in time along axis 0 with the given quadrature weights."""
    if rho < 1:
        raise UsageError(f"time exponent must be >= 1, got {rho}")
    if math.isinf(rho):
        return np.max(values, axis=0)
    shape = (-1,) + (1,) * (values.ndim - 1)
    return np.sum(weights.reshape(shape) * values ** rho, axis=0) ** (1.0 / rho)


def _stack(series: Sequence[DyadicSpectrum]) -> np.ndarray:
    if not series:
        raise UsageError("empty time series")
    first = series[0].indices
    for spec in series[1:]:
        if not np.array_equal(spec.indices, first):
            raise UsageError("time series mixes spectra from different grids")
    return np.stack([spec.shell_norms for spec in series])


def chemin_lerner_norm(series: Sequence[DyadicSpectrum], rho: float, s: float, r: float,
                       dt: float) -> float:
    """|| 2^{js} || Delta_j z ||_{L^rho_T} ||_{l^r}: time norm inside the shell sum."""
    shells = _stack(series)
    per_shell = time_norm(shells, time_weights(len(series), dt), rho)
    return _ell(np.exp2(series[0].indices * s) * per_shell, r)


def lebesgue_time_norm(series: Sequence[DyadicSpectrum], rho: float, s: float, r: float,
                       dt: float) -> float:
    """|| ||z(t)||_{B^s_{2,r}} ||_{L^rho_T}, same quadrature as chemin_lerner_norm."""
    _stack(series)
    values = np.array([besov_norm(spec, s, r) for spec in series])
    return float(time_norm(values, time_weights(len(series), dt), rho))


# ---------------------------------------------------------------------------
# Heat-flow characterization
# ---------------------------------------------------------------------------

HEAT_POINTS_PER_OCTAVE = 8


def heat_times(grid: Grid) -> np.ndarray:
    """Geometric grid from (pi N / L)^-2 to (2 pi / L)^-2, 8 points per octave."""
    t_min = grid.max_wavenumber ** -2
    t_max = grid.fundamental ** -2
    count = math.ceil(HEAT_POINTS_PER_OCTAVE * math.log2(t_max / t_min))
    return t_min * np.exp2(np.arange(count + 1) / HEAT_POINTS_PER_OCTAVE)


def heat_characterization_norm(z: SpectralField, sigma: float, r: float = math.inf) -> float:
    """sup_t t^{sigma/2} || e^{t Delta} z ||_{L2} over heat_times."""
    if not sigma > 0:
        raise UsageError(f"sigma must be positive, got {sigma}")
    if r != math.inf:
        raise UsageError("only r = inf is supported by the heat characterization")
    _check_zero_mean(z, 1e-12)
    energy = _mode_energy(z).ravel()
    k2 = z.grid.wavenumber_squared.ravel()
    keep = energy > 0
    energy, k2 = energy[keep], k2[keep]
    if energy.size == 0:
        return 0.0
    best = 0.0
    for t in heat_times(z.grid):
        value = t ** (sigma / 2) * math.sqrt(float(np.sum(energy * np.exp(-2.0 * k2 * t))))
        best = max(best, value)
    return best
