"""
Periodic lattice and Fourier-coefficient fields.

Coefficients are normalized so that z(x) = sum_k c_k exp(i k.x): the zero mode
is the spatial mean and the L2 norm is sqrt(L^d * sum |c_k|^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from vnslab.errors import ConfigError, UsageError


@dataclass(frozen=True)
class Grid:
    """d-dimensional periodic box of side L sampled with N points per axis."""
    dimension: int
    points: int
    box: float

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ConfigError(f"dimension must be 2 or 3, got {self.dimension}")
        if self.points < 8 or self.points & (self.points - 1):
            raise ConfigError(f"points per axis must be a power of two >= 8, got {self.points}")
        if not self.box > 0:
            raise ConfigError(f"box side must be positive, got {self.box}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dimension

    @property
    def spacing(self) -> float:
        return self.box / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dimension

    @property
    def measure(self) -> float:
        return self.box ** self.dimension

    @property
    def fundamental(self) -> float:
        """Smallest nonzero wavenumber 2*pi/L."""
        return 2 * math.pi / self.box

    @property
    def max_wavenumber(self) -> float:
        """Per-axis lattice bound pi*N/L."""
        return math.pi * self.points / self.box

    @cached_property
    def indices(self) -> np.ndarray:
        """Signed integer lattice indices, shape (d, N, ..., N)."""
        axis = np.fft.fftfreq(self.points, 1.0 / self.points).astype(np.int64)
        return np.stack(np.meshgrid(*([axis] * self.dimension), indexing="ij"))

    @cached_property
    def wavevector(self) -> np.ndarray:
        """Wavevectors for first-order multipliers; the unpaired Nyquist entry is zeroed."""
        k = self.fundamental * self.indices.astype(float)
        k[self.indices == -self.points // 2] = 0.0
        return k

    @cached_property
    def wavenumber_squared(self) -> np.ndarray:
        """True lattice |k|^2, Nyquist included. Used by the heat semigroup and Sobolev weights."""
        k = self.fundamental * self.indices.astype(float)
        return np.sum(k * k, axis=0)

    @cached_property
    def wavenumber(self) -> np.ndarray:
        return np.sqrt(self.wavenumber_squared)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3 rule: keep |index_i| < N/3 on every axis."""
        return np.all(3 * np.abs(self.indices) < self.points, axis=0)

    @cached_property
    def nyquist_free(self) -> np.ndarray:
        return np.all(self.indices != -self.points // 2, axis=0)

    @property
    def dealias_radius(self) -> float:
        """Largest per-axis wavenumber kept by the 2/3 rule."""
        return self.fundamental * ((self.points - 1) // 3)

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Node coordinates x_i = i*dx, shape (d, N, ..., N)."""
        axis = np.arange(self.points) * self.spacing
        return np.stack(np.meshgrid(*([axis] * self.dimension), indexing="ij"))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Scalar (1 component) or vector (d components) field held as Fourier coefficients."""
    grid: Grid
    coefficients: np.ndarray
    solenoidal: bool = False

    def __post_init__(self):
        expected = self.grid.shape
        if self.coefficients.ndim != self.grid.dimension + 1 or self.coefficients.shape[1:] != expected:
            raise ConfigError(
                f"coefficient array of shape {self.coefficients.shape} does not match grid {expected}"
            )

    @classmethod
    def zeros(cls, grid: Grid, components: int = 1, solenoidal: bool = False) -> SpectralField:
        return cls(grid, np.zeros((components,) + grid.shape, dtype=complex), solenoidal)

    @property
    def components(self) -> int:
        return self.coefficients.shape[0]

    @property
    def is_vector(self) -> bool:
        return self.components == self.grid.dimension

    @property
    def mean(self) -> np.ndarray:
        """Zero-mode coefficient per component (the spatial mean)."""
        return self.coefficients[(slice(None),) + (0,) * self.grid.dimension].real

    def component(self, index: int) -> SpectralField:
        return SpectralField(self.grid, self.coefficients[index:index + 1])

    def with_coefficients(self, coefficients: np.ndarray, solenoidal: bool | None = None) -> SpectralField:
        flag = self.solenoidal if solenoidal is None else solenoidal
        return SpectralField(self.grid, coefficients, flag)

    def _check_compatible(self, other: SpectralField) -> None:
        if other.grid != self.grid or other.components != self.components:
            raise UsageError("fields live on different grids or have different component counts")

    def __add__(self, other: SpectralField) -> SpectralField:
        self._check_compatible(other)
        return SpectralField(self.grid, self.coefficients + other.coefficients,
                             self.solenoidal and other.solenoidal)

    def __sub__(self, other: SpectralField) -> SpectralField:
        self._check_compatible(other)
        return SpectralField(self.grid, self.coefficients - other.coefficients,
                             self.solenoidal and other.solenoidal)

    def __mul__(self, scalar: float) -> SpectralField:
        return SpectralField(self.grid, self.coefficients * scalar, self.solenoidal)

    __rmul__ = __mul__

    def __neg__(self) -> SpectralField:
        return SpectralField(self.grid, -self.coefficients, self.solenoidal)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coefficients)))
