"""
Fourier-space operators on the periodic box: transforms, Leray/Friedrichs
projectors, spectral derivatives, the heat semigroup, dealiased products and
basic norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from vnslab.errors import ConfigError, UsageError
from vnslab.spectral.grid import Grid, SpectralField

DerivativeOrder = Literal["grad", "div", "laplacian", "hessian"]


def _axes(grid: Grid) -> tuple[int, ...]:
    return tuple(range(1, grid.dimension + 1))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def to_spectral(samples: np.ndarray, grid: Grid) -> SpectralField:
    """Real node samples -> coefficients. Accepts shape grid.shape (scalar) or (C, *grid.shape)."""
    samples = np.asarray(samples)
    if np.iscomplexobj(samples):
        raise ConfigError("samples must be real-valued")
    if samples.shape == grid.shape:
        samples = samples[np.newaxis]
    if samples.ndim != grid.dimension + 1 or samples.shape[1:] != grid.shape:
        raise ConfigError(f"sample shape {samples.shape} does not match grid {grid.shape}")
    coefficients = np.fft.fftn(samples, axes=_axes(grid)) / grid.points ** grid.dimension
    return SpectralField(grid, coefficients)


def to_physical(z: SpectralField) -> np.ndarray:
    """Coefficients -> real node samples, same layout to_spectral accepts (scalars drop the component axis)."""
    grid = z.grid
    values = np.fft.ifftn(z.coefficients * grid.points ** grid.dimension, axes=_axes(grid)).real
    return values[0] if z.components == 1 else values


def physical_components(z: SpectralField) -> np.ndarray:
    """Node samples always with a leading component axis."""
    values = to_physical(z)
    return values[np.newaxis] if z.components == 1 else values


# ---------------------------------------------------------------------------
# Projectors
# ---------------------------------------------------------------------------

def leray_project(z: SpectralField) -> SpectralField:
    """
    (I - k k^T/|k|^2) u_hat; the k = 0 mode passes through unchanged.

    Modes on a Nyquist plane have no paired wavevector and are dropped, so the
    result is divergence free for the true lattice symbol as well.
    """
    if not z.is_vector:
        raise UsageError("leray_project needs a vector field")
    grid = z.grid
    k = grid.wavevector
    k2 = np.sum(k * k, axis=0)
    safe = np.where(k2 > 0, k2, 1.0)
    k_dot = np.sum(k * z.coefficients, axis=0)
    projected = (z.coefficients - k * np.where(k2 > 0, k_dot / safe, 0.0)) * grid.nyquist_free
    return z.with_coefficients(projected, solenoidal=True)


def ball_truncate(z: SpectralField, n: float) -> SpectralField:
    """Zero every coefficient with |k| > n."""
    if not n > 0:
        raise UsageError(f"cutoff radius must be positive, got {n}")
    keep = z.grid.wavenumber <= n
    return z.with_coefficients(z.coefficients * keep)


def friedrichs_project(z: SpectralField, n: float) -> SpectralField:
    """J_n = P 1_{|k| <= n}: spectral Galerkin truncation onto solenoidal modes."""
    return leray_project(ball_truncate(z, n))


def dealias(z: SpectralField) -> SpectralField:
    return z.with_coefficients(z.coefficients * z.grid.dealias_mask)


def without_mean(z: SpectralField) -> SpectralField:
    coefficients = z.coefficients.copy()
    coefficients[(slice(None),) + (0,) * z.grid.dimension] = 0.0
    return z.with_coefficients(coefficients)


# ---------------------------------------------------------------------------
# Derivatives and semigroup
# ---------------------------------------------------------------------------

def derive(z: SpectralField, order: DerivativeOrder) -> SpectralField:
    """
    Exact spectral differentiation.

    grad of a C-component field returns C*d components ordered (i, j) -> i*d + j
    holding d_j z_i; hessian returns C*d*d components ordered (i, j, l).
    """
    grid = z.grid
    k = grid.wavevector
    c = z.coefficients
    if order == "grad":
        out = 1j * k[np.newaxis] * c[:, np.newaxis]
        return SpectralField(grid, out.reshape((-1,) + grid.shape))
    if order == "div":
        if not z.is_vector:
            raise UsageError("div needs a vector field")
        return SpectralField(grid, np.sum(1j * k * c, axis=0, keepdims=True))
    if order == "laplacian":
        return z.with_coefficients(-np.sum(k * k, axis=0) * c)
    if order == "hessian":
        kk = k[:, np.newaxis] * k[np.newaxis, :]
        out = -kk[np.newaxis] * c[:, np.newaxis, np.newaxis]
        return SpectralField(grid, out.reshape((-1,) + grid.shape))
    raise UsageError(f"unknown derivative order: {order!r}")


def heat_propagate(z: SpectralField, t: float) -> SpectralField:
    """e^{t Delta} z."""
    if t < 0:
        raise UsageError(f"heat_propagate needs t >= 0, got {t}")
    return z.with_coefficients(z.coefficients * np.exp(-z.grid.wavenumber_squared * t))


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def convection(u: SpectralField, w: SpectralField | None = None) -> SpectralField:
    """Dealiased (w . grad) u, with w = u by default."""
    grid = u.grid
    d = grid.dimension
    w = u if w is None else w
    if not w.is_vector:
        raise UsageError("advecting field must be a vector field")
    gradient = to_physical(derive(dealias(u), "grad")).reshape((u.components, d) + grid.shape)
    advecting = physical_components(dealias(w))
    product = np.einsum("j...,ij...->i...", advecting, gradient)
    return dealias(to_spectral(product, grid))


def multiply(a: SpectralField, b: SpectralField, dealiased: bool = False) -> SpectralField:
    """Pointwise product of two scalar fields, or of a scalar and a vector field."""
    if a.components != 1:
        raise UsageError("left factor must be scalar")
    product = to_physical(a) * to_physical(b)
    out = to_spectral(product, a.grid)
    return dealias(out) if dealiased else out


def gaussian_blob(grid: Grid, width: float, center=None, components: int = 1,
                  direction=None) -> SpectralField:
    """
    Periodized unit-mass Gaussian of standard deviation `width`, built from its
    Fourier coefficients so e^{t Delta} maps it to the same Gaussian with
    width^2 + 2t. Vector blobs point along `direction` (default first axis).
    """
    if not width > 0:
        raise UsageError(f"width must be positive, got {width}")
    center = np.full(grid.dimension, grid.box / 2) if center is None else np.asarray(center, float)
    phase = np.tensordot(center, grid.wavevector, axes=1)
    scalar = np.exp(-0.5 * width ** 2 * grid.wavenumber_squared - 1j * phase) / grid.measure
    scalar = scalar * grid.nyquist_free
    if components == 1:
        return SpectralField(grid, scalar[np.newaxis])
    if direction is None:
        direction = np.eye(components)[0]
    direction = np.asarray(direction, float)
    return SpectralField(grid, direction.reshape((-1,) + (1,) * grid.dimension) * scalar)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def inner(a: SpectralField, b: SpectralField) -> float:
    """L2 inner product by Parseval."""
    if a.grid != b.grid or a.components != b.components:
        raise UsageError("inner product of incompatible fields")
    return float(a.grid.measure * np.sum((np.conj(a.coefficients) * b.coefficients).real))


def l2_norm(z: SpectralField) -> float:
    return math.sqrt(z.grid.measure * float(np.sum(np.abs(z.coefficients) ** 2)))


def magnitude(z: SpectralField) -> np.ndarray:
    """Pointwise Euclidean magnitude over components at the nodes."""
    values = physical_components(z)
    return np.sqrt(np.sum(values * values, axis=0))


def lp_norm(z: SpectralField, p: float) -> float:
    """Quadrature L^p norm of the pointwise magnitude; p = inf gives the node maximum."""
    if p < 1:
        raise UsageError(f"L^p norm needs p >= 1, got {p}")
    values = magnitude(z)
    if math.isinf(p):
        return float(values.max())
    return float((np.sum(values ** p) * z.grid.cell_volume) ** (1.0 / p))


def linf_norm(z: SpectralField) -> float:
    """Max over node samples; a lower bound for the true sup."""
    return lp_norm(z, math.inf)


def grad_linf_norm(z: SpectralField) -> float:
    """Max over nodes of the Frobenius norm of the gradient."""
    return linf_norm(derive(z, "grad"))


@dataclass(frozen=True)
class FieldNorms:
    l2: float
    lp: float | None
    linf: float
    grad_linf: float


def norms(z: SpectralField, p: float | None = None) -> FieldNorms:
    """L2 (Parseval), optional L^p (quadrature), node-sampled L^inf and grad L^inf."""
    if p is not None and p < 1:
        raise UsageError(f"L^p norm needs p >= 1, got {p}")
    return FieldNorms(
        l2=l2_norm(z),
        lp=None if p is None else lp_norm(z, p),
        linf=linf_norm(z),
        grad_linf=grad_linf_norm(z),
    )
