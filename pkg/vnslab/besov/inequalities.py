"""Measured ratios for the interpolation, embedding, product and maximal-regularity inequalities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vnslab.besov.dyadic import (
    besov_norm,
    chemin_lerner_norm,
    dyadic_decompose,
    heat_series,
    sobolev_norm,
)
from vnslab.errors import UsageError
from vnslab.spectral import SpectralField, lp_norm, multiply, without_mean


@dataclass(frozen=True)
class InterpolationReport:
    """
    gradient chain: |grad u| <= C |grad^2 u|^theta |u|_{B^-sigma}^(1-theta), theta = (sigma+1)/(sigma+2)
    l2 chain:       |u| <= C |grad u|^theta |u|_{B^-sigma}^(1-theta),        theta = sigma/(sigma+1)
    """
    sigma: float
    gradient_theta: float
    gradient_ratio: float
    l2_theta: float
    l2_ratio: float

    @property
    def gradient_decay_exponent(self) -> float:
        return self.gradient_theta / (1 - self.gradient_theta)

    @property
    def l2_decay_exponent(self) -> float:
        return self.l2_theta / (1 - self.l2_theta)


def gradient_theta(sigma: float) -> float:
    return (sigma + 1) / (sigma + 2)


def l2_theta(sigma: float) -> float:
    return sigma / (sigma + 1)


def interpolation_check(z: SpectralField, sigma: float) -> InterpolationReport:
    if not sigma > 0:
        raise UsageError(f"sigma must be positive, got {sigma}")
    negative = besov_norm(dyadic_decompose(z), -sigma, math.inf)
    if negative == 0.0:
        raise UsageError("interpolation ratio is undefined for the zero field")
    l2 = sobolev_norm(z, 0)
    grad = sobolev_norm(z, 1)
    hess = sobolev_norm(z, 2)
    theta_g = gradient_theta(sigma)
    theta_0 = l2_theta(sigma)
    return InterpolationReport(
        sigma=sigma,
        gradient_theta=theta_g,
        gradient_ratio=grad / (hess ** theta_g * negative ** (1 - theta_g)),
        l2_theta=theta_0,
        l2_ratio=l2 / (grad ** theta_0 * negative ** (1 - theta_0)),
    )


def embedding_ratio(z: SpectralField) -> float:
    """|z - mean|_{B^{-d/2}_{2,inf}} / |z|_{L1}."""
    d = z.grid.dimension
    l1 = lp_norm(z, 1)
    if l1 == 0.0:
        raise UsageError("embedding ratio is undefined for the zero field")
    return besov_norm(dyadic_decompose(without_mean(z)), -d / 2, math.inf) / l1


def product_ratio(a: SpectralField, b: SpectralField, s: float) -> float:
    """|ab|_{B^s_{2,1}} / (|a|_{B^{d/2}_{2,1}} |b|_{B^s_{2,1}}), means removed before the Besov norms."""
    d = a.grid.dimension
    product = without_mean(multiply(a, b))
    denominator = (besov_norm(dyadic_decompose(without_mean(a)), d / 2, 1)
                   * besov_norm(dyadic_decompose(without_mean(b)), s, 1))
    if denominator == 0.0:
        raise UsageError("product ratio is undefined for zero factors")
    return besov_norm(dyadic_decompose(product), s, 1) / denominator


def maxreg_ratio(z0: SpectralField, s: float, r: float, horizon: float,
                 samples: int | None = None) -> float:
    """
    |e^{t Delta} z0|_{L~^1_T(B^{s+2}_{2,r})} / |z0|_{B^s_{2,r}}.

    The default sampling keeps dt |k|^2_max <= 1/2 so the trapezoid resolves
    the fastest shell.
    """
    if not horizon > 0:
        raise UsageError(f"horizon must be positive, got {horizon}")
    if samples is None:
        k2_max = float(z0.grid.wavenumber_squared.max())
        samples = max(64, math.ceil(2 * horizon * k2_max)) + 1
    times = np.linspace(0.0, horizon, samples)
    series = heat_series(z0, times)
    base = besov_norm(series[0], s, r)
    if base == 0.0:
        raise UsageError("maximal regularity ratio is undefined for the zero field")
    return chemin_lerner_norm(series, 1, s + 2, r, times[1] - times[0]) / base
