"""
Cloud-in-cell (linear B-spline) kernel shared by deposition and interpolation.

Using one stencil for both directions makes scatter the exact adjoint of
gather: sum_nodes F * scatter(q) * dV = sum_particles q . gather(F).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from vnslab.spectral import Grid


@dataclass(frozen=True, eq=False)
class CicStencil:
    grid: Grid
    nodes: np.ndarray    # (n, 2^d) flat node indices
    weights: np.ndarray  # (n, 2^d), rows sum to 1

    @property
    def count(self) -> int:
        return self.nodes.shape[0]

    def gather(self, values: np.ndarray) -> np.ndarray:
        """Node values (C, *grid.shape) -> particle values (n, C)."""
        flat = values.reshape(values.shape[0], -1)
        return np.einsum("ns,cns->nc", self.weights, flat[:, self.nodes])

    def scatter(self, quantities: np.ndarray) -> np.ndarray:
        """Particle quantities (n, C) -> node densities (C, *grid.shape), fixed reduction order."""
        grid = self.grid
        size = grid.points ** grid.dimension
        nodes = self.nodes.ravel()
        out = np.empty((quantities.shape[1], size))
        for c in range(quantities.shape[1]):
            contribution = (self.weights * quantities[:, c:c + 1]).ravel()
            out[c] = np.bincount(nodes, weights=contribution, minlength=size)
        return out.reshape((quantities.shape[1],) + grid.shape) / grid.cell_volume


def cic_stencil(positions: np.ndarray, grid: Grid) -> CicStencil:
    n_points, d = grid.points, grid.dimension
    scaled = np.asarray(positions, float) / grid.spacing
    base = np.floor(scaled)
    frac = scaled - base
    base = base.astype(np.int64)
    nodes, weights = [], []
    for corner in itertools.product((0, 1), repeat=d):
        flat = np.zeros(scaled.shape[0], dtype=np.int64)
        weight = np.ones(scaled.shape[0])
        for axis, offset in enumerate(corner):
            index = np.mod(base[:, axis] + offset, n_points)
            flat = flat * n_points + index
            weight = weight * (frac[:, axis] if offset else 1.0 - frac[:, axis])
        nodes.append(flat)
        weights.append(weight)
    return CicStencil(grid, np.stack(nodes, axis=1), np.stack(weights, axis=1))
