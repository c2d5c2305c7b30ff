from pathlib import Path

import numpy as np

from vnslab.spectral import Grid, SpectralField, to_spectral


def sine_mode(grid: Grid, index: int = 1, amplitude: float = 1.0) -> SpectralField:
    """amplitude * sin(index * kappa * x_0), a scalar with zero mean."""
    x = grid.coordinates[0]
    return to_spectral(amplitude * np.sin(index * grid.fundamental * x), grid)


def random_field(grid: Grid, components: int = 1, seed: int = 0) -> SpectralField:
    rng = np.random.default_rng(seed)
    shape = grid.shape if components == 1 else (components,) + grid.shape
    return to_spectral(rng.standard_normal(shape), grid)


def write_config(path: Path, **values) -> Path:
    lines = [f"{key} = {value}" for key, value in values.items()]
    path.write_text("# test configuration\n" + "\n".join(lines) + "\n", encoding="utf-8")
    return path
