"""Linear oracle: decay of a narrow Gaussian under the heat semigroup."""
import logging

import numpy as np

from vnslab.config import load_config
from vnslab.diagnostics import decay_fit
from vnslab.driver import grid_from_config
from vnslab.spectral import derive, gaussian_blob, heat_propagate, l2_norm, without_mean

log = logging.getLogger(__name__)

SAMPLES = 40
TOLERANCE = 0.05


def heat_decay(config: str, samples: int = SAMPLES) -> dict:
    cfg = load_config(config)
    grid = grid_from_config(cfg)
    z0 = without_mean(gaussian_blob(grid, cfg.oracle_width))
    lo, hi = cfg.oracle_window
    times = np.geomspace(max(lo, 1e-6), hi, int(samples))

    energy, gradient = [], []
    for t in times:
        z = heat_propagate(z0, float(t))
        energy.append(l2_norm(z) ** 2)
        gradient.append(l2_norm(derive(z, "grad")) ** 2)

    d = grid.dimension
    report = {"dimension": d, "box": grid.box, "points": grid.points, "width": cfg.oracle_width,
              "window": [float(times[0]), float(times[-1])]}
    for name, values, expected in (("l2", energy, -d / 2), ("gradient", gradient, -d / 2 - 1)):
        fit = decay_fit(times, values)
        report[name] = {
            **fit.as_dict(),
            "expected": expected,
            "matches": abs(fit.exponent - expected) <= TOLERANCE,
        }
        log.info("Heat decay %s: slope %.4f (expected %.2f)", name, fit.exponent, expected)
    return report


definition = {
    "type": "function",
    "function": {
        "name": "heat_decay",
        "description": "Fit the decay slopes of |e^{t Delta} z0|^2 and |grad e^{t Delta} z0|^2 for a narrow Gaussian on the configured grid and compare them with -d/2 and -d/2 - 1.",
        "parameters": {
            "type": "object",
            "properties": {
                "config": {"type": "string", "description": "Path to a key = value experiment file"},
                "samples": {"type": "integer", "description": "Number of geometric time samples", "default": SAMPLES},
            },
            "required": ["config"],
        },
    },
}
