import math

import pytest

from tests.helpers import write_config
from vnslab.kinetic import InitialProfile
from vnslab.spectral import Grid


@pytest.fixture
def grid2() -> Grid:
    return Grid(2, 16, 2 * math.pi)


@pytest.fixture
def grid3() -> Grid:
    return Grid(3, 16, 2 * math.pi)


@pytest.fixture
def maxwellian() -> InitialProfile:
    return InitialProfile("maxwellian", 2, 2 * math.pi, mass=0.5, width=0.6, thermal_speed=0.3)


@pytest.fixture
def fluid_config(tmp_path):
    """Pure fluid Taylor-Green run on a 16^2 grid."""
    def make(**overrides):
        values = {
            "dimension": 2,
            "points": 16,
            "box": "2pi",
            "particles": 0,
            "velocity": "taylor_green",
            "velocity_amplitude": 0.05,
            "dt": 0.01,
            "t_end": 0.05,
            "record_every": 1,
            "output_dir": tmp_path / "out",
        }
        values.update(overrides)
        return write_config(tmp_path / "fluid.env", **values)
    return make


@pytest.fixture
def coupled_config(tmp_path):
    """Maxwellian spray under a small Gaussian blob, 1024 particles on a 16^2 grid."""
    def make(**overrides):
        values = {
            "dimension": 2,
            "points": 16,
            "box": "2pi",
            "particles": 1024,
            "profile": "maxwellian",
            "particle_mass": 0.5,
            "particle_width": 0.6,
            "thermal_speed": 0.3,
            "velocity": "blob",
            "velocity_amplitude": 0.05,
            "velocity_width": 0.8,
            "dt": 0.01,
            "t_end": 0.05,
            "record_every": 1,
            "seed": 3,
            "output_dir": tmp_path / "out",
        }
        values.update(overrides)
        return write_config(tmp_path / "coupled.env", **values)
    return make
