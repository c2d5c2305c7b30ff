import math

import numpy as np
import pytest

from tests.helpers import random_field
from vnslab.errors import ConfigError, UsageError
from vnslab.fluid import (
    FluidState,
    duhamel_split,
    predictor,
    pressure_solve,
    rhs,
    step,
    stokes_residual,
    taylor_green,
    taylor_green_pressure,
    truncate,
    with_derivatives,
)
from vnslab.kinetic import brinkman_force, deposit, sample_initial
from vnslab.spectral import derive, l2_norm, linf_norm


def relative_gap(a, b) -> float:
    return l2_norm(a - b) / l2_norm(b)


class TestTaylorGreen:
    def test_solenoidal(self, grid2):
        u = taylor_green(grid2, 0.5)
        assert u.solenoidal
        assert l2_norm(derive(u, "div")) < 1e-12

    def test_if_rk2_decays_exactly(self, grid2):
        """Convection of Taylor-Green is a gradient, so the integrating factor is exact."""
        state = FluidState(u=taylor_green(grid2, 0.5))
        for _ in range(20):
            state = step(state, 0.01)
        assert relative_gap(state.u, taylor_green(grid2, 0.5, t=0.2)) < 1e-12

    def test_imex_cn_second_order(self, grid2):
        errors = []
        for dt in (0.05, 0.025):
            state = FluidState(u=taylor_green(grid2, 0.5))
            for _ in range(round(1.0 / dt)):
                state = step(state, dt, scheme="imex-cn")
            errors.append(relative_gap(state.u, taylor_green(grid2, 0.5, t=1.0)))
        assert 3.5 < errors[0] / errors[1] < 4.5

    def test_pressure(self, grid2):
        """P = A^2/4 (cos 2kx + cos 2ky)."""
        state = FluidState(u=taylor_green(grid2, 0.5))
        pressure = pressure_solve(state, None)
        assert relative_gap(pressure, taylor_green_pressure(grid2, 0.5)) < 1e-12

    def test_time_derivative(self, grid2):
        """u_t = Delta u = -2 u for the unit-wavenumber vortex."""
        u = taylor_green(grid2, 0.5)
        assert relative_gap(rhs(FluidState(u=u), None), u * -2.0) < 1e-12


class TestStep:
    def test_stays_solenoidal(self, grid3):
        u = truncate(random_field(grid3, 3, seed=1)) * 0.1
        state = step(FluidState(u=u), 0.01)
        assert l2_norm(derive(state.u, "div")) < 1e-12 * l2_norm(state.u)
        assert abs(state.u.mean).max() == 0.0

    def test_cutoff_respected(self, grid2):
        u = truncate(random_field(grid2, 2, seed=2)) * 0.1
        state = step(FluidState(u=u), 0.01, cutoff=2.5)
        outside = grid2.wavenumber > 2.5
        assert np.all(state.u.coefficients[:, outside] == 0)

    def test_cfl_number(self, grid2):
        state = step(FluidState(u=taylor_green(grid2, 0.5)), 0.01)
        assert state.cfl_number == pytest.approx(linf_norm(state.u) * 0.01 / grid2.spacing)
        assert state.t == pytest.approx(0.01)

    def test_positive_step(self, grid2):
        with pytest.raises(UsageError, match="dt must be positive"):
            step(FluidState(u=taylor_green(grid2)), -0.1)

    def test_unknown_scheme(self, grid2):
        with pytest.raises(ConfigError, match="unknown time scheme"):
            step(FluidState(u=taylor_green(grid2)), 0.1, scheme="euler")

    @pytest.mark.parametrize("scheme", ["if-rk2", "imex-cn"])
    def test_stage_inputs_reproduce_closure_step(self, grid2, maxwellian, scheme):
        """Transport and drag fed at u and at its predictor give the self-advected step back."""
        state = FluidState(u=truncate(random_field(grid2, 2, seed=3)) * 0.1)
        drag = brinkman_force(sample_initial(maxwellian, 1024, seed=1), grid2)
        guess = predictor(state, 0.01, brinkman=drag, scheme=scheme)
        staged = step(state, 0.01, forcing=(drag(state.u), drag(guess)), advecting=(state.u, guess),
                      scheme=scheme)
        closure = step(state, 0.01, brinkman=drag, scheme=scheme)
        assert np.array_equal(staged.u.coefficients, closure.u.coefficients)


class TestStokes:
    def test_residual_vanishes(self, grid2, maxwellian):
        """-Delta u + grad P + u_t = F holds to round-off with the solver's own u_t."""
        u = taylor_green(grid2, 0.3)
        ens = sample_initial(maxwellian, 1024, seed=0)
        moments = deposit(ens, grid2, u)
        state = with_derivatives(FluidState(u=u), moments)
        assert stokes_residual(state, moments) < 1e-12

    def test_grid_mismatch(self, grid2, grid3, maxwellian):
        ens = sample_initial(maxwellian, 1024, seed=0)
        with pytest.raises(ConfigError, match="different grids"):
            rhs(FluidState(u=taylor_green(grid3)), deposit(ens, grid2))


class TestDuhamel:
    def test_linear_forced_history_has_no_remainder(self, grid2):
        """Without the nonlinearity the splitting reproduces the solver exactly."""
        u0 = truncate(random_field(grid2, 2, seed=3)) * 0.1
        forcing = truncate(random_field(grid2, 2, seed=4)) * 0.05
        dt = 0.01
        state = FluidState(u=u0)
        history = [u0]
        for _ in range(10):
            state = step(state, dt, forcing=forcing, nonlinear=False)
            history.append(state.u)
        split = duhamel_split(history, [forcing] * len(history), u0, dt)
        assert split.remainder_norms.sup_besov <= 1e-10 * split.data_norms.sup_besov
        assert split.smallness == pytest.approx(split.u0_sobolev + split.source_l43_l2)
        assert split.times[-1] == pytest.approx(0.1)

    def test_length_mismatch(self, grid2):
        u0 = taylor_green(grid2)
        with pytest.raises(UsageError, match="Brinkman history has"):
            duhamel_split([u0, u0], [u0], u0, 0.1)

    def test_gaps_rejected(self, grid2):
        u0 = taylor_green(grid2)
        with pytest.raises(UsageError, match="gaps"):
            duhamel_split([u0, None], [u0, u0], u0, 0.1)

    def test_free_decay_norms(self, grid2):
        """Heat flow alone: the L~^1 B^{s+2} norm is bounded by the data norm (times 4)."""
        u0 = taylor_green(grid2, 0.5)
        history = [u0]
        state = FluidState(u=u0)
        for _ in range(50):
            state = step(state, 0.02, nonlinear=False)
            history.append(state.u)
        split = duhamel_split(history, [u0 * 0.0] * len(history), u0, 0.02)
        assert split.data_norms.l1_besov <= 4 * split.data_norms.sup_besov
        assert math.isfinite(split.quadratic_constant)
