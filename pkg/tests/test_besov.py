import math

import numpy as np
import pytest

from tests.helpers import random_field, sine_mode
from vnslab.besov import (
    besov_norm,
    chemin_lerner_norm,
    dyadic_decompose,
    dyadic_pieces,
    embedding_ratio,
    gradient_theta,
    heat_characterization_norm,
    heat_series,
    interpolation_check,
    l2_theta,
    lebesgue_time_norm,
    lorentz_norm,
    maxreg_ratio,
    product_ratio,
    rearrange,
    rearranged_norm,
    sobolev_norm,
    time_weights,
)
from vnslab.errors import PreconditionError, UsageError
from vnslab.spectral import (
    Grid,
    SpectralField,
    dealias,
    derive,
    gaussian_blob,
    heat_propagate,
    l2_norm,
    lp_norm,
    without_mean,
)


class TestDyadic:
    def test_shells_partition_energy(self, grid3):
        """sum_j |Delta_j z|^2 = |z|^2 for a zero-mean field."""
        z = without_mean(random_field(grid3, seed=1))
        spectrum = dyadic_decompose(z)
        assert np.sum(spectrum.shell_norms ** 2) == pytest.approx(l2_norm(z) ** 2, rel=1e-12)

    def test_pieces_reconstruct(self, grid2):
        z = without_mean(random_field(grid2, seed=2))
        total = sum((piece for _, piece in dyadic_pieces(z)), SpectralField.zeros(grid2))
        assert np.allclose(total.coefficients, z.coefficients, atol=1e-15)

    def test_nonzero_mean_rejected(self, grid2):
        with pytest.raises(PreconditionError, match="zero mean"):
            dyadic_decompose(random_field(grid2, seed=3))

    def test_unit_wavenumber_in_shell_zero(self, grid2):
        """|k| = 1 sits in shell 0, so every Besov norm equals the L2 norm."""
        z = sine_mode(grid2, 1)
        spectrum = dyadic_decompose(z)
        for s in (-1.5, 0.0, 2.0):
            assert besov_norm(spectrum, s, math.inf) == pytest.approx(l2_norm(z), rel=1e-12)

    def test_shell_weight(self, grid2):
        """|k| = 3 sits in shell 2 (2 < 3 <= 4), weight 2^{2s}."""
        z = sine_mode(grid2, 3)
        assert besov_norm(dyadic_decompose(z), 1.0, 1) == pytest.approx(4 * l2_norm(z), rel=1e-12)

    def test_summation_exponent_checked(self, grid2):
        with pytest.raises(UsageError, match="summation exponent"):
            besov_norm(dyadic_decompose(sine_mode(grid2)), 0.0, 3)

    def test_sobolev_of_single_mode(self, grid2):
        z = sine_mode(grid2, 3)
        assert sobolev_norm(z, 1.5) == pytest.approx(3 ** 1.5 * l2_norm(z), rel=1e-12)

    @pytest.mark.parametrize("points", [16, 32])
    @pytest.mark.parametrize("s", [-1.0, 0.5, 1.5])
    def test_besov_two_two_matches_sobolev(self, points, s):
        """Sharp shells put |k| within a factor two of 2^j, so B^s_{2,2} and H^s agree up to 2^s."""
        z = without_mean(random_field(Grid(2, points, 2 * math.pi), seed=21))
        ratio = besov_norm(dyadic_decompose(z), s, 2) / sobolev_norm(z, s)
        low, high = sorted((1.0, 2.0 ** s))
        assert low - 1e-12 <= ratio <= high + 1e-12

    @pytest.mark.parametrize("points", [16, 32])
    @pytest.mark.parametrize("r", [1, 2, math.inf])
    def test_gradient_shifts_regularity_by_one(self, points, r):
        """|grad z|_{B^{s-1}_{2,r}} lies between half and all of |z|_{B^s_{2,r}}."""
        z = without_mean(dealias(random_field(Grid(2, points, 2 * math.pi), seed=22)))
        ratio = (besov_norm(dyadic_decompose(derive(z, "grad")), -0.5, r)
                 / besov_norm(dyadic_decompose(z), 0.5, r))
        assert 0.5 - 1e-12 <= ratio <= 1.0 + 1e-12

    def test_heat_series_skips_transforms(self, grid2):
        """heat_series agrees with decomposing e^{t Delta} z."""
        z = without_mean(random_field(grid2, seed=8))
        times = [0.0, 0.1, 0.7]
        for t, spectrum in zip(times, heat_series(z, times)):
            direct = dyadic_decompose(heat_propagate(z, t))
            assert np.allclose(spectrum.shell_norms, direct.shell_norms, rtol=1e-12, atol=1e-300)


class TestTimeNorms:
    def test_trapezoid_weights(self):
        assert np.allclose(time_weights(4, 0.5), [0.25, 0.5, 0.5, 0.25])
        assert np.allclose(time_weights(1, 0.5), [0.5])

    def test_weights_need_positive_step(self):
        with pytest.raises(UsageError, match="positive"):
            time_weights(3, 0.0)

    def test_l1_in_time_commutes_with_l1_shells(self, grid2):
        """rho = r = 1: the Chemin-Lerner and Lebesgue norms coincide."""
        z = without_mean(random_field(grid2, seed=9))
        series = heat_series(z, np.linspace(0, 1, 21))
        a = chemin_lerner_norm(series, 1, 0.5, 1, 0.05)
        b = lebesgue_time_norm(series, 1, 0.5, 1, 0.05)
        assert a == pytest.approx(b, rel=1e-12)

    def test_chemin_lerner_below_lebesgue(self, grid2):
        """With r = inf the time integral inside the sup is smaller."""
        z = without_mean(random_field(grid2, seed=10))
        series = heat_series(z, np.linspace(0, 1, 21))
        assert chemin_lerner_norm(series, 1, 0.0, math.inf, 0.05) <= \
            lebesgue_time_norm(series, 1, 0.0, math.inf, 0.05) * (1 + 1e-12)

    def test_mixed_grids_rejected(self, grid2):
        other = Grid(2, 32, 2 * math.pi)
        series = [dyadic_decompose(sine_mode(grid2, 1)), dyadic_decompose(sine_mode(other, 1))]
        with pytest.raises(UsageError, match="different grids"):
            chemin_lerner_norm(series, 1, 0.0, 1, 0.1)

    def test_maximal_regularity_of_unit_mode(self, grid2):
        """For |k| = 1 the ratio is int_0^T e^{-t} dt."""
        ratio = maxreg_ratio(sine_mode(grid2, 1), 0.0, 1, 10.0)
        assert ratio == pytest.approx(1 - math.exp(-10.0), abs=1e-4)

    def test_maximal_regularity_stable_in_horizon(self, grid2):
        """The ratio grows with T but stays below 4 for any T."""
        z = without_mean(random_field(grid2, seed=23))
        ratios = [maxreg_ratio(z, 0.0, 1, horizon) for horizon in (0.1, 1.0, 10.0)]
        assert all(0 < ratio <= 4 for ratio in ratios)
        assert ratios == sorted(ratios)
        assert ratios[0] >= 0.5 * ratios[-1]

    def test_heat_norm_of_single_mode(self, grid2):
        """sup_t t^{3/4} e^{-9t} |z| is reached at t = 1/12."""
        z = sine_mode(grid2, 3)
        peak = (1 / 12) ** 0.75 * math.exp(-0.75) * l2_norm(z)
        measured = heat_characterization_norm(z, 1.5)
        assert measured <= peak * (1 + 1e-12)
        assert measured == pytest.approx(peak, rel=1e-3)

    def test_heat_norm_tracks_besov_under_refinement(self):
        """The heat-flow and dyadic B^{-3/2}_{2,inf} norms keep the same ratio on a finer grid."""
        def ratio(points):
            z = without_mean(gaussian_blob(Grid(2, points, 2 * math.pi), 0.7))
            return heat_characterization_norm(z, 1.5) / besov_norm(dyadic_decompose(z), -1.5, math.inf)

        assert ratio(16) == pytest.approx(ratio(32), rel=1e-3)


class TestLorentz:
    def test_diagonal_exponents_give_lp(self, grid2):
        """L^{p,p} = L^p."""
        z = sine_mode(grid2, 2, amplitude=1.7)
        assert lorentz_norm(z, 2, 2) == pytest.approx(lp_norm(z, 2), rel=1e-12)

    def test_constant_field(self, grid2):
        """|c|_{L^{p,1}} = c p |Omega|^{1/p}."""
        coefficients = np.zeros((1,) + grid2.shape, dtype=complex)
        coefficients[0, 0, 0] = 2.0
        z = SpectralField(grid2, coefficients)
        assert lorentz_norm(z, 3, 1) == pytest.approx(2.0 * 3 * grid2.measure ** (1 / 3), rel=1e-12)

    def test_rearrangement_is_nonincreasing(self, grid2):
        f = rearrange(random_field(grid2, seed=11))
        assert np.all(np.diff(f.values) <= 0)
        assert f.measure == pytest.approx(grid2.measure)

    def test_exponent_range(self, grid2):
        f = rearrange(sine_mode(grid2))
        with pytest.raises(UsageError, match="p must lie"):
            rearranged_norm(f, 1.0, 1)
        with pytest.raises(UsageError, match="r must be"):
            rearranged_norm(f, 2.0, 0.5)


class TestInequalities:
    def test_theta_values(self):
        """sigma = 3/2: the L2 chain has theta 3/5, the gradient chain 5/7."""
        assert l2_theta(1.5) == pytest.approx(0.6)
        assert gradient_theta(1.5) == pytest.approx(5 / 7)

    def test_decay_exponents(self, grid3):
        report = interpolation_check(without_mean(random_field(grid3, seed=12)), 1.5)
        assert report.l2_decay_exponent == pytest.approx(1.5)
        assert report.gradient_decay_exponent == pytest.approx(2.5)
        assert report.l2_ratio > 0 and report.gradient_ratio > 0

    def test_zero_field_rejected(self, grid2):
        with pytest.raises(UsageError, match="zero field"):
            interpolation_check(SpectralField.zeros(grid2), 1.5)

    def test_embedding_ratio_stable_under_refinement(self):
        """The L1 -> B^{-d/2}_{2,inf} ratio of a smooth bump does not depend on N."""
        coarse = embedding_ratio(gaussian_blob(Grid(2, 16, 2 * math.pi), 0.7))
        fine = embedding_ratio(gaussian_blob(Grid(2, 32, 2 * math.pi), 0.7))
        assert coarse == pytest.approx(fine, rel=1e-2)

    def test_interpolation_ratios_stable_under_refinement(self):
        def report(points):
            return interpolation_check(without_mean(gaussian_blob(Grid(2, points, 2 * math.pi), 0.7)), 1.5)

        coarse, fine = report(16), report(32)
        assert coarse.l2_ratio == pytest.approx(fine.l2_ratio, rel=1e-4)
        assert coarse.gradient_ratio == pytest.approx(fine.gradient_ratio, rel=1e-4)

    @pytest.mark.parametrize("points", [16, 32])
    @pytest.mark.parametrize("s, expected", [
        (0.5, (1 + math.sqrt(5)) / 2 / (4 * math.pi)),
        (1.0, (0.5 + math.sqrt(5)) / (4 * math.sqrt(2) * math.pi)),
    ])
    def test_product_ratio_of_modes(self, points, s, expected):
        """(sin x + sin 2x / 2) sin 2x puts cos x in shell 0 and cos 3x, cos 4x in shell 2."""
        grid = Grid(2, points, 2 * math.pi)
        a = sine_mode(grid, 1) + sine_mode(grid, 2, 0.5)
        b = sine_mode(grid, 2)
        assert product_ratio(a, b, s) == pytest.approx(expected, rel=1e-10)
