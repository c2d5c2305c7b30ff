import math

import numpy as np
import pytest

from tests.helpers import random_field, sine_mode
from vnslab.errors import ConfigError, UsageError
from vnslab.spectral import (
    Grid,
    SpectralField,
    dealias,
    derive,
    friedrichs_project,
    gaussian_blob,
    heat_propagate,
    inner,
    l2_norm,
    leray_project,
    lp_norm,
    multiply,
    to_physical,
    to_spectral,
)
from vnslab.spectral.snapshot import (
    read_field_binary,
    read_field_ndjson,
    write_field_binary,
    write_field_ndjson,
)


class TestGrid:
    def test_rejects_non_power_of_two(self):
        """Resolutions must be powers of two."""
        with pytest.raises(ConfigError, match="power of two"):
            Grid(2, 12, 1.0)

    def test_rejects_dimension(self):
        """Only 2-d and 3-d boxes are supported."""
        with pytest.raises(ConfigError, match="dimension"):
            Grid(4, 16, 1.0)

    def test_nyquist_zeroed_in_wavevector_only(self, grid2):
        """First-order multipliers drop the Nyquist mode; |k|^2 keeps it."""
        nyquist = (grid2.indices[0] == -8) & (grid2.indices[1] == 0)
        assert np.all(grid2.wavevector[0][nyquist] == 0.0)
        assert np.allclose(grid2.wavenumber_squared[nyquist], 64.0)


class TestTransforms:
    def test_physical_samples_recovered(self, grid2):
        """Node samples survive a trip through coefficient space."""
        rng = np.random.default_rng(1)
        samples = rng.standard_normal(grid2.shape)
        assert np.allclose(to_physical(to_spectral(samples, grid2)), samples, atol=1e-13)

    def test_complex_samples_rejected(self, grid2):
        """Fields are real."""
        with pytest.raises(ConfigError, match="real-valued"):
            to_spectral(np.ones(grid2.shape, dtype=complex), grid2)

    def test_zero_mode_is_mean(self, grid2):
        """Coefficients are normalized so c_0 is the spatial mean."""
        field = to_spectral(np.full(grid2.shape, 2.5), grid2)
        assert field.mean[0] == pytest.approx(2.5)


class TestProjectors:
    def test_leray_is_divergence_free(self, grid2):
        """div P u = 0 for any vector field."""
        u = leray_project(random_field(grid2, 2, seed=4))
        assert l2_norm(derive(u, "div")) < 1e-12 * l2_norm(u)
        assert u.solenoidal

    def test_leray_drops_nyquist_planes(self, grid2):
        """k . P u = 0 against the full lattice symbol, Nyquist entries included."""
        u = leray_project(random_field(grid2, 2, seed=6))
        assert np.all(u.coefficients[:, ~grid2.nyquist_free] == 0)
        k = grid2.fundamental * grid2.indices.astype(float)
        assert np.max(np.abs(np.sum(k * u.coefficients, axis=0))) < 1e-14

    def test_leray_is_idempotent(self, grid3):
        """P P = P."""
        u = leray_project(random_field(grid3, 3, seed=5))
        assert np.allclose(leray_project(u).coefficients, u.coefficients, atol=1e-14)

    def test_friedrichs_is_solenoidal_ball_truncation(self, grid2):
        """J_n keeps only |k| <= n, is divergence free and is a projection."""
        u = friedrichs_project(random_field(grid2, 2, seed=7), 3.0)
        assert np.all(u.coefficients[:, grid2.wavenumber > 3.0] == 0)
        assert np.count_nonzero(u.coefficients) > 0
        assert l2_norm(derive(u, "div")) < 1e-12 * l2_norm(u)
        assert np.allclose(friedrichs_project(u, 3.0).coefficients, u.coefficients, atol=1e-15)

    def test_leray_needs_vector(self, grid2):
        with pytest.raises(UsageError, match="vector"):
            leray_project(random_field(grid2))

    def test_dealias_removes_high_modes(self, grid2):
        """The product of two modes at index 5 lands at index 10 and is removed by the 2/3 rule."""
        a = sine_mode(grid2, 5)
        product = dealias(multiply(a, a))
        kept = np.abs(product.coefficients[0]) > 1e-12
        assert np.all(3 * np.abs(grid2.indices[0][kept]) < grid2.points)


class TestDerivatives:
    def test_gradient_of_sine(self, grid2):
        """d/dx sin(x) = cos(x)."""
        z = sine_mode(grid2)
        grad = to_physical(derive(z, "grad"))
        x = grid2.coordinates[0]
        assert np.allclose(grad[0], np.cos(x), atol=1e-12)
        assert np.allclose(grad[1], 0.0, atol=1e-12)

    def test_laplacian_eigenvalue(self, grid2):
        """Delta sin(3x) = -9 sin(3x)."""
        z = sine_mode(grid2, 3)
        assert np.allclose(derive(z, "laplacian").coefficients, -9 * z.coefficients, atol=1e-12)

    def test_unknown_order(self, grid2):
        with pytest.raises(UsageError, match="unknown derivative order"):
            derive(sine_mode(grid2), "curl")


class TestHeat:
    def test_single_mode_decay(self, grid2):
        """e^{t Delta} sin(2x) = e^{-4t} sin(2x)."""
        z = sine_mode(grid2, 2)
        assert l2_norm(heat_propagate(z, 0.3)) == pytest.approx(math.exp(-1.2) * l2_norm(z), rel=1e-12)

    def test_negative_time(self, grid2):
        with pytest.raises(UsageError, match="t >= 0"):
            heat_propagate(sine_mode(grid2), -1.0)

    def test_gaussian_spreads_in_closed_form(self, grid3):
        """The heat flow maps a Gaussian of width w to the Gaussian of width sqrt(w^2 + 2t)."""
        blob = gaussian_blob(grid3, 0.4)
        later = gaussian_blob(grid3, math.sqrt(0.4 ** 2 + 2 * 0.25))
        assert np.allclose(heat_propagate(blob, 0.25).coefficients, later.coefficients, atol=1e-16)

    def test_gaussian_has_unit_mass(self, grid2):
        blob = gaussian_blob(grid2, 0.5)
        assert blob.mean[0] * grid2.measure == pytest.approx(1.0)


class TestNorms:
    def test_inner_matches_l2(self, grid2):
        z = random_field(grid2, seed=7)
        assert inner(z, z) == pytest.approx(l2_norm(z) ** 2, rel=1e-12)

    def test_quadrature_matches_parseval(self, grid2):
        """For band-limited fields the node quadrature of |z|^2 is exact."""
        z = sine_mode(grid2, 2, amplitude=3.0)
        assert lp_norm(z, 2) == pytest.approx(l2_norm(z), rel=1e-12)

    def test_lp_needs_p_at_least_one(self, grid2):
        with pytest.raises(UsageError, match="p >= 1"):
            lp_norm(sine_mode(grid2), 0.5)


class TestSnapshots:
    def test_binary_dump(self, grid2, tmp_path):
        u = leray_project(random_field(grid2, 2, seed=2))
        loaded = read_field_binary(write_field_binary(u, tmp_path / "u.vnsf"))
        assert loaded.grid == grid2
        assert np.array_equal(loaded.coefficients, u.coefficients)

    def test_ndjson_dump(self, grid2, tmp_path):
        z = sine_mode(grid2, 3)
        t, loaded = read_field_ndjson(write_field_ndjson(z, 1.5, tmp_path / "z.ndjson"), grid2, 1)
        assert t == 1.5
        assert np.allclose(loaded.coefficients, z.coefficients)

    def test_binary_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.vnsf"
        path.write_bytes(b"XXXX" + bytes(80))
        with pytest.raises(UsageError, match="not a version"):
            read_field_binary(path)

    def test_field_shape_checked(self, grid2):
        with pytest.raises(ConfigError, match="does not match"):
            SpectralField(grid2, np.zeros((1, 8, 8), dtype=complex))
