"""Neumann eigenproblem: closed-form spectra for constant potentials, the
steady profile, norming constants, and the data-container contracts."""

import numpy as np
import pytest

from fracspec.errors import DegeneratePotentialError, GridError, ParameterError
from fracspec.sturm import Potential, SpectralData, eigen_solve, neumann_steady


class TestPotential:
    def test_constant(self):
        p = Potential.constant(-2.0, 50)
        assert p.j_cells == 50
        assert np.all(p.samples == -2.0)
        assert p(0.37) == -2.0

    def test_piecewise_two_values(self):
        p = Potential.piecewise([-0.5, -1.5], 200)
        assert p(0.25) == -0.5
        assert p(0.75) == -1.5
        # the boundary sample takes the right piece
        assert p.samples[100] == -1.5

    def test_from_callable_interpolates(self):
        p = Potential.from_callable(lambda x: -(1.0 + x), 100)
        assert p(0.5) == pytest.approx(-1.5, abs=1e-12)

    def test_positive_sample_rejected(self):
        with pytest.raises(ParameterError):
            Potential(np.array([-1.0, -1.0, 0.5, -1.0, -1.0]))

    def test_zero_potential_degenerate(self):
        with pytest.raises(DegeneratePotentialError):
            Potential(np.zeros(11))

    def test_too_few_samples(self):
        with pytest.raises(ParameterError):
            Potential(np.array([-1.0, -1.0]))


class TestEigenSolve:
    def test_cosine_spectrum(self, pot_minus_one):
        # p == -1: lambda_n = (n-1)^2 pi^2 + 1, cosine eigenfunctions
        spec = eigen_solve(pot_minus_one, 4, refine=3)
        n = np.arange(1, 5)
        lam_true = (n - 1) ** 2 * np.pi**2 + 1.0
        assert np.max(np.abs(spec.lambdas - lam_true) / lam_true) <= 1e-6

    def test_norming_constants(self, spec_m1_10):
        rho_true = np.full(10, 0.5)
        rho_true[0] = 1.0
        assert np.max(np.abs(spec_m1_10.norming - rho_true)) <= 1e-6

    def test_orthogonality(self, spec_m1_10):
        assert spec_m1_10.orthogonality_residual() <= 1e-8

    def test_boundary_normalization_exact(self, spec_m1_10):
        assert np.all(spec_m1_10.eigenfunctions[:, -1] == 1.0)

    @pytest.mark.parametrize("c", [2.0, 7.5])
    def test_constant_shift_ground_mode(self, c):
        spec = eigen_solve(Potential.constant(-c, 200), 1, refine=3)
        assert spec.lambdas[0] == pytest.approx(c, rel=1e-8)
        assert spec.norming[0] == pytest.approx(1.0, abs=1e-8)
        assert np.max(np.abs(spec.eigenfunctions[0] - 1.0)) <= 1e-8

    def test_weyl_growth(self, spec_m1_64):
        n = np.arange(1, 65)
        ratio = spec_m1_64.lambdas / ((n - 1) ** 2 * np.pi**2 + 1.0)
        assert np.max(np.abs(ratio - 1.0)) <= 1e-3

    def test_eigenfunction_interior_values(self, spec_m1_10):
        # phi_n(x) = cos((n-1) pi x) / cos((n-1) pi)
        x = spec_m1_10.grid
        for i in (1, 3, 6):
            ref = np.cos(i * np.pi * x) / np.cos(i * np.pi)
            assert np.max(np.abs(spec_m1_10.eigenfunctions[i] - ref)) <= 1e-5

    def test_resolution_guard(self):
        with pytest.raises(GridError):
            eigen_solve(Potential.constant(-1.0, 40), 128, refine=2)

    def test_piecewise_spectrum_between_constant_bounds(self):
        # eigenvalues of the two-piece well sit between the constant shifts
        spec = eigen_solve(Potential.piecewise([-0.5, -1.5], 200), 3, refine=2)
        lo = eigen_solve(Potential.constant(-0.5, 200), 3, refine=2)
        hi = eigen_solve(Potential.constant(-1.5, 200), 3, refine=2)
        assert np.all(spec.lambdas > lo.lambdas - 1e-9)
        assert np.all(spec.lambdas < hi.lambdas + 1e-9)


class TestSpectralData:
    def test_weights(self, spec_m1_10):
        w = spec_m1_10.weights
        assert np.allclose(w, 1.0 / (spec_m1_10.lambdas * spec_m1_10.norming))

    def test_tail_estimate_decreases_with_modes(self, pot_minus_one, spec_m1_10, spec_m1_64):
        t10 = spec_m1_10.tail_estimate()
        t64 = spec_m1_64.tail_estimate()
        assert 0.0 < t64 < t10

    def test_tail_estimate_tracks_true_tail(self, spec_m1_10, spec_m1_64):
        # the 10-mode tail should roughly equal the weight mass in modes 11..64
        measured = float(np.sum(spec_m1_64.weights[10:]))
        est = spec_m1_10.tail_estimate() - spec_m1_64.tail_estimate()
        assert abs(est - measured) / measured <= 0.05

    def test_serialization_round_trip(self, spec_m1_10):
        clone = SpectralData.from_dict(spec_m1_10.to_dict())
        assert np.array_equal(clone.lambdas, spec_m1_10.lambdas)
        assert np.array_equal(clone.norming, spec_m1_10.norming)
        assert np.array_equal(clone.eigenfunctions, spec_m1_10.eigenfunctions)

    def test_validation_shape(self):
        with pytest.raises(ParameterError):
            SpectralData(
                lambdas=np.array([1.0, 2.0]),
                eigenfunctions=np.ones((3, 5)),
                norming=np.array([1.0, 0.5]),
                grid=np.linspace(0.0, 1.0, 5),
            )

    def test_validation_ordering(self):
        with pytest.raises(ParameterError):
            SpectralData(
                lambdas=np.array([2.0, 1.0]),
                eigenfunctions=np.ones((2, 5)),
                norming=np.array([1.0, 0.5]),
                grid=np.linspace(0.0, 1.0, 5),
            )


class TestNeumannSteady:
    def test_closed_form_minus_one(self, pot_minus_one):
        w = neumann_steady(pot_minus_one)
        x = pot_minus_one.grid
        ref = np.cosh(x) / np.sinh(1.0)
        assert np.max(np.abs(w - ref)) <= 1e-9

    def test_closed_form_minus_four(self):
        p = Potential.constant(-4.0, 200)
        w = neumann_steady(p)
        ref = np.cosh(2.0 * p.grid) / (2.0 * np.sinh(2.0))
        assert np.max(np.abs(w - ref)) <= 1e-9

    def test_matches_spectral_series(self, pot_minus_one, spec_m1_64):
        # sum phi_n(x)/(lambda_n rho_n) converges to the steady profile
        series = spec_m1_64.weights @ spec_m1_64.eigenfunctions
        w = neumann_steady(pot_minus_one)
        # truncation tail is ~3e-3; the series must agree within that scale
        assert np.max(np.abs(series - w)) <= 2.0 * spec_m1_64.tail_estimate()
