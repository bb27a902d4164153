"""Ground-truth-index estimation: constraints, recovery, and fit invariants."""

import numpy as np
import pytest

from confmetrics import ConfusionMatrix, GtiError, fit_gti, gti_class
from oracles import M2, gti_expected, gti_sample

Q = np.array([0.3, 0.3, 0.2, 0.2])
A = np.array([0.4, 0.3, 0.2, 0.1])
LABELS4 = ("a", "b", "c", "d")


class TestPreconditions:
    def test_two_classes_rejected(self):
        m = ConfusionMatrix(("A", "B"), [[3, 1], [2, 4]])
        with pytest.raises(GtiError, match="three classes"):
            fit_gti(m)

    def test_perfect_classification_rejected(self):
        m = ConfusionMatrix(("A", "B", "C"), np.diag([3.0, 4.0, 5.0]))
        with pytest.raises(GtiError, match="perfect classification"):
            fit_gti(m)

    def test_degenerate_class_rejected(self):
        cells = [[5, 1, 1], [0, 5, 1], [0, 1, 5]]  # class 'A' has an empty off-diagonal column
        m = ConfusionMatrix(("A", "B", "C"), cells)
        with pytest.raises(GtiError, match="degenerate for class 'A'"):
            fit_gti(m)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            fit_gti(M2, tolerance=0.0)
        with pytest.raises(ValueError):
            fit_gti(M2, max_iterations=0)


class TestRecovery:
    @pytest.mark.parametrize("theta", [0.3, 0.6, 0.9])
    def test_exact_model_matrix_recovers_theta(self, theta):
        m = ConfusionMatrix(LABELS4, gti_expected(theta, Q, A, 100_000))
        fit = fit_gti(m)
        assert fit.converged
        assert fit.theta_overall == pytest.approx(theta, abs=1e-6)
        for t in fit.theta_class:
            assert t == pytest.approx(theta, abs=1e-6)

    def test_sampled_replicates_recover_theta(self):
        rng = np.random.default_rng(606)
        expected = gti_expected(0.6, Q, A, 100_000)
        for _ in range(5):
            fit = fit_gti(gti_sample(rng, expected))
            assert fit.converged
            assert abs(fit.theta_overall - 0.6) < 0.02
            assert all(0.55 <= t <= 0.65 for t in fit.theta_class)

    def test_class_specific_thetas(self):
        thetas = (0.3, 0.5, 0.7, 0.9)
        rng = np.random.default_rng(607)
        expected = gti_expected(np.array(thetas), Q, A, 100_000)
        for _ in range(5):
            fit = fit_gti(gti_sample(rng, expected))
            for i, theta in enumerate(thetas):
                assert gti_class(fit, i).value == pytest.approx(theta, abs=0.03)

    def test_clamped_class(self):
        # a diagonal cell far below its quasi-independence extrapolation
        cells = np.array([[1, 10, 10], [10, 30, 10], [10, 10, 30]], dtype=float)
        fit = fit_gti(ConfusionMatrix(("A", "B", "C"), cells))
        assert fit.theta_class[0] == 0.0


class TestFitDiagnostics:
    def test_unconverged_flag(self):
        fit = fit_gti(M2, tolerance=1e-15, max_iterations=1)
        assert not fit.converged
        assert fit.residual > 1e-15
        with pytest.raises(GtiError, match="did not converge"):
            gti_class(fit, 0)
        assert gti_class(fit, 0, allow_unconverged=True).defined

    def test_off_diagonal_mass_preserved(self):
        fit = fit_gti(M2, tolerance=1e-9)
        assert fit.converged
        off = fit.fitted_random.copy()
        np.fill_diagonal(off, 0.0)
        observed = M2.cells.copy()
        np.fill_diagonal(observed, 0.0)
        assert off.sum() == pytest.approx(observed.sum(), abs=M2.k**2 * 1e-9)

    def test_off_diagonal_cells_match_on_quasi_independent_data(self):
        m = ConfusionMatrix(LABELS4, gti_expected(0.6, Q, A, 100_000))
        fit = fit_gti(m, tolerance=1e-9)
        off_fit = fit.fitted_random.copy()
        off_obs = m.cells.copy()
        np.fill_diagonal(off_fit, 0.0)
        np.fill_diagonal(off_obs, 0.0)
        assert np.abs(off_fit - off_obs).max() < 1e-5

    def test_theta_bounds(self):
        rng = np.random.default_rng(608)
        for _ in range(20):
            cells = rng.integers(1, 50, size=(4, 4)).astype(float)
            fit = fit_gti(ConfusionMatrix(LABELS4, cells))
            assert 0.0 <= fit.theta_overall <= 1.0
            assert all(0.0 <= t <= 1.0 for t in fit.theta_class)

    def test_scale_free(self):
        rng = np.random.default_rng(609)
        cells = rng.integers(1, 50, size=(4, 4)).astype(float)
        base = fit_gti(ConfusionMatrix(LABELS4, cells))
        for c in (2.0, 10.0, 0.5):
            scaled = fit_gti(ConfusionMatrix(LABELS4, cells * c))
            assert scaled.theta_overall == pytest.approx(base.theta_overall, abs=1e-9)
            for s, b in zip(scaled.theta_class, base.theta_class):
                assert s == pytest.approx(b, abs=1e-9)

    def test_label_permutation_permutes_thetas(self):
        rng = np.random.default_rng(610)
        cells = rng.integers(1, 50, size=(4, 4)).astype(float)
        base = fit_gti(ConfusionMatrix(LABELS4, cells))
        perm = [2, 0, 3, 1]
        permuted_labels = tuple(LABELS4[p] for p in perm)
        permuted = fit_gti(ConfusionMatrix(permuted_labels, cells[perm][:, perm]))
        assert permuted.theta_overall == pytest.approx(base.theta_overall, abs=1e-9)
        for i, p in enumerate(perm):
            assert permuted.theta_class[i] == pytest.approx(base.theta_class[p], abs=1e-9)

    def test_gti_class_index_range(self):
        fit = fit_gti(M2)
        with pytest.raises(IndexError):
            gti_class(fit, 3)
