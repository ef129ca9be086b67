import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import expit

from eof.errors import ConvergenceError, DimError, InvalidData
from eof.learn import (CLASSIFICATION, MODEL_FORMAT, REGRESSION, Model,
                       default_lambda, load_model, logistic_fit, predict,
                       ridge_fit, save_model)
from eof.learn import test_error as error_of


class TestRidgeFit:
    def test_identity_features_interpolate_as_lambda_vanishes(self):
        y = np.array([1.0, -2.0, 3.0])
        w = ridge_fit(np.eye(3), y, 1e-12).weights
        np.testing.assert_allclose(w, y, atol=1e-9)

    def test_hand_solved_one_feature(self):
        # column of ones, y = ones, lambda = 1, N = 4: (4 + 4) w = 4
        F = np.ones((4, 1))
        y = np.ones(4)
        assert ridge_fit(F, y, 1.0).weights[0] == pytest.approx(0.5)

    def test_huge_lambda_shrinks_to_zero(self):
        rng = np.random.default_rng(0)
        F = rng.standard_normal((50, 5))
        y = rng.standard_normal(50)
        w = ridge_fit(F, y, 1e12).weights
        assert np.linalg.norm(w) <= np.linalg.norm(F.T @ y) / (1e12 * 50)

    def test_nonpositive_lambda_rejected(self):
        with pytest.raises(InvalidData):
            ridge_fit(np.eye(2), np.ones(2), 0.0)

    def test_nonfinite_targets_rejected(self):
        with pytest.raises(InvalidData):
            ridge_fit(np.eye(2), np.array([1.0, np.inf]), 0.1)

    @settings(deadline=None, max_examples=100)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_matches_generic_dense_solve(self, seed):
        rng = np.random.default_rng(seed)
        N = int(rng.integers(5, 501))
        M = int(rng.integers(1, 101))
        lam = float(rng.uniform(1e-3, 1.0))
        F = rng.standard_normal((N, M))
        y = rng.standard_normal(N)
        got = ridge_fit(F, y, lam).weights
        want = np.linalg.solve(F.T @ F + lam * N * np.eye(M), F.T @ y)
        np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)

    def test_sparse_and_dense_paths_agree(self):
        rng = np.random.default_rng(7)
        F = rng.standard_normal((40, 8))
        F[F < 0.5] = 0.0
        y = rng.standard_normal(40)
        wd = ridge_fit(F, y, 0.1).weights
        ws = ridge_fit(sp.csr_matrix(F), y, 0.1).weights
        np.testing.assert_allclose(wd, ws, atol=1e-10)

    def test_residual_of_normal_equations(self):
        rng = np.random.default_rng(1)
        F = rng.standard_normal((300, 200))
        y = rng.standard_normal(300)
        lam = 0.05
        w = ridge_fit(F, y, lam).weights
        lhs = (F.T @ F + lam * 300 * np.eye(200)) @ w
        rhs = F.T @ y
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * np.linalg.norm(rhs)


class TestLogisticFit:
    def test_zero_features_zero_weights(self):
        F = np.zeros((10, 3))
        y = np.array([1.0, -1.0] * 5)
        w = logistic_fit(F, y, 0.1).weights
        np.testing.assert_array_equal(w, 0.0)

    def test_separable_scalar_matches_grid_search(self):
        X = np.array([[-1.0], [-0.5], [0.5], [1.0]])
        y = np.array([-1.0, -1.0, 1.0, 1.0])
        lam = 0.1
        model = logistic_fit(X, y, lam)

        def obj(w):
            return np.mean(np.logaddexp(0.0, -y * (X[:, 0] * w))) + lam * w * w

        grid = np.linspace(-10, 10, 200001)
        w_star = grid[np.argmin([obj(w) for w in grid])]
        assert model.weights[0] == pytest.approx(w_star, abs=1e-4)
        assert model.weights[0] > 0.0

    def test_gradient_norm_below_tol_at_return(self):
        rng = np.random.default_rng(3)
        F = rng.standard_normal((100, 6))
        y = np.sign(rng.standard_normal(100))
        lam = 0.05
        model = logistic_fit(F, y, lam, tol=1e-6)
        m = y * (F @ model.weights)
        grad = -F.T @ (y * expit(-m)) / 100 + 2 * lam * model.weights
        assert np.linalg.norm(grad) < 1e-6

    def test_huge_lambda_shrinks_to_zero(self):
        rng = np.random.default_rng(4)
        F = rng.standard_normal((50, 4))
        y = np.sign(rng.standard_normal(50))
        w = logistic_fit(F, y, 1e9).weights
        assert np.linalg.norm(w) < 1e-6

    def test_bad_labels_rejected(self):
        with pytest.raises(InvalidData):
            logistic_fit(np.eye(3), np.array([0.0, 1.0, -1.0]), 0.1)

    def test_nonconvergence_raises_with_grad_norm(self):
        rng = np.random.default_rng(5)
        F = rng.standard_normal((60, 5))
        y = np.sign(rng.standard_normal(60))
        with pytest.raises(ConvergenceError) as err:
            logistic_fit(F, y, 0.01, max_iter=1, tol=1e-14)
        assert err.value.grad_norm > 0.0

    def test_sparse_and_dense_paths_agree(self):
        rng = np.random.default_rng(6)
        F = rng.standard_normal((80, 5))
        F[np.abs(F) < 0.7] = 0.0
        y = np.sign(rng.standard_normal(80))
        wd = logistic_fit(F, y, 0.1).weights
        ws = logistic_fit(sp.csr_matrix(F), y, 0.1).weights
        np.testing.assert_allclose(wd, ws, atol=1e-8)


class TestPredictAndError:
    def test_perfect_predictions_zero_error(self):
        Z = np.eye(4)
        y = np.array([1.0, 2.0, 3.0, 4.0])
        model = Model(y, task=REGRESSION)
        assert error_of(model, Z, y) == 0.0

    def test_sign_zero_breaks_toward_plus_one(self):
        model = Model(np.zeros(2), task=CLASSIFICATION)
        Z = np.zeros((4, 2))
        y = np.array([1.0, 1.0, -1.0, -1.0])
        assert error_of(model, Z, y) == 0.5

    def test_hand_three_point_mse(self):
        # predictions (1, 2, 3) vs targets (0, 2, 6): mean of (1, 0, 9)
        model = Model(np.array([1.0]), task=REGRESSION)
        Z = np.array([[1.0], [2.0], [3.0]])
        y = np.array([0.0, 2.0, 6.0])
        assert error_of(model, Z, y) == pytest.approx(10.0 / 3.0)

    def test_dim_mismatch(self):
        model = Model(np.ones(3))
        with pytest.raises(DimError):
            predict(model, np.ones((2, 2)))

    def test_default_lambda_schedule(self):
        assert default_lambda(4) == 0.5
        assert default_lambda(2000) == pytest.approx(2000 ** -0.5)


class TestModelSerialization:
    def test_round_trip(self, tmp_path):
        model = Model(np.array([1.5, -2.25, 0.0]), lam=0.3,
                      task=CLASSIFICATION, nnz_F=42)
        path = tmp_path / "model.txt"
        save_model(model, path, {"kernel": "laplace"})
        back = load_model(path)
        np.testing.assert_array_equal(back.weights, model.weights)
        assert back.lam == 0.3
        assert back.task == CLASSIFICATION
        assert back.nnz_F == 42
        assert back.feature_map["kernel"] == "laplace"

    def test_version_tag_enforced(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# some-other-format\n1.0\n")
        with pytest.raises(InvalidData):
            load_model(path)

    def test_header_carries_format_name(self, tmp_path):
        path = tmp_path / "model.txt"
        save_model(Model(np.array([1.0])), path)
        assert path.read_text().splitlines()[0] == f"# {MODEL_FORMAT}"
