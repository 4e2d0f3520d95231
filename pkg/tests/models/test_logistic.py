"""Tests for softmax logistic regression."""
import math
import warnings

import numpy as np
import pytest
from scipy import sparse

from src.core.exceptions import ConvergenceWarning, TrainingError
from src.features.vectors import FeatureVector
from src.models.config import TrainConfig
from src.models.logistic import (
    LogRegModel,
    loss_and_gradient,
    pack,
    predict_logreg,
    predict_logreg_batch,
    resolve_class_weights,
    train_logreg,
)


def _random_problem(rng, n_rows, n_features, n_classes):
    dense = rng.uniform(0.0, 2.0, size=(n_rows, n_features))
    dense[rng.uniform(size=dense.shape) < 0.3] = 0.0
    classes = [f"c{k}" for k in range(n_classes)]
    labels = classes + [str(c) for c in rng.choice(classes, size=n_rows - n_classes)]
    return sparse.csr_matrix(dense), labels, classes


def _clustered_problem(seed=0, n_rows=40):
    """Three noisy clusters over six non-negative features."""
    rng = np.random.default_rng(seed)
    centers = np.array([[2, 0, 0, 1, 0, 0], [0, 2, 0, 0, 1, 0], [0, 0, 2, 0, 0, 1]], dtype=float)
    labels = [["a", "b", "c"][i % 3] for i in range(n_rows)]
    rows = np.abs(centers[[i % 3 for i in range(n_rows)]] + rng.normal(scale=0.8, size=(n_rows, 6)))
    return sparse.csr_matrix(rows), labels


class TestLossAndGradient:
    """Test suite for the softmax objective."""

    def test_loss_at_zero_is_n_log_k(self):
        """At zero parameters the loss is N ln K."""
        rng = np.random.default_rng(0)
        X, y, classes = _random_problem(rng, 9, 4, 3)
        loss, _ = loss_and_gradient(np.zeros(3 * 5), X, y, TrainConfig(penalty="none"), classes)
        assert loss == pytest.approx(9 * math.log(3))

    def test_gradient_matches_finite_differences(self):
        """The analytic gradient should match central differences."""
        rng = np.random.default_rng(1)
        step = 1e-5
        for trial in range(120):
            n_classes = int(rng.integers(2, 5))
            n_features = int(rng.integers(2, 6))
            n_rows = int(rng.integers(n_classes, 9))
            X, y, classes = _random_problem(rng, n_rows, n_features, n_classes)
            penalty = ["none", "l2", "l1"][trial % 3]
            weights = {label: float(rng.uniform(0.5, 2.0)) for label in classes}
            config = TrainConfig(penalty=penalty, C=float(rng.uniform(0.1, 10.0)), class_weights=weights)

            # Weights bounded away from zero keep the L1 term differentiable
            magnitudes = rng.uniform(0.1, 1.0, size=n_classes * (n_features + 1))
            params = magnitudes * rng.choice([-1.0, 1.0], size=magnitudes.size)

            _, grad = loss_and_gradient(params, X, y, config, classes)
            numeric = np.empty_like(params)
            for j in range(params.size):
                bump = np.zeros_like(params)
                bump[j] = step
                upper = loss_and_gradient(params + bump, X, y, config, classes)[0]
                lower = loss_and_gradient(params - bump, X, y, config, classes)[0]
                numeric[j] = (upper - lower) / (2 * step)

            error = np.linalg.norm(grad - numeric) / max(1.0, np.linalg.norm(grad))
            assert error <= 1e-5, (trial, penalty, error)

    def test_l2_adds_half_squared_norm_over_c(self):
        """l2 adds ||W||^2 / (2C)."""
        rng = np.random.default_rng(2)
        X, y, classes = _random_problem(rng, 8, 3, 2)
        W = rng.normal(size=(2, 3))
        params = pack(W, rng.normal(size=2))
        plain, _ = loss_and_gradient(params, X, y, TrainConfig(penalty="none"), classes)
        penalized, _ = loss_and_gradient(params, X, y, TrainConfig(penalty="l2", C=0.5), classes)
        assert penalized - plain == pytest.approx(0.5 / 0.5 * np.sum(W * W))

    def test_bias_is_not_penalized(self):
        """Penalties leave the bias alone."""
        rng = np.random.default_rng(3)
        X, y, classes = _random_problem(rng, 6, 3, 2)
        params = pack(np.zeros((2, 3)), np.array([3.0, -3.0]))
        plain, _ = loss_and_gradient(params, X, y, TrainConfig(penalty="none"), classes)
        for penalty in ("l1", "l2"):
            loss, _ = loss_and_gradient(params, X, y, TrainConfig(penalty=penalty, C=0.01), classes)
            assert loss == pytest.approx(plain)

    def test_class_weight_scales_rows(self):
        """A class weight scales that class's rows."""
        X = sparse.csr_matrix(np.eye(2))
        config = TrainConfig(penalty="none", class_weights={"a": 3.0})
        loss, _ = loss_and_gradient(np.zeros(6), X, ["a", "b"], config)
        assert loss == pytest.approx(4 * math.log(2))


class TestTrainLogreg:
    """Test suite for train_logreg."""

    def test_random_starts_agree_under_l2(self):
        """The l2 objective is convex, so random starts should agree."""
        X, y = _clustered_problem()
        base = TrainConfig(penalty="l2", C=1.0, tolerance=1e-10)
        first = train_logreg(X, y, base.model_copy(update={"init": "random", "seed": 1}))
        second = train_logreg(X, y, base.model_copy(update={"init": "random", "seed": 2}))
        assert first.final_loss == pytest.approx(second.final_loss, abs=1e-6)
        assert predict_logreg_batch(first, X) == predict_logreg_batch(second, X)

    def test_weight_norm_shrinks_with_c(self):
        """Smaller C gives smaller weights."""
        X, y = _clustered_problem(seed=4)
        norms = [
            np.linalg.norm(train_logreg(X, y, TrainConfig(penalty="l2", C=C, tolerance=1e-10)).weights)
            for C in (10.0, 3.0, 1.0, 0.3, 0.1)
        ]
        for larger_c, smaller_c in zip(norms, norms[1:]):
            assert smaller_c <= larger_c + 1e-8

    def test_tiny_c_gives_zero_weights_and_prior_bias(self):
        """Tiny C leaves only the class prior in the bias."""
        X, y = _clustered_problem(seed=5, n_rows=31)
        model = train_logreg(X, y, TrainConfig(penalty="l2", C=1e-6, max_iterations=5000))
        assert np.max(np.abs(model.weights)) < 1e-3
        priors = np.array([y.count(label) / len(y) for label in model.classes])
        probs = predict_logreg(model, FeatureVector())[1]
        assert np.allclose(probs, priors, atol=1e-3)

    def test_two_separable_points(self):
        """Two separable points are fit and the solver converges."""
        X = sparse.csr_matrix(np.eye(2))
        model = train_logreg(X, ["a", "b"], TrainConfig(penalty="l2", C=1.0))
        assert predict_logreg_batch(model, X) == ["a", "b"]
        assert model.converged

    def test_doubling_minority_weight_raises_recall(self):
        """Up-weighting the minority class raises its recall."""
        # Column 0 rows: 6 maj / 4 min. Column 1 rows: 8 maj / 2 min.
        rows = [[1.0, 0.0]] * 10 + [[0.0, 1.0]] * 10
        labels = ["maj"] * 6 + ["min"] * 4 + ["maj"] * 8 + ["min"] * 2
        X = sparse.csr_matrix(np.array(rows))

        def minority_recall(weights):
            model = train_logreg(X, labels, TrainConfig(penalty="l2", C=100.0, class_weights=weights))
            predicted = predict_logreg_batch(model, X)
            hits = sum(1 for p, t in zip(predicted, labels) if t == "min" and p == "min")
            return hits / labels.count("min")

        assert minority_recall({"min": 2.0}) > minority_recall(None)

    def test_l1_is_sparser_than_l2(self):
        """l1 zeroes more weights than l2 at the same C."""
        X, y = _clustered_problem(seed=6)
        l1 = train_logreg(X, y, TrainConfig(penalty="l1", C=0.05, max_iterations=5000))
        l2 = train_logreg(X, y, TrainConfig(penalty="l2", C=0.05))
        assert l1.nonzero_weights() < l2.nonzero_weights()

    def test_iteration_cap_warns(self):
        """Hitting max_iterations warns and marks the model unconverged."""
        X, y = _clustered_problem()
        with pytest.warns(ConvergenceWarning):
            model = train_logreg(X, y, TrainConfig(max_iterations=1))
        assert not model.converged

    def test_early_stop_above_tolerance_is_not_converged(self):
        """An early stop with the gradient above tolerance warns and marks the model unconverged."""
        rng = np.random.default_rng(11)
        X = sparse.csr_matrix(rng.poisson(0.5, size=(400, 60)).astype(float))
        y = [["a", "b", "c"][i] for i in rng.integers(0, 3, size=400)]
        config = TrainConfig(penalty="l2", C=1000.0, tolerance=1e-10)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = train_logreg(X, y, config)
        _, grad = loss_and_gradient(pack(model.weights, model.bias), X, y, config, model.classes)
        grad_norm = np.max(np.abs(grad)) / len(y)
        warned = any(issubclass(w.category, ConvergenceWarning) for w in caught)

        assert model.n_iter < config.max_iterations
        assert model.converged == (grad_norm <= config.tolerance)
        assert warned == (not model.converged)

    def test_single_class_rejected(self):
        """One class is not enough to train."""
        with pytest.raises(TrainingError):
            train_logreg(sparse.csr_matrix(np.eye(2)), ["a", "a"])

    def test_empty_rejected(self):
        """An empty training set should raise TrainingError."""
        with pytest.raises(TrainingError):
            train_logreg(sparse.csr_matrix((0, 2)), [])

    def test_unknown_class_weight_rejected(self):
        """Class weights for unknown classes are rejected."""
        with pytest.raises(TrainingError):
            train_logreg(sparse.csr_matrix(np.eye(2)), ["a", "b"], TrainConfig(class_weights={"z": 2.0}))

    def test_balanced_weights(self):
        """balanced gives N / (K * N_k)."""
        weights = resolve_class_weights("balanced", ["a", "a", "a", "b"], ("a", "b"))
        assert weights == pytest.approx({"a": 4 / 6, "b": 2.0})

    def test_dict_round_trip(self):
        """to_dict / from_dict preserves weights and predictions."""
        X, y = _clustered_problem()
        model = train_logreg(X, y)
        restored = LogRegModel.from_dict(model.to_dict())
        assert np.array_equal(restored.weights, model.weights)
        assert predict_logreg_batch(restored, X) == predict_logreg_batch(model, X)


class TestPredictLogreg:
    """Test suite for logistic-regression prediction."""

    def _model(self, weights, bias):
        weights = np.asarray(weights, dtype=float)
        return LogRegModel(
            classes=tuple(f"c{k}" for k in range(weights.shape[0])),
            weights=weights,
            bias=np.asarray(bias, dtype=float),
            penalty="l2",
            C=1.0,
            class_weights={},
            converged=True,
            n_iter=0,
            final_loss=0.0,
        )

    def test_zero_model_is_uniform(self):
        """A zero model predicts uniformly and picks the first class."""
        label, probs = predict_logreg(self._model(np.zeros((4, 3)), np.zeros(4)), FeatureVector({0: 1.0}))
        assert label == "c0"
        assert np.allclose(probs, 0.25)

    def test_probabilities_sum_to_one(self):
        """Probabilities sum to one even for large scores."""
        rng = np.random.default_rng(8)
        for _ in range(50):
            model = self._model(rng.normal(scale=30, size=(3, 4)), rng.normal(scale=30, size=3))
            x = FeatureVector({j: float(v) for j, v in enumerate(rng.uniform(0, 5, size=4))})
            probs = predict_logreg(model, x)[1]
            assert abs(probs.sum() - 1.0) <= 1e-12
            assert np.all(probs >= 0.0)

    def test_bias_shift_invariance(self):
        """Adding a constant to every bias changes nothing."""
        rng = np.random.default_rng(9)
        weights, bias = rng.normal(size=(3, 4)), rng.normal(size=3)
        x = FeatureVector({0: 1.0, 2: 2.0})
        label, probs = predict_logreg(self._model(weights, bias), x)
        shifted_label, shifted = predict_logreg(self._model(weights, bias + 100.0), x)
        assert label == shifted_label
        assert np.allclose(probs, shifted, atol=1e-12)

    def test_extreme_scores_do_not_overflow(self):
        """Huge scores still give finite probabilities."""
        model = self._model([[1000.0], [-1000.0]], [0.0, 0.0])
        label, probs = predict_logreg(model, FeatureVector({0: 5.0}))
        assert label == "c0"
        assert np.all(np.isfinite(probs))
