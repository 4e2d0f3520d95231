"""
Multinomial Naive Bayes over sparse term weights.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.special import logsumexp, softmax

from src.core.exceptions import TrainingError
from src.features.vectors import FeatureMatrix, FeatureVector

logger = logging.getLogger(__name__)

MatrixLike = Union[FeatureMatrix, sparse.spmatrix]


def as_csr(X: MatrixLike) -> sparse.csr_matrix:
    """Accept a FeatureMatrix or any scipy sparse matrix."""
    if isinstance(X, FeatureMatrix):
        return X.to_csr()
    return sparse.csr_matrix(X, dtype=np.float64)


def class_order(y: Sequence[str], classes: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    """Explicit class order, or labels in order of first appearance."""
    if classes is not None:
        return tuple(classes)
    return tuple(dict.fromkeys(y))


@dataclass(frozen=True)
class MnbModel:
    """
    Trained Multinomial Naive Bayes parameters.

    Attributes:
        classes: Ordered class labels (K)
        log_prior: ln P(class), shape (K,)
        log_prob: ln P(term | class), shape (K, V)
        alpha: Additive smoothing constant
    """
    classes: Tuple[str, ...]
    log_prior: np.ndarray
    log_prob: np.ndarray
    alpha: float

    @property
    def n_features(self) -> int:
        return self.log_prob.shape[1]

    def joint_log_scores(self, X: MatrixLike) -> np.ndarray:
        """log_prior + X @ log_prob.T, shape (N, K)."""
        X = as_csr(X)
        return np.asarray(X @ self.log_prob.T) + self.log_prior

    def predict_proba(self, X: MatrixLike) -> np.ndarray:
        """Posterior class probabilities, shape (N, K)."""
        return softmax(self.joint_log_scores(X), axis=1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "mnb",
            "classes": list(self.classes),
            "log_prior": self.log_prior.tolist(),
            "log_prob": self.log_prob.tolist(),
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MnbModel":
        return cls(
            classes=tuple(data["classes"]),
            log_prior=np.asarray(data["log_prior"], dtype=np.float64),
            log_prob=np.asarray(data["log_prob"], dtype=np.float64),
            alpha=float(data["alpha"]),
        )


def train_mnb(
    X: MatrixLike,
    y: Sequence[str],
    alpha: float = 1.0,
    classes: Optional[Sequence[str]] = None,
) -> MnbModel:
    """
    Fit Multinomial Naive Bayes.

    log_prior[k] = ln(N_k / N)
    log_prob[k][j] = ln((count_kj + alpha) / (count_k + alpha * V))

    where count_kj is the total weight of feature j over class-k rows.

    Args:
        X: Training rows (N x V)
        y: Label per row
        alpha: Smoothing constant (> 0)
        classes: Class order; defaults to first appearance in y

    Returns:
        MnbModel

    Raises:
        TrainingError: Empty training set, non-positive alpha, length mismatch,
            or a class without training rows
    """
    if not alpha > 0:
        raise TrainingError(f"alpha must be positive, got {alpha}")
    X = as_csr(X)
    n_rows, n_features = X.shape
    if n_rows == 0:
        raise TrainingError("Cannot train on an empty training set")
    if n_rows != len(y):
        raise TrainingError(f"{n_rows} rows but {len(y)} labels")

    classes = class_order(y, classes)
    index = {label: k for k, label in enumerate(classes)}
    unknown = sorted(set(y) - set(index))
    if unknown:
        raise TrainingError(f"Labels not in class list: {unknown}")
    y_idx = np.fromiter((index[label] for label in y), dtype=np.int64, count=n_rows)

    class_sizes = np.bincount(y_idx, minlength=len(classes)).astype(np.float64)
    empty = [classes[k] for k in np.flatnonzero(class_sizes == 0)]
    if empty:
        raise TrainingError(f"Classes without training rows: {empty}")

    # Indicator (K x N) times X gives per-class feature totals
    indicator = sparse.csr_matrix(
        (np.ones(n_rows), (y_idx, np.arange(n_rows))), shape=(len(classes), n_rows)
    )
    feature_counts = np.asarray((indicator @ X).todense(), dtype=np.float64)
    smoothed = feature_counts + alpha
    log_prob = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    log_prior = np.log(class_sizes) - np.log(n_rows)

    totals = logsumexp(log_prob, axis=1)
    if not np.allclose(totals, 0.0, atol=1e-9):
        raise TrainingError(f"Term distributions do not normalize: {totals}")

    logger.info(f"Trained MNB on {n_rows} rows, {n_features} features, {len(classes)} classes")
    return MnbModel(classes=classes, log_prior=log_prior, log_prob=log_prob, alpha=float(alpha))


def predict_mnb(model: MnbModel, x: FeatureVector) -> Tuple[str, np.ndarray]:
    """
    Classify one vector.

    score[k] = log_prior[k] + sum_j x_j * log_prob[k][j]; ties go to the
    lowest class index.

    Returns:
        (label, per-class log scores)
    """
    scores = model.log_prior.copy()
    if x.weights:
        columns, values = zip(*x.items())
        scores = scores + model.log_prob[:, list(columns)] @ np.asarray(values, dtype=np.float64)
    return model.classes[int(np.argmax(scores))], scores


def predict_mnb_batch(model: MnbModel, X: MatrixLike) -> List[str]:
    """Labels for every row of X."""
    scores = model.joint_log_scores(X)
    return [model.classes[k] for k in np.argmax(scores, axis=1)]
