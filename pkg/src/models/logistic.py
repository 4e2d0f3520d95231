"""
Multiclass (softmax) logistic regression with none / L1 / L2 penalties.

Minimizes sum_i c_{y_i} * NLL_i(W, b) + (1/C) * R(W). Smooth objectives go
through scipy's L-BFGS-B; the L1 objective uses an accelerated proximal
gradient method (FISTA with backtracking and adaptive restart) so that
weights can reach exact zeros.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import minimize
from scipy.special import logsumexp, softmax

from src.core.exceptions import ConvergenceWarning, TrainingError
from src.features.vectors import FeatureVector
from src.models.config import ClassWeightOption, TrainConfig
from src.models.naive_bayes import MatrixLike, as_csr, class_order

logger = logging.getLogger(__name__)


def resolve_class_weights(
    option: ClassWeightOption, y: Sequence[str], classes: Sequence[str]
) -> Dict[str, float]:
    """
    Turn a class-weight option into one weight per class.

    None gives 1.0 everywhere; "balanced" gives N / (K * N_k); a mapping is
    used as-is with missing classes defaulting to 1.0.
    """
    if option is None:
        return {label: 1.0 for label in classes}
    if option == "balanced":
        counts = {label: 0 for label in classes}
        for label in y:
            counts[label] += 1
        n, k = len(y), len(classes)
        return {label: (n / (k * c) if c else 1.0) for label, c in counts.items()}
    unknown = sorted(set(option) - set(classes))
    if unknown:
        raise TrainingError(f"Class weights given for unknown classes: {unknown}")
    return {label: float(option.get(label, 1.0)) for label in classes}


def pack(weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Flatten (K x V weights, K bias) into one parameter vector."""
    return np.concatenate([weights.ravel(), bias])


def unpack(params: np.ndarray, n_classes: int, n_features: int) -> Tuple[np.ndarray, np.ndarray]:
    split = n_classes * n_features
    return params[:split].reshape(n_classes, n_features), params[split:]


class LogisticObjective:
    """
    Weighted softmax negative log-likelihood plus penalty.

    Calling the object with a flat parameter vector returns (loss, gradient).
    With smooth_only=True the L1 term is left out; the proximal solver
    handles it separately.
    """

    def __init__(
        self,
        X: sparse.csr_matrix,
        y_idx: np.ndarray,
        n_classes: int,
        sample_weights: np.ndarray,
        penalty: str,
        C: float,
        smooth_only: bool = False,
    ):
        self.X = X
        self.XT = X.T.tocsr()
        self.y_idx = y_idx
        self.n_classes = n_classes
        self.n_features = X.shape[1]
        self.sample_weights = sample_weights
        self.penalty = penalty
        self.inv_C = 1.0 / C
        self.smooth_only = smooth_only
        self.rows = np.arange(X.shape[0])

    def data_term(self, params: np.ndarray) -> Tuple[float, np.ndarray]:
        W, b = unpack(params, self.n_classes, self.n_features)
        Z = np.asarray(self.X @ W.T) + b
        lse = logsumexp(Z, axis=1)
        nll = lse - Z[self.rows, self.y_idx]
        loss = float(np.dot(self.sample_weights, nll))

        G = np.exp(Z - lse[:, None])
        G[self.rows, self.y_idx] -= 1.0
        G *= self.sample_weights[:, None]
        grad_W = np.asarray(self.XT @ G).T
        grad_b = G.sum(axis=0)
        return loss, pack(grad_W, grad_b)

    def penalty_value(self, params: np.ndarray) -> float:
        W, _ = unpack(params, self.n_classes, self.n_features)
        if self.penalty == "l2":
            return 0.5 * self.inv_C * float(np.sum(W * W))
        if self.penalty == "l1":
            return self.inv_C * float(np.sum(np.abs(W)))
        return 0.0

    def __call__(self, params: np.ndarray) -> Tuple[float, np.ndarray]:
        loss, grad = self.data_term(params)
        if self.penalty == "none" or (self.penalty == "l1" and self.smooth_only):
            return loss, grad
        W, _ = unpack(params, self.n_classes, self.n_features)
        grad_W, _ = unpack(grad, self.n_classes, self.n_features)
        if self.penalty == "l2":
            grad_W += self.inv_C * W
        else:
            grad_W += self.inv_C * np.sign(W)
        return loss + self.penalty_value(params), grad


def _prepare(
    X: MatrixLike, y: Sequence[str], config: TrainConfig, classes: Optional[Sequence[str]]
) -> Tuple[sparse.csr_matrix, np.ndarray, Tuple[str, ...], Dict[str, float], np.ndarray]:
    X = as_csr(X)
    if X.shape[0] == 0:
        raise TrainingError("Cannot train on an empty training set")
    if X.shape[0] != len(y):
        raise TrainingError(f"{X.shape[0]} rows but {len(y)} labels")
    if len(set(y)) < 2:
        raise TrainingError(f"Need at least two classes, got {sorted(set(y))}")

    classes = class_order(y, classes)
    index = {label: k for k, label in enumerate(classes)}
    unknown = sorted(set(y) - set(index))
    if unknown:
        raise TrainingError(f"Labels not in class list: {unknown}")
    y_idx = np.fromiter((index[label] for label in y), dtype=np.int64, count=len(y))
    class_weights = resolve_class_weights(config.class_weights, y, classes)
    per_class = np.asarray([class_weights[label] for label in classes], dtype=np.float64)
    return X, y_idx, classes, class_weights, per_class[y_idx]


def loss_and_gradient(
    params: np.ndarray,
    X: MatrixLike,
    y: Sequence[str],
    config: TrainConfig,
    classes: Optional[Sequence[str]] = None,
) -> Tuple[float, np.ndarray]:
    """
    Objective value and (sub)gradient at a flat parameter vector.

    The L1 term uses sign(W) as its subgradient, which is exact away from
    zero weights. The gradient has the same shape as params.
    """
    X, y_idx, classes, _, sample_weights = _prepare(X, y, config, classes)
    objective = LogisticObjective(X, y_idx, len(classes), sample_weights, config.penalty, config.C)
    return objective(np.asarray(params, dtype=np.float64))


def _soft_threshold(params: np.ndarray, threshold: float, n_weights: int) -> np.ndarray:
    out = params.copy()
    w = out[:n_weights]
    out[:n_weights] = np.sign(w) * np.maximum(np.abs(w) - threshold, 0.0)
    return out


def _fista(
    objective: LogisticObjective, x0: np.ndarray, config: TrainConfig
) -> Tuple[np.ndarray, int, float]:
    """
    Accelerated proximal gradient for the L1 objective.

    Returns:
        (parameters, iterations, inf-norm of the last gradient mapping)
    """
    n_weights = objective.n_classes * objective.n_features
    x = x0.copy()
    z = x0.copy()
    t = 1.0
    step = 1.0
    f_x = objective.data_term(x)[0] + objective.penalty_value(x)
    mapping_norm = np.inf

    iteration = 0
    for iteration in range(1, config.max_iterations + 1):
        f_z, g_z = objective.data_term(z)
        while True:
            candidate = _soft_threshold(z - step * g_z, step * objective.inv_C, n_weights)
            diff = candidate - z
            f_candidate = objective.data_term(candidate)[0]
            if f_candidate <= f_z + float(np.dot(g_z, diff)) + float(np.dot(diff, diff)) / (2 * step):
                break
            step *= 0.5
            if step < 1e-20:
                raise TrainingError("Line search failed in proximal solver")

        mapping_norm = float(np.max(np.abs(diff))) / step
        F_candidate = f_candidate + objective.penalty_value(candidate)
        if mapping_norm <= config.tolerance:
            x = candidate
            break

        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        if F_candidate > f_x:
            # Momentum overshot: restart from the last iterate
            t_next = 1.0
            z = x.copy()
        else:
            z = candidate + ((t - 1.0) / t_next) * (candidate - x)
            x = candidate
            f_x = F_candidate
        t = t_next

    return x, iteration, mapping_norm


@dataclass(frozen=True)
class LogRegModel:
    """
    Trained softmax regression parameters.

    Attributes:
        classes: Ordered class labels (K)
        weights: K x V weight matrix
        bias: Per-class intercepts (K,)
        penalty: Penalty the model was trained with
        C: Inverse regularization strength
        class_weights: Resolved per-class loss weights
        converged: False when the solver stopped above tolerance
        n_iter: Solver iterations used
        final_loss: Objective value at the returned parameters
    """
    classes: Tuple[str, ...]
    weights: np.ndarray
    bias: np.ndarray
    penalty: str
    C: float
    class_weights: Dict[str, float]
    converged: bool
    n_iter: int
    final_loss: float

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def decision_function(self, X: MatrixLike) -> np.ndarray:
        X = as_csr(X)
        return np.asarray(X @ self.weights.T) + self.bias

    def predict_proba(self, X: MatrixLike) -> np.ndarray:
        """Class probabilities, shape (N, K)."""
        return softmax(self.decision_function(X), axis=1)

    def nonzero_weights(self) -> int:
        return int(np.count_nonzero(self.weights))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "logreg",
            "classes": list(self.classes),
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "penalty": self.penalty,
            "C": self.C,
            "class_weights": dict(self.class_weights),
            "converged": self.converged,
            "n_iter": self.n_iter,
            "final_loss": self.final_loss,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LogRegModel":
        classes = tuple(data["classes"])
        weights = np.asarray(data["weights"], dtype=np.float64).reshape(len(classes), -1)
        return cls(
            classes=classes,
            weights=weights,
            bias=np.asarray(data["bias"], dtype=np.float64),
            penalty=data["penalty"],
            C=float(data["C"]),
            class_weights={k: float(v) for k, v in data["class_weights"].items()},
            converged=bool(data["converged"]),
            n_iter=int(data["n_iter"]),
            final_loss=float(data["final_loss"]),
        )


def train_logreg(
    X: MatrixLike,
    y: Sequence[str],
    config: TrainConfig = TrainConfig(),
    classes: Optional[Sequence[str]] = None,
) -> LogRegModel:
    """
    Fit softmax regression.

    Smooth penalties (none, l2) run L-BFGS-B with gtol=tolerance; l1 runs
    FISTA until the gradient mapping falls below tolerance. Hitting
    max_iterations, or any other stop with the gradient still above
    tolerance, issues a ConvergenceWarning and marks the model
    converged=False; the best iterate is still returned.

    Args:
        X: Training rows (N x V)
        y: Label per row
        config: Penalty, C, class weights and solver limits
        classes: Class order; defaults to first appearance in y

    Raises:
        TrainingError: Empty data, fewer than two classes, or bad labels
    """
    X, y_idx, classes, class_weights, sample_weights = _prepare(X, y, config, classes)
    n_classes, n_features = len(classes), X.shape[1]
    n_params = n_classes * (n_features + 1)

    if config.init == "random":
        x0 = np.random.default_rng(config.seed).normal(scale=0.1, size=n_params)
    else:
        x0 = np.zeros(n_params)

    # Solve the objective divided by the total sample weight: same minimizer,
    # and the tolerance no longer depends on the number of rows.
    scale = 1.0 / float(sample_weights.sum())
    scaled_weights = sample_weights * scale
    scaled_C = config.C / scale

    if config.penalty == "l1":
        objective = LogisticObjective(
            X, y_idx, n_classes, scaled_weights, "l1", scaled_C, smooth_only=True
        )
        params, n_iter, mapping_norm = _fista(objective, x0, config)
        scaled_loss = objective.data_term(params)[0] + objective.penalty_value(params)
        grad_norm = float(mapping_norm)
        converged = grad_norm <= config.tolerance
    else:
        objective = LogisticObjective(
            X, y_idx, n_classes, scaled_weights, config.penalty, scaled_C
        )
        result = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": config.max_iterations,
                "gtol": config.tolerance,
                "ftol": 64 * np.finfo(float).eps,
                "maxcor": 20,
            },
        )
        params, n_iter, scaled_loss = result.x, int(result.nit), float(result.fun)
        # ftol and line-search stops report success without a small gradient
        grad_norm = float(np.max(np.abs(result.jac))) if result.jac.size else 0.0
        converged = bool(result.success) and grad_norm <= config.tolerance
    final_loss = scaled_loss / scale

    if not converged:
        warnings.warn(
            f"Solver stopped after {n_iter} iterations with gradient norm {grad_norm:.3g} "
            f"above tolerance {config.tolerance} (penalty={config.penalty}, C={config.C})",
            ConvergenceWarning,
            stacklevel=2,
        )

    W, b = unpack(params, n_classes, n_features)
    logger.info(
        f"Trained logreg ({config.penalty}, C={config.C}) on {X.shape[0]} rows in "
        f"{n_iter} iterations, loss={final_loss:.4f}, gradient norm={grad_norm:.3g}"
    )
    return LogRegModel(
        classes=classes,
        weights=W.copy(),
        bias=b.copy(),
        penalty=config.penalty,
        C=config.C,
        class_weights=class_weights,
        converged=converged,
        n_iter=n_iter,
        final_loss=final_loss,
    )


def predict_logreg(model: LogRegModel, x: FeatureVector) -> Tuple[str, np.ndarray]:
    """
    Classify one vector.

    Probabilities come from a max-subtracted softmax; ties go to the lowest
    class index.

    Returns:
        (label, per-class probabilities)
    """
    z = model.bias.copy()
    if x.weights:
        columns, values = zip(*x.items())
        z = z + model.weights[:, list(columns)] @ np.asarray(values, dtype=np.float64)
    z = z - z.max()
    probs = np.exp(z)
    probs /= probs.sum()
    return model.classes[int(np.argmax(probs))], probs


def predict_logreg_batch(model: LogRegModel, X: MatrixLike) -> List[str]:
    """Labels for every row of X."""
    scores = model.decision_function(X)
    return [model.classes[k] for k in np.argmax(scores, axis=1)]
