"""
Confusion-matrix based classification metrics.

Zero denominators yield 0.0 and are recorded in EvalReport.zero_division_flags
so reports can show where the convention fired.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Literal, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import EvaluationError

Scoring = Literal["accuracy", "macro_f1", "weighted_f1"]
SCORINGS: Tuple[str, ...] = ("accuracy", "macro_f1", "weighted_f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows = true class, columns = predicted class."""
    classes: Tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {"classes": list(self.classes), "counts": self.counts.tolist()}


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass(frozen=True)
class EvalReport:
    """
    Per-class, macro and support-weighted metrics plus accuracy.

    Attributes:
        classes: Class order used for every table
        per_class: label -> ClassMetrics
        macro: Unweighted means over classes
        weighted: Means weighted by true-class support
        accuracy: trace / total
        zero_division_flags: (label, metric) pairs where a 0/0 became 0
        confusion: The underlying confusion matrix
    """
    classes: Tuple[str, ...]
    per_class: Dict[str, ClassMetrics]
    macro: ClassMetrics
    weighted: ClassMetrics
    accuracy: float
    zero_division_flags: FrozenSet[Tuple[str, str]] = field(default_factory=frozenset)
    confusion: Optional[ConfusionMatrix] = None

    def score(self, scoring: str) -> float:
        """Single number used for model selection."""
        if scoring == "accuracy":
            return self.accuracy
        if scoring == "macro_f1":
            return self.macro.f1
        if scoring == "weighted_f1":
            return self.weighted.f1
        raise EvaluationError(f"Unknown scoring '{scoring}', expected one of {SCORINGS}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "per_class": {label: m.to_dict() for label, m in self.per_class.items()},
            "macro": self.macro.to_dict(),
            "weighted": self.weighted.to_dict(),
            "accuracy": self.accuracy,
            "zero_division_flags": sorted([list(flag) for flag in self.zero_division_flags]),
            "confusion": self.confusion.to_dict() if self.confusion is not None else None,
        }


def confusion_matrix(
    y_true: Sequence[str], y_pred: Sequence[str], classes: Sequence[str]
) -> ConfusionMatrix:
    """
    Count (true, predicted) pairs.

    Raises:
        EvaluationError: Length mismatch, empty input, or a label outside classes
    """
    if len(y_true) != len(y_pred):
        raise EvaluationError(f"{len(y_true)} true labels but {len(y_pred)} predictions")
    if not y_true:
        raise EvaluationError("Cannot evaluate an empty prediction set")
    classes = tuple(classes)
    index = {label: k for k, label in enumerate(classes)}
    unknown = sorted((set(y_true) | set(y_pred)) - set(index))
    if unknown:
        raise EvaluationError(f"Labels not in class list {list(classes)}: {unknown}")

    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for true, pred in zip(y_true, y_pred):
        counts[index[true], index[pred]] += 1
    return ConfusionMatrix(classes=classes, counts=counts)


def _ratio(numerator: int, denominator: int) -> Tuple[float, bool]:
    if denominator == 0:
        return 0.0, True
    return numerator / denominator, False


def compute_report(
    y_true: Sequence[str], y_pred: Sequence[str], classes: Sequence[str]
) -> EvalReport:
    """
    Precision, recall and F1 per class with macro and weighted averages.

    Example:
        y_true=[A, A, B], y_pred=[A, B, B] ->
        A: P=1.0 R=0.5 F1=2/3, B: P=0.5 R=1.0 F1=2/3, accuracy 2/3
    """
    matrix = confusion_matrix(list(y_true), list(y_pred), classes)
    counts = matrix.counts
    total = matrix.total
    flags = set()
    per_class: Dict[str, ClassMetrics] = {}

    for k, label in enumerate(matrix.classes):
        tp = int(counts[k, k])
        support = int(counts[k, :].sum())
        precision, p_zero = _ratio(tp, int(counts[:, k].sum()))
        recall, r_zero = _ratio(tp, support)
        if p_zero:
            flags.add((label, "precision"))
        if r_zero:
            flags.add((label, "recall"))
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
            flags.add((label, "f1"))
        per_class[label] = ClassMetrics(precision, recall, f1, support)

    metrics = list(per_class.values())
    n_classes = len(metrics)
    macro = ClassMetrics(
        precision=sum(m.precision for m in metrics) / n_classes,
        recall=sum(m.recall for m in metrics) / n_classes,
        f1=sum(m.f1 for m in metrics) / n_classes,
        support=total,
    )
    weighted = ClassMetrics(
        precision=sum(m.precision * m.support for m in metrics) / total,
        recall=sum(m.recall * m.support for m in metrics) / total,
        f1=sum(m.f1 * m.support for m in metrics) / total,
        support=total,
    )
    accuracy = int(np.trace(counts)) / total
    assert abs(weighted.recall - accuracy) <= 1e-9, "weighted recall must equal accuracy"

    return EvalReport(
        classes=matrix.classes,
        per_class=per_class,
        macro=macro,
        weighted=weighted,
        accuracy=accuracy,
        zero_division_flags=frozenset(flags),
        confusion=matrix,
    )
