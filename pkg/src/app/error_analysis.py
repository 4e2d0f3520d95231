"""
Misclassification dumps for manual inspection.
"""
from dataclasses import dataclass
from typing import Any, Dict, List

from src.app.pipeline import ModelBundle, predict_texts
from src.core.exceptions import EvaluationError
from src.corpus.schema import LabeledDataset


@dataclass(frozen=True)
class ErrorCase:
    id: str
    text: str
    true_label: str
    predicted_label: str
    confidence: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "true": self.true_label,
            "predicted": self.predicted_label,
            "confidence": self.confidence,
        }


def dump_errors(bundle: ModelBundle, holdout: LabeledDataset, n: int) -> List[ErrorCase]:
    """
    The n most confident mistakes on a labeled set.

    Sorted by predicted-class probability, highest first; ties keep holdout
    order. Returns fewer than n rows when there are fewer errors.

    Raises:
        EvaluationError: n < 1
    """
    if n < 1:
        raise EvaluationError(f"n must be at least 1, got {n}")
    predictions = predict_texts(bundle, holdout.texts)
    errors = [
        ErrorCase(doc.id, doc.text, doc.label, pred.label, pred.confidence)
        for doc, pred in zip(holdout.documents, predictions)
        if pred.label != doc.label
    ]
    errors.sort(key=lambda case: -case.confidence)
    return errors[:n]
