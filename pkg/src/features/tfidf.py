"""
Smoothed TF-IDF weighting with unit-norm rows.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

from src.features.vectors import FeatureMatrix, FeatureVector, document_frequencies


@dataclass(frozen=True)
class IdfModel:
    """Per-column inverse document frequencies fitted on training rows."""
    idf: Tuple[float, ...]
    n_docs: int

    def to_dict(self) -> Dict[str, Any]:
        return {"idf": list(self.idf), "n_docs": self.n_docs}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IdfModel":
        return cls(idf=tuple(float(v) for v in data["idf"]), n_docs=int(data["n_docs"]))


def fit_idf(matrix: FeatureMatrix) -> IdfModel:
    """
    Fit idf weights on a training count matrix.

    idf[j] = ln((1 + n_docs) / (1 + df[j])) + 1, so every weight is >= 1 and
    terms found in every document get exactly 1.
    """
    n_docs = len(matrix)
    df = document_frequencies(matrix)
    idf = tuple(math.log((1 + n_docs) / (1 + int(d))) + 1.0 for d in df)
    return IdfModel(idf=idf, n_docs=n_docs)


def apply_tfidf(vector: FeatureVector, idf: IdfModel) -> FeatureVector:
    """
    Scale counts by idf and normalize to unit Euclidean length.

    Zero vectors pass through unchanged.
    """
    if not vector.weights:
        return vector
    scaled = {col: weight * idf.idf[col] for col, weight in vector.weights.items()}
    norm = math.sqrt(sum(w * w for w in scaled.values()))
    return FeatureVector({col: w / norm for col, w in scaled.items()})


def transform_matrix(matrix: FeatureMatrix, idf: IdfModel) -> FeatureMatrix:
    """apply_tfidf to every row."""
    return FeatureMatrix(tuple(apply_tfidf(row, idf) for row in matrix.rows), matrix.n_cols)
