"""
Sparse bag-of-words vectors.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from src.features.ngrams import extract_ngrams
from src.features.vocabulary import Vocabulary


@dataclass(frozen=True)
class FeatureVector:
    """Sparse non-negative weights keyed by column index (no explicit zeros)."""
    weights: Dict[int, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.weights)

    def items(self) -> List[Tuple[int, float]]:
        """(column, weight) pairs sorted by column."""
        return sorted(self.weights.items())

    def total(self) -> float:
        return float(sum(self.weights.values()))

    def norm(self) -> float:
        return float(np.sqrt(sum(w * w for w in self.weights.values())))


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-major collection of feature vectors over a fixed column count."""
    rows: Tuple[FeatureVector, ...]
    n_cols: int

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if row.weights and max(row.weights) >= self.n_cols:
                raise ValueError(f"Row {i} has a column index >= {self.n_cols}")

    def __len__(self) -> int:
        return len(self.rows)

    def to_csr(self) -> sparse.csr_matrix:
        """Compressed sparse row copy (float64)."""
        indptr = [0]
        indices: List[int] = []
        data: List[float] = []
        for row in self.rows:
            for col, weight in row.items():
                indices.append(col)
                data.append(weight)
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.asarray(data, dtype=np.float64),
             np.asarray(indices, dtype=np.int64),
             np.asarray(indptr, dtype=np.int64)),
            shape=(len(self.rows), self.n_cols),
        )

    def subset(self, indices: Iterable[int]) -> "FeatureMatrix":
        return FeatureMatrix(tuple(self.rows[i] for i in indices), self.n_cols)


def vectorize_counts(tokens: Sequence[str], vocab: Vocabulary) -> FeatureVector:
    """
    Count in-vocabulary n-grams of one document.

    Out-of-vocabulary terms contribute nothing; the weights sum to the
    number of extracted n-grams found in the vocabulary.

    Example:
        vocab {a: 0, b: 1}, tokens ["a", "a", "z"] -> {0: 2}
    """
    counts: Counter = Counter()
    terms = vocab.terms
    for gram in extract_ngrams(tokens, vocab.ngram_range):
        column = terms.get(gram)
        if column is not None:
            counts[column] += 1
    return FeatureVector({column: float(n) for column, n in counts.items()})


def vectorize_corpus(docs: Sequence[Sequence[str]], vocab: Vocabulary) -> FeatureMatrix:
    """Count-vectorize every document against a frozen vocabulary."""
    return FeatureMatrix(tuple(vectorize_counts(tokens, vocab) for tokens in docs), len(vocab))


def document_frequencies(matrix: FeatureMatrix) -> np.ndarray:
    """Number of rows with a non-zero weight, per column."""
    df = np.zeros(matrix.n_cols, dtype=np.int64)
    for row in matrix.rows:
        if row.weights:
            df[list(row.weights)] += 1
    return df
