"""
Vocabulary construction with a rare-word threshold.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from src.core.exceptions import VocabularyError
from src.features.ngrams import NgramRange, extract_ngrams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Vocabulary:
    """
    Term -> column index map fitted on a training corpus.

    Attributes:
        terms: term -> column index, indices 0..n-1 in first-appearance order
        corpus_count: total occurrences per column over the training corpus
        doc_count: training documents containing each column's term
        ngram_range: n-gram lengths the vocabulary was built from
        min_count: rare-word threshold applied to corpus_count
    """
    terms: Dict[str, int]
    corpus_count: Tuple[int, ...]
    doc_count: Tuple[int, ...]
    ngram_range: NgramRange
    min_count: int

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.terms

    @property
    def term_list(self) -> List[str]:
        """Terms ordered by column index."""
        return list(self.terms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "terms": self.term_list,
            "corpus_count": list(self.corpus_count),
            "doc_count": list(self.doc_count),
            "ngram_range": [self.ngram_range.lo, self.ngram_range.hi],
            "min_count": self.min_count,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Vocabulary":
        terms = data["terms"]
        return cls(
            terms={term: i for i, term in enumerate(terms)},
            corpus_count=tuple(int(c) for c in data["corpus_count"]),
            doc_count=tuple(int(c) for c in data["doc_count"]),
            ngram_range=NgramRange.model_validate(data["ngram_range"]),
            min_count=int(data["min_count"]),
        )


def build_vocabulary(
    docs: Sequence[Sequence[str]],
    ngram_range: NgramRange,
    min_count: int,
) -> Vocabulary:
    """
    Build a vocabulary from tokenized training documents.

    A term is kept when its total occurrence count over the corpus is at
    least min_count. Columns follow first appearance in the corpus scan.

    Args:
        docs: Token list per training document
        ngram_range: n-gram lengths to extract
        min_count: Rare-word threshold (total corpus occurrences)

    Returns:
        Fitted Vocabulary

    Raises:
        VocabularyError: If the corpus is empty or no term survives the threshold
    """
    if not docs:
        raise VocabularyError("Cannot build a vocabulary from an empty corpus")
    if min_count < 0:
        raise VocabularyError(f"min_count must be non-negative, got {min_count}")

    corpus_counts: Counter = Counter()
    doc_counts: Counter = Counter()
    for tokens in docs:
        grams = extract_ngrams(tokens, ngram_range)
        corpus_counts.update(grams)
        doc_counts.update(set(grams))

    # Counter keeps insertion order, i.e. first appearance
    kept = [term for term, count in corpus_counts.items() if count >= min_count]
    if not kept:
        raise VocabularyError(
            f"No term occurs at least {min_count} times in {len(docs)} documents"
        )

    logger.info(
        f"Vocabulary: {len(kept)} of {len(corpus_counts)} terms kept "
        f"(ngram {ngram_range}, min_count {min_count})"
    )
    return Vocabulary(
        terms={term: i for i, term in enumerate(kept)},
        corpus_count=tuple(corpus_counts[term] for term in kept),
        doc_count=tuple(doc_counts[term] for term in kept),
        ngram_range=ngram_range,
        min_count=min_count,
    )
