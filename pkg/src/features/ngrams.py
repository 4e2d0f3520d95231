"""
Contiguous n-gram extraction.
"""
from typing import Any, List, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator


class NgramRange(BaseModel):
    """Inclusive n-gram length range, 1 <= lo <= hi <= 3."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: int = Field(default=1, ge=1, le=3)
    hi: int = Field(default=1, ge=1, le=3)

    @model_validator(mode="before")
    @classmethod
    def _from_pair(cls, value: Any) -> Any:
        # Accept [lo, hi] as written in YAML manifests and grid files
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"ngram range needs two values, got {value!r}")
            return {"lo": value[0], "hi": value[1]}
        return value

    @model_validator(mode="after")
    def _check_order(self) -> "NgramRange":
        if self.lo > self.hi:
            raise ValueError(f"ngram range lo {self.lo} exceeds hi {self.hi}")
        return self

    def __str__(self) -> str:
        return f"({self.lo},{self.hi})"


def extract_ngrams(tokens: Sequence[str], ngram_range: NgramRange) -> List[str]:
    """
    All contiguous n-token windows for n in [lo, hi].

    Windows are joined with a single space and grouped by n, shortest first.

    Example:
        >>> extract_ngrams(["a", "b", "c"], NgramRange(lo=1, hi=2))
        ['a', 'b', 'c', 'a b', 'b c']
    """
    terms: List[str] = []
    for n in range(ngram_range.lo, ngram_range.hi + 1):
        if n == 1:
            terms.extend(tokens)
            continue
        for i in range(len(tokens) - n + 1):
            terms.append(" ".join(tokens[i:i + n]))
    return terms
