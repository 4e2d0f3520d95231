"""
Schema definitions for labeled tweet collections.

Documents, label schemas and datasets are immutable once built and can be
shared freely between threads and worker processes.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.core.exceptions import LabelError, ConfigurationError

# Document fields a CSV column may be mapped onto
DOCUMENT_FIELDS = ("id", "text", "label", "location", "keyword", "date")


@dataclass(frozen=True)
class Document:
    """One tweet with its tag and optional metadata."""
    id: str
    text: str
    label: Optional[str] = None
    location: Optional[str] = None
    keyword: Optional[str] = None
    date: Optional[str] = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"Document {self.id!r} has empty text")


@dataclass(frozen=True)
class LabelSchema:
    """
    Label set and CSV layout of one dataset.

    Attributes:
        name: Dataset identifier (e.g. 'climate')
        labels: Ordered, distinct label strings
        column_map: CSV column name -> Document field
        label_decoder: Raw CSV label value -> label string
    """
    name: str
    labels: Tuple[str, ...]
    column_map: Dict[str, str] = field(default_factory=dict)
    label_decoder: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ConfigurationError(f"Schema '{self.name}' has duplicate labels: {self.labels}")
        for column, target in self.column_map.items():
            if target not in DOCUMENT_FIELDS:
                raise ConfigurationError(
                    f"Schema '{self.name}' maps column '{column}' to unknown field '{target}'"
                )
        for raw, label in self.label_decoder.items():
            if label not in self.labels:
                raise ConfigurationError(
                    f"Schema '{self.name}' decodes '{raw}' to undeclared label '{label}'"
                )

    def column_for(self, field_name: str) -> Optional[str]:
        """Return the CSV column mapped onto a Document field, if any."""
        for column, target in self.column_map.items():
            if target == field_name:
                return column
        return None

    def decode(self, raw: str) -> Optional[str]:
        """
        Decode a raw CSV label value.

        Values are tried verbatim, then whitespace-stripped. Without a decoder,
        a raw value equal to a declared label decodes to itself.

        Returns:
            The label, or None if the value is not decodable
        """
        for candidate in (raw, raw.strip()):
            if candidate in self.label_decoder:
                return self.label_decoder[candidate]
            if not self.label_decoder and candidate in self.labels:
                return candidate
        return None

    @property
    def label_encoder(self) -> Dict[str, str]:
        """Label -> first raw value that decodes to it (identity when no decoder)."""
        if not self.label_decoder:
            return {label: label for label in self.labels}
        encoder: Dict[str, str] = {}
        for raw, label in self.label_decoder.items():
            encoder.setdefault(label, raw)
        return encoder

    def with_labels(self, labels: Tuple[str, ...], decoder: Dict[str, str]) -> "LabelSchema":
        """Copy of this schema with a new label list and decoder."""
        return LabelSchema(
            name=self.name,
            labels=labels,
            column_map=dict(self.column_map),
            label_decoder=decoder,
        )


@dataclass(frozen=True)
class LabeledDataset:
    """An ordered collection of labeled documents sharing one schema."""
    schema: LabelSchema
    documents: Tuple[Document, ...]

    def __post_init__(self):
        ids = Counter()
        for doc in self.documents:
            if doc.label not in self.schema.labels:
                raise LabelError(
                    f"Document {doc.id!r} has label {doc.label!r} outside schema "
                    f"'{self.schema.name}' labels {list(self.schema.labels)}"
                )
            ids[doc.id] += 1
        duplicates = [doc_id for doc_id, n in ids.items() if n > 1]
        if duplicates:
            raise LabelError(f"Duplicate document ids: {duplicates[:10]}")

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def texts(self) -> List[str]:
        return [doc.text for doc in self.documents]

    @property
    def labels(self) -> List[str]:
        return [doc.label for doc in self.documents]

    def subset(self, indices) -> "LabeledDataset":
        """New dataset holding the documents at the given positions, in that order."""
        return LabeledDataset(self.schema, tuple(self.documents[i] for i in indices))

    def class_counts(self) -> Dict[str, int]:
        """Documents per schema label, in schema order (zeros included)."""
        counts = Counter(self.labels)
        return {label: counts.get(label, 0) for label in self.schema.labels}


class SplitSpec(BaseModel):
    """Hold-out split parameters."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    holdout_fraction: float = Field(default=0.2, gt=0.0, lt=1.0)
    seed: int = Field(default=42, ge=0, lt=2 ** 64)
    stratified: bool = True


@dataclass
class LoadReport:
    """Outcome of reading one CSV file."""
    path: str
    encoding: str = "utf-8"
    rows_read: int = 0
    rows_loaded: int = 0
    rejected: List[Tuple[int, str]] = field(default_factory=list)
    duplicate_ids: List[str] = field(default_factory=list)

    def reject(self, row: int, reason: str) -> None:
        self.rejected.append((row, reason))

    def render(self, limit: int = 20) -> str:
        """Plain-text load report."""
        lines = [
            f"file: {self.path}",
            f"encoding: {self.encoding}",
            f"rows read: {self.rows_read}",
            f"rows loaded: {self.rows_loaded}",
            f"rows rejected: {len(self.rejected)}",
        ]
        for row, reason in self.rejected[:limit]:
            lines.append(f"  line {row}: {reason}")
        if len(self.rejected) > limit:
            lines.append(f"  ... {len(self.rejected) - limit} more")
        if self.duplicate_ids:
            lines.append(f"duplicate ids: {', '.join(self.duplicate_ids[:limit])}")
        return "\n".join(lines)

    def to_dict(self) -> Dict:
        return {
            "path": self.path,
            "encoding": self.encoding,
            "rows_read": self.rows_read,
            "rows_loaded": self.rows_loaded,
            "rejected": [{"line": row, "reason": reason} for row, reason in self.rejected],
            "duplicate_ids": list(self.duplicate_ids),
        }
