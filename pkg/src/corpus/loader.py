"""
CSV loading and writing for the Kaggle tweet datasets.

Files are decoded as a whole (strictly in the declared encoding, then
Latin-1) and parsed with RFC 4180 quoting, so quoted fields may contain
commas and newlines.
"""
import codecs
import csv
import io
import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from src.core.exceptions import (
    CorpusFormatError,
    EmptyCorpusError,
    MissingColumnError,
    MissingFileError,
)
from src.corpus.schema import Document, LabeledDataset, LabelSchema, LoadReport

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_text(path: PathLike, encoding: str = "utf-8") -> Tuple[str, str]:
    """
    Read a whole file as text.

    The file is decoded strictly with the declared encoding first; if that
    fails it is decoded as Latin-1, which accepts every byte.

    Args:
        path: File to read
        encoding: Declared encoding of the file

    Returns:
        (text, encoding name actually used)

    Raises:
        MissingFileError: If the file does not exist
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"File not found: {path}")
    raw = path.read_bytes()
    if codecs.lookup(encoding).name == "utf-8" and raw.startswith(codecs.BOM_UTF8):
        raw = raw[len(codecs.BOM_UTF8):]
    try:
        return raw.decode(encoding), encoding
    except UnicodeDecodeError:
        logger.warning(f"{path} is not valid {encoding}; decoding as latin-1")
        return raw.decode("latin-1"), "latin-1"


def _iter_records(text: str, path: PathLike, report: LoadReport) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, fields) per CSV record, rejecting malformed records."""
    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    while True:
        try:
            record = next(reader)
        except StopIteration:
            return
        except csv.Error as e:
            if "unexpected end of data" in str(e):
                raise CorpusFormatError(
                    f"{path}: unbalanced quote starting before line {reader.line_num}"
                )
            report.reject(reader.line_num, f"malformed CSV: {e}")
            continue
        yield reader.line_num, record


def _read_header(records: Iterator[Tuple[int, List[str]]], path: PathLike) -> Dict[str, int]:
    try:
        _, header = next(records)
    except StopIteration:
        raise EmptyCorpusError(f"{path}: file is empty")
    return {name.strip(): i for i, name in enumerate(header)}


def _parse_documents(
    path: PathLike,
    schema: LabelSchema,
    labeled: bool,
    report: LoadReport,
    encoding: str = "utf-8",
) -> List[Document]:
    text, encoding = read_text(path, encoding)
    report.path = str(path)
    report.encoding = encoding

    records = _iter_records(text, path, report)
    header = _read_header(records, path)

    required = ["text", "label"] if labeled else ["text"]
    for field_name in required:
        column = schema.column_for(field_name)
        if column is None:
            raise MissingColumnError(
                f"Schema '{schema.name}' maps no column onto '{field_name}'"
            )
        if column not in header:
            raise MissingColumnError(f"{path}: missing required column '{column}'")

    positions = {
        target: header[column]
        for column, target in schema.column_map.items()
        if column in header
    }
    if not labeled:
        positions.pop("label", None)

    documents: List[Document] = []
    seen_ids = set()
    for line, record in records:
        if not any(cell.strip() for cell in record):
            continue
        report.rows_read += 1
        if len(record) < len(header):
            report.reject(line, f"expected {len(header)} fields, found {len(record)}")
            continue

        values = {target: record[pos] for target, pos in positions.items()}
        doc_text = values.get("text", "")
        if not doc_text.strip():
            report.reject(line, "empty text")
            continue

        label = None
        if labeled:
            label = schema.decode(values.get("label", ""))
            if label is None:
                report.reject(line, f"undecodable label {values.get('label', '')!r}")
                continue

        doc_id = values.get("id", "").strip() or str(report.rows_read)
        if doc_id in seen_ids:
            report.duplicate_ids.append(doc_id)
            report.reject(line, f"duplicate id {doc_id!r}")
            continue
        seen_ids.add(doc_id)

        documents.append(Document(
            id=doc_id,
            text=doc_text,
            label=label,
            location=values.get("location") or None,
            keyword=values.get("keyword") or None,
            date=values.get("date") or None,
        ))

    report.rows_loaded = len(documents)
    if report.rejected:
        logger.warning(f"{path}: rejected {len(report.rejected)} of {report.rows_read} rows")
    logger.info(f"Loaded {report.rows_loaded} documents from {path} ({encoding})")

    if not documents:
        raise EmptyCorpusError(f"{path}: no valid rows")
    return documents


def load_csv(
    path: PathLike,
    schema: LabelSchema,
    report: Optional[LoadReport] = None,
    encoding: str = "utf-8",
) -> LabeledDataset:
    """
    Load a labeled dataset from a CSV file.

    Args:
        path: CSV file with a header row
        schema: Label schema giving the column layout and label decoder
        report: Optional LoadReport to fill in (row counts, rejected rows)
        encoding: Declared file encoding; Latin-1 is the fallback

    Returns:
        LabeledDataset with one Document per well-formed row

    Raises:
        MissingFileError: File does not exist
        MissingColumnError: Header lacks the text or label column
        CorpusFormatError: Unbalanced quote at end of file
        EmptyCorpusError: No valid rows
    """
    if report is None:
        report = LoadReport(path=str(path))
    documents = _parse_documents(path, schema, labeled=True, report=report, encoding=encoding)
    return LabeledDataset(schema, tuple(documents))


def load_unlabeled_csv(
    path: PathLike, schema: LabelSchema, encoding: str = "utf-8"
) -> Tuple[Document, ...]:
    """Load documents from a CSV without a label column (e.g. a competition test file)."""
    report = LoadReport(path=str(path))
    return tuple(_parse_documents(path, schema, labeled=False, report=report, encoding=encoding))


def write_csv(dataset: LabeledDataset, path: PathLike) -> None:
    """
    Write a dataset back to CSV in its schema's column layout.

    Labels are written with the schema's label encoder so that load_csv
    reproduces the same documents.
    """
    schema = dataset.schema
    columns = list(schema.column_map.items())
    encoder = schema.label_encoder

    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow([column for column, _ in columns])
        for doc in dataset.documents:
            row = []
            for _, target in columns:
                if target == "label":
                    row.append(encoder[doc.label])
                else:
                    row.append(getattr(doc, target) or "")
            writer.writerow(row)
