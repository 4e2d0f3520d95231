"""
Corpus handling: loading, validating, relabeling and splitting tweet datasets.
"""
from src.corpus.schema import (
    Document,
    LabelSchema,
    LabeledDataset,
    LoadReport,
    SplitSpec,
)
from src.corpus.loader import load_csv, load_unlabeled_csv, write_csv
from src.corpus.transforms import map_labels, class_distribution
from src.corpus.splits import stratified_split, stratified_fold_ids

__all__ = [
    "Document",
    "LabelSchema",
    "LabeledDataset",
    "LoadReport",
    "SplitSpec",
    "load_csv",
    "load_unlabeled_csv",
    "write_csv",
    "map_labels",
    "class_distribution",
    "stratified_split",
    "stratified_fold_ids",
]
