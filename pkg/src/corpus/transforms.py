"""
Label remapping and class statistics for labeled datasets.
"""
from dataclasses import replace
from typing import Dict, Mapping

from src.core.exceptions import EmptyCorpusError, LabelError
from src.corpus.schema import LabeledDataset


def map_labels(dataset: LabeledDataset, mapping: Mapping[str, str]) -> LabeledDataset:
    """
    Relabel every document through a label -> label mapping.

    The new schema's labels are the mapping's image, ordered by first
    appearance when walking the old schema's labels. Raw CSV values keep
    decoding, now to the mapped label. Document order and text are unchanged.

    Args:
        dataset: Dataset to relabel
        mapping: Old label -> new label; must cover every label present in the data

    Returns:
        Relabeled dataset

    Raises:
        LabelError: If a label present in the data is missing from the mapping
    """
    present = set(dataset.labels)
    missing = [label for label in dataset.schema.labels if label in present and label not in mapping]
    if missing:
        raise LabelError(f"Labels present in data but not mapped: {missing}")

    new_labels = []
    for label in dataset.schema.labels:
        target = mapping.get(label)
        if target is not None and target not in new_labels:
            new_labels.append(target)

    decoder: Dict[str, str] = {}
    for raw, label in dataset.schema.label_decoder.items():
        if label in mapping:
            decoder[raw] = mapping[label]
    identity = all(mapping[label] == label for label in dataset.schema.labels if label in mapping)
    if not dataset.schema.label_decoder and not identity:
        # Old label strings keep decoding so files written under the old schema still load
        for label in dataset.schema.labels:
            if label in mapping:
                decoder[label] = mapping[label]
        for label in new_labels:
            decoder.setdefault(label, label)

    schema = dataset.schema.with_labels(tuple(new_labels), decoder)
    documents = tuple(replace(doc, label=mapping[doc.label]) for doc in dataset.documents)
    return LabeledDataset(schema, documents)


def class_distribution(dataset: LabeledDataset) -> Dict[str, float]:
    """
    Fraction of documents per schema label.

    Returns:
        label -> fraction, every schema label present (possibly 0.0)

    Raises:
        EmptyCorpusError: If the dataset has no documents
    """
    if len(dataset) == 0:
        raise EmptyCorpusError("Cannot compute class distribution of an empty dataset")
    total = len(dataset)
    return {label: count / total for label, count in dataset.class_counts().items()}
