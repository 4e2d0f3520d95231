"""
Seeded, stratified hold-out splits and fold assignment.
"""
import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.core.exceptions import SplitError
from src.corpus.schema import LabeledDataset, SplitSpec

logger = logging.getLogger(__name__)


def _group_by_label(labels: Sequence[str], order: Sequence[int]) -> Dict[str, List[int]]:
    groups: Dict[str, List[int]] = {}
    for i in order:
        groups.setdefault(labels[i], []).append(i)
    return groups


def _holdout_quota(class_sizes: Dict[str, int], fraction: float) -> Dict[str, int]:
    """
    Per-class hold-out counts summing to round(fraction * N).

    Largest-remainder apportionment: each class gets floor(fraction * n_k),
    leftover slots go to the largest fractional parts (ties by class order).
    Every class keeps at least one training document.
    """
    total = sum(class_sizes.values())
    target = math.floor(fraction * total + 0.5)
    quota = {label: math.floor(fraction * n) for label, n in class_sizes.items()}
    remainders = sorted(
        class_sizes,
        key=lambda label: -(fraction * class_sizes[label] - quota[label]),
    )
    leftover = target - sum(quota.values())
    for label in remainders:
        if leftover <= 0:
            break
        if quota[label] < class_sizes[label] - 1:
            quota[label] += 1
            leftover -= 1
    return quota


def stratified_split(dataset: LabeledDataset, spec: SplitSpec) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    Split a dataset into train and hold-out parts.

    With stratification, each class contributes a hold-out share within one
    document of fraction * class size. Both parts keep the input's document
    order. The same dataset and spec always give the same split.

    Args:
        dataset: Dataset to split
        spec: Fraction, seed and stratification flag

    Returns:
        (train, holdout)

    Raises:
        SplitError: If a class has fewer than 2 documents
    """
    if not 0.0 < spec.holdout_fraction < 1.0:
        raise SplitError(f"holdout_fraction must be in (0, 1), got {spec.holdout_fraction}")

    counts = dataset.class_counts()
    small = [label for label, n in counts.items() if 0 < n < 2]
    if small:
        raise SplitError(f"Classes with fewer than 2 documents cannot be split: {small}")

    rng = np.random.default_rng(spec.seed)
    labels = dataset.labels
    order = rng.permutation(len(dataset)).tolist()

    if spec.stratified:
        groups = _group_by_label(labels, order)
        sizes = {label: len(members) for label, members in groups.items()}
        quota = _holdout_quota(sizes, spec.holdout_fraction)
        held = set()
        for label, members in groups.items():
            held.update(members[:quota[label]])
    else:
        n_hold = math.floor(spec.holdout_fraction * len(dataset) + 0.5)
        held = set(order[:n_hold])

    train_idx = [i for i in range(len(dataset)) if i not in held]
    hold_idx = [i for i in range(len(dataset)) if i in held]
    logger.info(
        f"Split {len(dataset)} documents into {len(train_idx)} train / "
        f"{len(hold_idx)} holdout (seed {spec.seed})"
    )
    return dataset.subset(train_idx), dataset.subset(hold_idx)


def stratified_fold_ids(labels: Sequence[str], k: int, seed: int) -> List[int]:
    """
    Assign each document to one of k folds, preserving class proportions.

    Documents are permuted once with the seed, grouped by label, and dealt
    round-robin across folds. The dealing position carries over from one
    class to the next so fold sizes differ by at most one.

    Args:
        labels: Label per document
        k: Number of folds (>= 2)
        seed: RNG seed

    Returns:
        Fold index per document

    Raises:
        SplitError: If k < 2, k exceeds the dataset size, or a class has fewer than k members
    """
    if k < 2:
        raise SplitError(f"Need at least 2 folds, got {k}")
    if k > len(labels):
        raise SplitError(f"Cannot make {k} folds from {len(labels)} documents")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(labels)).tolist()
    groups = _group_by_label(labels, order)

    small = [label for label, members in groups.items() if len(members) < k]
    if small:
        raise SplitError(f"Classes with fewer than {k} documents: {small}")

    fold_ids = [0] * len(labels)
    position = 0
    for label in sorted(groups, key=lambda lab: min(groups[lab])):
        for i in groups[label]:
            fold_ids[i] = position % k
            position += 1
    return fold_ids
