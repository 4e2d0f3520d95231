"""
Stratified k-fold cross-validation of whole pipelines.

Each fold refits every stage (vocabulary and IDF included) on the other k-1
folds, so no statistic of the held fold leaks into training.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import chain
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.app.pipeline import PipelineConfig, TokenLists, evaluate_pipeline, fit_pipeline
from src.core.exceptions import EmptyCorpusError, SplitError
from src.corpus.schema import LabeledDataset
from src.corpus.splits import stratified_fold_ids
from src.evaluation.metrics import EvalReport
from src.textprep.pipeline import preprocess

logger = logging.getLogger(__name__)


class FoldSpec(BaseModel):
    """Cross-validation layout."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    k: int = Field(default=10, ge=2)
    seed: int = Field(default=42, ge=0)
    stratified: bool = True


@dataclass(frozen=True)
class CVResult:
    """Mean and spread of one scoring metric over the folds."""
    scoring: str
    mean: float
    std: float
    fold_scores: Tuple[float, ...]
    fold_reports: Tuple[EvalReport, ...]

    def __iter__(self):
        """Unpacks as (mean, std, fold_reports)."""
        return iter((self.mean, self.std, self.fold_reports))

    def mean_of(self, scoring: str) -> float:
        """Mean of another metric over the same folds."""
        return float(np.mean([report.score(scoring) for report in self.fold_reports]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scoring": self.scoring,
            "mean": self.mean,
            "std": self.std,
            "fold_scores": list(self.fold_scores),
        }


def assign_folds(labels: Sequence[str], folds: FoldSpec) -> List[List[int]]:
    """
    Document indices per fold.

    Raises:
        SplitError: k out of range, or a class smaller than k when stratified
    """
    n = len(labels)
    if folds.stratified:
        fold_ids = stratified_fold_ids(labels, folds.k, folds.seed)
    else:
        if folds.k > n:
            raise SplitError(f"k={folds.k} exceeds dataset size {n}")
        order = np.random.default_rng(folds.seed).permutation(n)
        fold_ids = [0] * n
        for position, index in enumerate(order):
            fold_ids[int(index)] = position % folds.k

    members: List[List[int]] = [[] for _ in range(folds.k)]
    for index, fold in enumerate(fold_ids):
        members[fold].append(index)

    assert sorted(chain.from_iterable(members)) == list(range(n)), "folds must partition the data"
    return members


def _run_fold(
    dataset: LabeledDataset,
    pipeline: PipelineConfig,
    tokens: TokenLists,
    train_idx: List[int],
    test_idx: List[int],
    seed: int,
) -> EvalReport:
    bundle = fit_pipeline(
        dataset.subset(train_idx), pipeline, seed=seed, tokens=[tokens[i] for i in train_idx]
    )
    return evaluate_pipeline(bundle, dataset.subset(test_idx), tokens=[tokens[i] for i in test_idx])


def kfold_cv(
    dataset: LabeledDataset,
    pipeline: PipelineConfig,
    folds: FoldSpec = FoldSpec(),
    scoring: str = "weighted_f1",
    jobs: int = 1,
    tokens: Optional[TokenLists] = None,
) -> CVResult:
    """
    Cross-validate a pipeline configuration.

    Args:
        dataset: Labeled documents
        pipeline: Configuration refit on every fold
        folds: k, seed and stratification
        scoring: accuracy, macro_f1 or weighted_f1
        jobs: Worker processes for fold evaluation (1 runs inline)
        tokens: Preprocessed token lists aligned with dataset, if already computed

    Returns:
        CVResult with fold results in fold order regardless of completion order

    Raises:
        EmptyCorpusError: Empty dataset
        SplitError: Class smaller than k
    """
    if len(dataset) == 0:
        raise EmptyCorpusError("Cannot cross-validate an empty dataset")
    members = assign_folds(dataset.labels, folds)
    if tokens is None:
        tokens = [preprocess(text, pipeline.prep) for text in dataset.texts]

    n = len(dataset)
    tasks = []
    for test_idx in members:
        held = set(test_idx)
        train_idx = [i for i in range(n) if i not in held]
        tasks.append((dataset, pipeline, tokens, train_idx, test_idx, folds.seed))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_fold, *zip(*tasks)))
    else:
        reports = [_run_fold(*task) for task in tasks]

    scores = tuple(report.score(scoring) for report in reports)
    result = CVResult(
        scoring=scoring,
        mean=float(np.mean(scores)),
        std=float(np.std(scores)),
        fold_scores=scores,
        fold_reports=tuple(reports),
    )
    logger.info(
        f"{folds.k}-fold CV {pipeline.describe()}: {scoring} {result.mean:.4f} +/- {result.std:.4f}"
    )
    return result
