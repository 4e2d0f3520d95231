"""
Exhaustive grid search over pipeline hyperparameters.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.app.pipeline import PipelineConfig
from src.corpus.schema import LabeledDataset
from src.evaluation.crossval import CVResult, FoldSpec, kfold_cv
from src.evaluation.metrics import Scoring
from src.models.config import TrainConfig
from src.textprep.pipeline import PrepConfig, preprocess

logger = logging.getLogger(__name__)

# Axis name -> dotted path inside PipelineConfig
AXIS_PATHS: Dict[str, str] = {
    "penalty": "model.penalty",
    "C": "model.C",
    "class_weights": "model.class_weights",
    "min_count": "min_count",
    "ngram_range": "ngram_range",
    "remove_stopwords": "prep.remove_stopwords",
    "weighting": "weighting",
}
MODEL_AXES = ("penalty", "C", "class_weights")


class GridSpec(BaseModel):
    """
    A base pipeline plus named axes to sweep.

    Points are enumerated with itertools.product over the axes in the order
    given, so the grid size is the product of the axis lengths.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    base: PipelineConfig = Field(default_factory=lambda: PipelineConfig(model=TrainConfig()))
    axes: Dict[str, List[Any]]
    scoring: Scoring = "weighted_f1"

    @model_validator(mode="after")
    def _check_axes(self) -> "GridSpec":
        if not self.axes:
            raise ValueError("grid needs at least one axis")
        for name, values in self.axes.items():
            if name not in AXIS_PATHS:
                raise ValueError(f"unknown grid axis '{name}', expected one of {list(AXIS_PATHS)}")
            if not values:
                raise ValueError(f"grid axis '{name}' is empty")
        if not isinstance(self.base.model, TrainConfig):
            model_axes = sorted(set(self.axes) & set(MODEL_AXES))
            if model_axes:
                raise ValueError(f"axes {model_axes} need a logistic regression base model")
        return self

    @property
    def size(self) -> int:
        total = 1
        for values in self.axes.values():
            total *= len(values)
        return total

    def points(self) -> List[Dict[str, Any]]:
        """Axis assignments in enumeration order."""
        names = list(self.axes)
        return [dict(zip(names, combo)) for combo in itertools.product(*self.axes.values())]

    def config_for(self, point: Dict[str, Any]) -> PipelineConfig:
        return self.base.with_overrides({AXIS_PATHS[name]: value for name, value in point.items()})


@dataclass(frozen=True)
class GridRow:
    """One evaluated grid point."""
    index: int
    point: Dict[str, Any]
    config: PipelineConfig
    result: CVResult

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "point": {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.point.items()},
            "config": self.config.describe(),
            **self.result.to_dict(),
        }


def _evaluate_point(
    dataset: LabeledDataset,
    config: PipelineConfig,
    folds: FoldSpec,
    scoring: str,
    tokens: List[List[str]],
) -> CVResult:
    return kfold_cv(dataset, config, folds, scoring=scoring, tokens=tokens)


def grid_search(
    dataset: LabeledDataset,
    grid: GridSpec,
    folds: FoldSpec = FoldSpec(),
    jobs: int = 1,
) -> Tuple[PipelineConfig, List[GridRow]]:
    """
    Cross-validate every grid point and pick the best.

    The best point has the highest mean score; ties go to the point
    enumerated first. Preprocessing is computed once per distinct PrepConfig.

    Args:
        dataset: Labeled documents
        grid: Base config, axes and scoring metric
        folds: Cross-validation layout shared by every point
        jobs: Worker processes across grid points (1 runs inline)

    Returns:
        (best config, results in grid enumeration order)
    """
    points = grid.points()
    configs = [grid.config_for(point) for point in points]
    logger.info(f"Grid search over {len(points)} points with {folds.k}-fold CV")

    token_cache: Dict[PrepConfig, List[List[str]]] = {}
    for config in configs:
        if config.prep not in token_cache:
            token_cache[config.prep] = [preprocess(text, config.prep) for text in dataset.texts]

    tasks = [
        (dataset, config, folds, grid.scoring, token_cache[config.prep]) for config in configs
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_point, *zip(*tasks)))
    else:
        results = [_evaluate_point(*task) for task in tasks]

    rows = [
        GridRow(index=i, point=point, config=config, result=result)
        for i, (point, config, result) in enumerate(zip(points, configs, results))
    ]
    best: Optional[GridRow] = None
    for row in rows:
        if best is None or row.result.mean > best.result.mean:
            best = row

    logger.info(f"Best grid point #{best.index}: {best.config.describe()} ({best.result.mean:.4f})")
    return best.config, rows
