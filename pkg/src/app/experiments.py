"""
Canned experiments over the manifest datasets.

reproduce() runs a dataset's baseline and tuned pipelines under its protocol
(hold-out split or 10-fold CV), derives a set of observed metrics keyed like
"tuned.weighted_f1", and checks each against the manifest's published
reference and acceptance band.
"""
import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.app.pipeline import (
    ModelBundle,
    PipelineConfig,
    evaluate_pipeline,
    fit_pipeline,
    predict_texts,
    predict_tokens,
)
from src.app.reporting import render_cv, render_report_table
from src.core.exceptions import ConfigurationError, LabelError, MissingFileError
from src.core.manifest import DatasetEntry, DatasetManifest, Reference, StaticReference
from src.core.settings import get_data_dir, get_seed
from src.core.table_base import render_table
from src.corpus.loader import load_csv, load_unlabeled_csv
from src.corpus.schema import Document, LabeledDataset, LoadReport, SplitSpec
from src.corpus.splits import stratified_split
from src.corpus.transforms import map_labels
from src.evaluation.crossval import CVResult, FoldSpec, kfold_cv
from src.evaluation.metrics import EvalReport, compute_report
from src.models.config import MnbConfig, TrainConfig
from src.textprep.pipeline import preprocess

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
NOT_COMPUTED = "paper-reported, not computed"
ABLATION_STAGES = ("normalize", "lowercase", "stem", "remove_stopwords", "bigrams")


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_dataset(
    entry: DatasetEntry, data_dir: PathLike, merge: bool = True
) -> Tuple[LabeledDataset, LoadReport]:
    """
    Load a manifest dataset's training file.

    Args:
        entry: Manifest entry
        data_dir: Directory holding the CSV files
        merge: Apply the entry's label_merge, if any

    Raises:
        MissingFileError: The CSV is absent; the message names the file and its source
    """
    path = entry.train_path(Path(data_dir))
    if not path.exists():
        raise MissingFileError(
            f"Expected {entry.files.train} in {data_dir} for dataset '{entry.key}'. "
            f"Download it from {entry.source}"
        )
    report = LoadReport(path=str(path))
    dataset = load_csv(path, entry.schema(), report, encoding=entry.encoding_hint)
    if merge and entry.label_merge:
        dataset = map_labels(dataset, entry.label_merge)
    return dataset, report


def load_test_documents(entry: DatasetEntry, data_dir: PathLike) -> Tuple[Document, ...]:
    """Unlabeled competition test documents."""
    path = entry.test_path(Path(data_dir))
    if path is None:
        raise ConfigurationError(f"Dataset '{entry.key}' declares no test file")
    if not path.exists():
        raise MissingFileError(
            f"Expected {entry.files.test} in {data_dir} for dataset '{entry.key}'. "
            f"Download it from {entry.source}"
        )
    return load_unlabeled_csv(path, entry.schema(), encoding=entry.encoding_hint)


def write_submission(
    bundle: ModelBundle,
    documents: Sequence[Document],
    path: PathLike,
    encoder: Dict[str, str],
) -> int:
    """
    Write a Kaggle submission file: header id,target, one row per document.

    Args:
        encoder: Label -> raw code (the schema's label_encoder)

    Returns:
        Number of rows written
    """
    predictions = predict_texts(bundle, [doc.text for doc in documents])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "target"])
        for doc, pred in zip(documents, predictions):
            writer.writerow([doc.id, encoder[pred.label]])
    logger.info(f"Wrote {len(documents)} predictions to {path}")
    return len(documents)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def two_stage_predict(
    router: ModelBundle,
    sentiment: ModelBundle,
    tokens: Sequence[Sequence[str]],
    news_label: str = "News",
) -> List[str]:
    """
    Label pre-tokenized documents with a fitted cascade.

    Documents the router calls news keep that label; only the rest are
    passed to the sentiment model.
    """
    routed = predict_tokens(router, tokens)
    final = [news_label] * len(tokens)
    to_stage_two = [i for i, pred in enumerate(routed) if pred.label != news_label]
    if to_stage_two:
        stage_two = predict_tokens(sentiment, [tokens[i] for i in to_stage_two])
        for i, pred in zip(to_stage_two, stage_two):
            final[i] = pred.label
    return final


def run_two_stage(
    train: LabeledDataset,
    holdout: LabeledDataset,
    config: PipelineConfig,
    news_label: str = "News",
    seed: Optional[int] = None,
) -> Tuple[EvalReport, EvalReport]:
    """
    Compare a news/non-news cascade against a single classifier.

    Stage 1 separates news from everything else; stage 2 is trained on the
    non-news rows only and labels the documents stage 1 called non-news.

    Returns:
        (two-stage report, single-stage report), both over all original classes

    Raises:
        LabelError: The schema has no news label or fewer than two other classes
    """
    labels = train.schema.labels
    if news_label not in labels or len(labels) < 3:
        raise LabelError(
            f"Two-stage run needs '{news_label}' plus at least two sentiment classes, "
            f"got {list(labels)}"
        )
    other = "non-news" if news_label != "non-news" else "other"
    routing = {label: (news_label if label == news_label else other) for label in labels}

    train_tokens = [preprocess(text, config.prep) for text in train.texts]
    holdout_tokens = [preprocess(text, config.prep) for text in holdout.texts]

    single = fit_pipeline(train, config, seed=seed, tokens=train_tokens)
    single_report = evaluate_pipeline(single, holdout, tokens=holdout_tokens)

    router = fit_pipeline(map_labels(train, routing), config, seed=seed, tokens=train_tokens)
    sentiment_rows = [i for i, label in enumerate(train.labels) if label != news_label]
    sentiment = fit_pipeline(
        train.subset(sentiment_rows),
        config,
        seed=seed,
        tokens=[train_tokens[i] for i in sentiment_rows],
    )

    final = two_stage_predict(router, sentiment, holdout_tokens, news_label)
    two_stage_report = compute_report(holdout.labels, final, single.classes)
    logger.info(
        f"Two-stage weighted F1 {two_stage_report.weighted.f1:.4f} vs "
        f"single {single_report.weighted.f1:.4f}"
    )
    return two_stage_report, single_report


def compare_models(
    dataset: LabeledDataset,
    pipeline: PipelineConfig,
    folds: FoldSpec = FoldSpec(),
    scoring: str = "weighted_f1",
    jobs: int = 1,
) -> Dict[str, CVResult]:
    """
    Cross-validate Naive Bayes and default logistic regression (l2, C=1) on
    the same features.

    Returns:
        {"mnb": CVResult, "logreg": CVResult}
    """
    tokens = [preprocess(text, pipeline.prep) for text in dataset.texts]
    candidates = {
        "mnb": MnbConfig(),
        "logreg": TrainConfig(penalty="l2", C=1.0),
    }
    results = {}
    for name, model in candidates.items():
        config = pipeline.model_copy(update={"model": model})
        results[name] = kfold_cv(dataset, config, folds, scoring=scoring, jobs=jobs, tokens=tokens)
    return results


@dataclass(frozen=True)
class AblationRow:
    stage: str
    setting: str
    score: float
    delta: float

    def to_dict(self) -> Dict[str, Any]:
        return {"stage": self.stage, "setting": self.setting, "score": self.score, "delta": self.delta}


def _toggle(config: PipelineConfig, stage: str) -> Tuple[PipelineConfig, str]:
    if stage == "bigrams":
        hi = 1 if config.ngram_range.hi > 1 else 2
        return config.with_overrides({"ngram_range": [1, hi]}), f"ngram_range=(1,{hi})"
    value = not getattr(config.prep, stage)
    return config.with_overrides({f"prep.{stage}": value}), f"{stage}={'on' if value else 'off'}"


def ablate(
    dataset: LabeledDataset,
    pipeline: PipelineConfig,
    folds: FoldSpec = FoldSpec(),
    scoring: str = "weighted_f1",
    jobs: int = 1,
    stages: Sequence[str] = ABLATION_STAGES,
) -> List[AblationRow]:
    """
    Flip one preprocessing stage at a time and report the CV score change.

    The first row is the unmodified pipeline (delta 0).
    """
    unknown = sorted(set(stages) - set(ABLATION_STAGES))
    if unknown:
        raise ConfigurationError(f"Unknown ablation stages {unknown}; valid: {ABLATION_STAGES}")

    reference = kfold_cv(dataset, pipeline, folds, scoring=scoring, jobs=jobs)
    rows = [AblationRow("as configured", pipeline.describe(), reference.mean, 0.0)]
    for stage in stages:
        variant, setting = _toggle(pipeline, stage)
        result = kfold_cv(dataset, variant, folds, scoring=scoring, jobs=jobs)
        rows.append(AblationRow(stage, setting, result.mean, result.mean - reference.mean))
        logger.info(f"Ablation {setting}: {result.mean:.4f} ({result.mean - reference.mean:+.4f})")
    return rows


# ---------------------------------------------------------------------------
# Reproduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    """An observed metric set against its published reference."""
    key: str
    observed: float
    reference: float
    check: str
    band: Optional[float]
    citation: str
    passed: Optional[bool]

    @property
    def expectation(self) -> str:
        if self.check == "band":
            return f"{self.reference:.3f} +/- {self.band:.3f}"
        if self.check == "at_least":
            return f">= {self.reference:.3f}"
        if self.check == "at_most":
            return f"<= {self.reference:.3f}"
        return f"{self.reference:.3f} (info)"

    @property
    def status(self) -> str:
        if self.passed is None:
            return "info"
        return "ok" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "key": self.key,
            "observed": self.observed,
            "reference": self.reference,
            "check": self.check,
            "band": self.band,
            "citation": self.citation,
            "passed": self.passed,
        }


def evaluate_checks(references: Sequence[Reference], observed: Dict[str, float]) -> List[Check]:
    """
    Pair each reference with its observed value.

    Raises:
        ConfigurationError: A reference names a metric the run did not produce
    """
    missing = [ref.key for ref in references if ref.key not in observed]
    if missing:
        raise ConfigurationError(
            f"References name metrics that were not computed: {missing}. "
            f"Computed: {sorted(observed)}"
        )
    checks = []
    for ref in references:
        value = observed[ref.key]
        if ref.check == "band":
            passed: Optional[bool] = abs(value - ref.value) <= ref.band + 1e-12
        elif ref.check == "at_least":
            passed = value >= ref.value
        elif ref.check == "at_most":
            passed = value <= ref.value
        else:
            passed = None
        checks.append(Check(ref.key, value, ref.value, ref.check, ref.band, ref.citation, passed))
    return checks


@dataclass
class ReproductionReport:
    """Everything reproduce() computed for one dataset."""
    dataset: str
    seed: int
    tuned: PipelineConfig
    checks: List[Check] = field(default_factory=list)
    static_references: List[StaticReference] = field(default_factory=list)
    reports: Dict[str, EvalReport] = field(default_factory=dict)
    cv_results: Dict[str, CVResult] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    submission_path: Optional[str] = None

    @property
    def failed(self) -> List[Check]:
        return [check for check in self.checks if check.passed is False]

    def render(self) -> str:
        sections = [f"Reproduction: {self.dataset} (seed {self.seed})"]
        for name, report in self.reports.items():
            sections.append(render_report_table(report, title=f"[{name}]"))
        for name, result in self.cv_results.items():
            sections.append(render_cv(result, title=f"[{name} {len(result.fold_scores)}-fold CV]"))
        sections.append(render_table(
            ["metric", "observed", "expected", "status", "citation"],
            [[c.key, f"{c.observed:.4f}", c.expectation, c.status, c.citation] for c in self.checks],
            title="[checks]",
        ))
        if self.static_references:
            sections.append(render_table(
                ["model", "metric", "value", "status", "citation"],
                [[r.model, r.metric, r.value, NOT_COMPUTED, r.citation] for r in self.static_references],
                title="[reference models]",
            ))
        sections.extend(self.notes)
        verdict = "all checks passed" if not self.failed else (
            f"{len(self.failed)} check(s) outside their band: "
            + ", ".join(c.key for c in self.failed)
        )
        sections.append(verdict)
        return "\n\n".join(sections)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "static_references": [
                {**r.model_dump(), "status": NOT_COMPUTED} for r in self.static_references
            ],
            "reports": {name: r.to_dict() for name, r in self.reports.items()},
            "cv": {name: r.to_dict() for name, r in self.cv_results.items()},
            "notes": list(self.notes),
            "submission": self.submission_path,
            "passed": not self.failed,
        }


def _record(observed: Dict[str, float], prefix: str, report: EvalReport) -> None:
    observed[f"{prefix}.accuracy"] = report.accuracy
    observed[f"{prefix}.weighted_f1"] = report.weighted.f1
    observed[f"{prefix}.macro_f1"] = report.macro.f1


def _record_cv(observed: Dict[str, float], prefix: str, result: CVResult) -> None:
    for scoring in ("accuracy", "weighted_f1", "macro_f1"):
        observed[f"{prefix}.{scoring}"] = result.mean_of(scoring)


def _holdout_run(
    name: str,
    train: LabeledDataset,
    holdout: LabeledDataset,
    config: PipelineConfig,
    seed: int,
    run: ReproductionReport,
    observed: Dict[str, float],
) -> EvalReport:
    bundle = fit_pipeline(train, config, seed=seed)
    report = evaluate_pipeline(bundle, holdout)
    run.reports[name] = report
    _record(observed, name, report)
    return report


def _reproduce_climate(entry, dataset, seed, defaults, run, observed, jobs, **_) -> None:
    train, holdout = stratified_split(
        dataset, SplitSpec(holdout_fraction=defaults.holdout_fraction, seed=seed)
    )
    baseline, tuned = entry.pipeline("baseline"), entry.pipeline("tuned")
    folds = FoldSpec(k=defaults.folds, seed=seed)

    _holdout_run("baseline", train, holdout, baseline, seed, run, observed)
    tfidf = baseline.model_copy(update={"weighting": "tfidf"})
    _holdout_run("baseline_tfidf", train, holdout, tfidf, seed, run, observed)
    observed["tfidf_gap"] = observed["baseline.weighted_f1"] - observed["baseline_tfidf.weighted_f1"]

    _holdout_run("tuned", train, holdout, tuned, seed, run, observed)

    cv = kfold_cv(train, tuned, folds, scoring=entry.scoring, jobs=jobs)
    run.cv_results["tuned_cv"] = cv
    _record_cv(observed, "tuned_cv", cv)

    two_stage, single = run_two_stage(train, holdout, tuned, seed=seed)
    run.reports["two_stage"] = two_stage
    _record(observed, "two_stage", two_stage)
    observed["two_stage_gap"] = two_stage.weighted.f1 - single.weighted.f1

    for name, result in compare_models(train, tuned, folds, entry.scoring, jobs).items():
        run.cv_results[f"compare.{name}"] = result
        _record_cv(observed, f"compare.{name}", result)


def _reproduce_coronavirus(entry, dataset, seed, defaults, run, observed, jobs, raw=None, **_) -> None:
    spec = SplitSpec(holdout_fraction=defaults.holdout_fraction, seed=seed)
    baseline, tuned = entry.pipeline("baseline"), entry.pipeline("tuned")
    folds = FoldSpec(k=defaults.folds, seed=seed)

    train, holdout = stratified_split(dataset, spec)
    _holdout_run("baseline", train, holdout, baseline, seed, run, observed)
    _holdout_run("tuned", train, holdout, tuned, seed, run, observed)

    for name, result in compare_models(train, tuned, folds, entry.scoring, jobs).items():
        run.cv_results[f"compare.{name}"] = result
        _record_cv(observed, f"compare.{name}", result)

    if raw is not None:
        raw_train, raw_holdout = stratified_split(raw, spec)
        five_baseline = _holdout_run(
            "five_class_baseline", raw_train, raw_holdout, baseline, seed, run, observed
        )
        for label, metrics in five_baseline.per_class.items():
            observed[f"five_class_baseline.recall.{label}"] = metrics.recall
            logger.info(f"Five-class baseline recall {label}: {metrics.recall:.3f}")
        _holdout_run("five_class", raw_train, raw_holdout, tuned, seed, run, observed)


def _reproduce_disaster(
    entry, dataset, seed, defaults, run, observed, jobs, data_dir=None, output_dir=None, **_
) -> None:
    baseline, tuned = entry.pipeline("baseline"), entry.pipeline("tuned")
    folds = FoldSpec(k=defaults.folds, seed=seed)

    for name, config in (("baseline_cv", baseline), ("tuned_cv", tuned)):
        result = kfold_cv(dataset, config, folds, scoring=entry.scoring, jobs=jobs)
        run.cv_results[name] = result
        _record_cv(observed, name, result)

    for name, result in compare_models(dataset, tuned, folds, entry.scoring, jobs).items():
        run.cv_results[f"compare.{name}"] = result
        _record_cv(observed, f"compare.{name}", result)

    test_path = entry.test_path(Path(data_dir)) if data_dir is not None else None
    if test_path is not None and test_path.exists() and output_dir is not None:
        bundle = fit_pipeline(dataset, tuned, seed=seed)
        target = Path(output_dir) / "submission.csv"
        write_submission(bundle, load_test_documents(entry, data_dir), target,
                         dataset.schema.label_encoder)
        run.submission_path = str(target)
        run.notes.append(
            f"Kaggle submission written to {target}; the test labels are not public, "
            "so it is not scored here."
        )
    else:
        run.notes.append("No submission written (test.csv or output directory missing).")


_RUNNERS = {
    "climate": _reproduce_climate,
    "coronavirus": _reproduce_coronavirus,
    "disaster": _reproduce_disaster,
}


def reproduce(
    dataset_name: str,
    data_dir: Optional[PathLike] = None,
    seed: Optional[int] = None,
    manifest: Optional[DatasetManifest] = None,
    output_dir: Optional[PathLike] = None,
    jobs: int = 1,
) -> ReproductionReport:
    """
    Re-run a dataset's published experiments and compare with the references.

    Args:
        dataset_name: Manifest key (climate, coronavirus, disaster)
        data_dir: Directory with the CSVs (default from TWEETCLS_DATA_DIR)
        seed: Split/fold seed (default from TWEETCLS_SEED, then the manifest)
        manifest: Loaded manifest (default config/datasets.yaml)
        output_dir: Where artifacts such as the submission file go
        jobs: Worker processes for cross-validation

    Returns:
        ReproductionReport; callers decide what a failed check means

    Raises:
        DatasetNotFoundError: Unknown dataset name
        MissingFileError: Expected CSV absent (message names file and source)
    """
    manifest = manifest or DatasetManifest()
    entry = manifest.get_dataset(dataset_name)
    data_dir = get_data_dir(str(data_dir) if data_dir is not None else None)
    seed = get_seed(seed, manifest.defaults.seed)

    raw = None
    dataset, load_report = load_dataset(entry, data_dir, merge=False)
    if entry.label_merge:
        raw, dataset = dataset, map_labels(dataset, entry.label_merge)

    run = ReproductionReport(
        dataset=dataset_name,
        seed=seed,
        tuned=entry.pipeline("tuned"),
        static_references=list(entry.bert_references),
    )
    if load_report.rejected:
        run.notes.append(f"{len(load_report.rejected)} malformed rows skipped while loading.")

    observed: Dict[str, float] = {}
    runner = _RUNNERS[dataset_name]
    runner(
        entry, dataset, seed, manifest.defaults, run, observed, jobs,
        raw=raw, data_dir=data_dir, output_dir=output_dir,
    )
    run.checks = evaluate_checks(entry.references, observed)
    logger.info(f"Reproduction of '{dataset_name}': {len(run.failed)} failed checks")
    return run
