#!/usr/bin/env python3
"""
Command-line interface for the tweet classification toolkit.

Results go to stdout (plain tables, or one JSON document with --json);
diagnostics go to stderr. Exit codes: 0 success, 1 usage or configuration
error, 2 data error, 3 a reproduce check outside its acceptance band.
"""
import sys
import os

# Add parent directory to path for src/ imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import yaml
from pydantic import ValidationError

from src.app.bundle import load_bundle, save_bundle
from src.app.error_analysis import dump_errors
from src.app.experiments import (
    ABLATION_STAGES,
    ablate,
    load_dataset,
    reproduce,
    write_submission,
)
from src.app.pipeline import PipelineConfig, evaluate_pipeline, fit_pipeline, predict_texts
from src.app.reporting import (
    dumps,
    json_document,
    render_confusion,
    render_cv,
    render_distribution,
    render_grid,
    render_report_table,
    render_settings,
)
from src.core.exceptions import (
    AcceptanceError,
    ConfigurationError,
    DataError,
    DatasetNotFoundError,
)
from src.core.manifest import DatasetEntry, DatasetManifest
from src.core.settings import get_data_dir, get_log_level, get_seed
from src.core.table_base import render_key_values, render_table
from src.corpus.loader import load_unlabeled_csv, write_csv
from src.corpus.schema import LabeledDataset, SplitSpec
from src.corpus.splits import stratified_split
from src.corpus.transforms import class_distribution
from src.evaluation.crossval import FoldSpec, kfold_cv
from src.evaluation.grid import GridSpec, grid_search
from src.evaluation.metrics import SCORINGS
from src.textprep.pipeline import PrepConfig, trace
from src.textprep.stopwords import ENGLISH_STOPWORDS, STOPWORDS_VERSION

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ACCEPTANCE = 3

logger = logging.getLogger("tweetcls")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(prog="tweetcls", description="Tweet feature engineering and classification")
    parser.add_argument("--seed", type=int, default=None, help="Split/fold seed (default 42)")
    parser.add_argument("--json", action="store_true", help="Emit one JSON document on stdout")
    parser.add_argument("--data-dir", default=None, help="Directory holding the dataset CSVs")
    parser.add_argument("--manifest", default=None, help="Path to an alternative datasets.yaml")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes for cv/grid")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeat for debug)")

    subparsers = parser.add_subparsers(dest="command", metavar="command")

    # datasets
    subparsers.add_parser("datasets", help="List the datasets declared in the manifest")

    # inspect
    p = subparsers.add_parser("inspect", help="Row counts and class distribution of a dataset")
    p.add_argument("dataset")
    p.add_argument("--no-merge", action="store_true", help="Keep the raw (unmerged) labels")

    # split
    p = subparsers.add_parser("split", help="Write the seeded stratified train/holdout split")
    p.add_argument("dataset")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--holdout-fraction", type=float, default=None)
    p.add_argument("--no-merge", action="store_true")

    # train
    p = subparsers.add_parser("train", help="Fit a pipeline and save the model bundle")
    _add_pipeline_args(p)
    p.add_argument("--out", required=True, help="Bundle path (JSON)")
    p.add_argument("--full", action="store_true", help="Train on all rows instead of the training split")

    # eval
    p = subparsers.add_parser("eval", help="Score a bundle on the dataset's holdout split")
    p.add_argument("bundle")
    p.add_argument("dataset")
    p.add_argument("--no-merge", action="store_true")
    p.add_argument("--confusion", action="store_true", help="Also print the confusion matrix")

    # cv
    p = subparsers.add_parser("cv", help="k-fold cross-validation of a pipeline")
    _add_pipeline_args(p)
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--scoring", choices=SCORINGS, default=None)

    # grid
    p = subparsers.add_parser("grid", help="Grid search over pipeline hyperparameters")
    _add_pipeline_args(p)
    p.add_argument("--grid", default=None, help="YAML file with 'axes' (and optional 'scoring')")
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--scoring", choices=SCORINGS, default=None)

    # predict
    p = subparsers.add_parser("predict", help="Classify texts with a saved bundle")
    p.add_argument("bundle")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", action="append", help="Text to classify (repeatable)")
    group.add_argument("--input", help="CSV with the dataset's text column")
    p.add_argument("--submission", default=None, help="Write a Kaggle id,target file")

    # reproduce
    p = subparsers.add_parser("reproduce", help="Re-run the published experiments for a dataset")
    p.add_argument("dataset")
    p.add_argument("--output-dir", default="out", help="Where artifacts such as submission.csv go")

    # errors
    p = subparsers.add_parser("errors", help="Most confident holdout mistakes of a bundle")
    p.add_argument("bundle")
    p.add_argument("dataset")
    p.add_argument("-n", type=int, default=20)
    p.add_argument("--no-merge", action="store_true")

    # prep
    p = subparsers.add_parser("prep", help="Show preprocessing output")
    p.add_argument("texts", nargs="*", help="Texts to preprocess")
    p.add_argument("--text", action="append", default=[], help="Text to preprocess (repeatable)")
    p.add_argument("--trace", action="store_true", help="Show every stage")
    p.add_argument("--show-stopwords", action="store_true", help="Print the shipped stopword list")
    p.add_argument("--full", action="store_true", help="normalize + lowercase + stem")
    for stage in ("normalize", "lowercase", "stem", "remove-stopwords", "emoticon-polarity"):
        p.add_argument(f"--{stage}", action="store_true")

    # ablate
    p = subparsers.add_parser("ablate", help="CV score change when toggling each preprocessing stage")
    _add_pipeline_args(p)
    p.add_argument("--stages", nargs="+", choices=ABLATION_STAGES, default=list(ABLATION_STAGES))
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--scoring", choices=SCORINGS, default=None)

    return parser


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("dataset")
    p.add_argument("--pipeline", default="tuned", help="Manifest pipeline name (default tuned)")
    p.add_argument("--config", default=None, help="YAML file with a pipeline mapping (overrides --pipeline)")
    p.add_argument("--no-merge", action="store_true", help="Keep the raw (unmerged) labels")


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_log_level(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)


class Context:
    """Resolved global options shared by the command handlers."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self._manifest: Optional[DatasetManifest] = None

    @property
    def manifest(self) -> DatasetManifest:
        if self._manifest is None:
            self._manifest = DatasetManifest(self.args.manifest)
        return self._manifest

    @property
    def data_dir(self) -> Path:
        return get_data_dir(self.args.data_dir)

    @property
    def seed(self) -> int:
        return get_seed(self.args.seed, self.manifest.defaults.seed)

    def entry(self, name: str) -> DatasetEntry:
        return self.manifest.get_dataset(name)

    def dataset(self, name: str) -> Tuple[DatasetEntry, LabeledDataset]:
        entry = self.entry(name)
        dataset, report = load_dataset(entry, self.data_dir, merge=not getattr(self.args, "no_merge", False))
        if report.rejected:
            print(report.render(limit=10), file=sys.stderr)
        return entry, dataset

    def split(self, dataset: LabeledDataset, fraction: Optional[float] = None):
        spec = SplitSpec(
            holdout_fraction=fraction if fraction is not None else self.manifest.defaults.holdout_fraction,
            seed=self.seed,
        )
        return stratified_split(dataset, spec)

    def folds(self) -> FoldSpec:
        k = getattr(self.args, "folds", None) or self.manifest.defaults.folds
        return FoldSpec(k=k, seed=self.seed)

    def pipeline(self, entry: DatasetEntry) -> PipelineConfig:
        if self.args.config:
            with open(self.args.config, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            return PipelineConfig.model_validate(data)
        return entry.pipeline(self.args.pipeline)

    def emit(self, text: str, document: Dict[str, Any]) -> None:
        print(dumps(document) if self.args.json else text)


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def cmd_datasets(ctx: Context) -> int:
    info = ctx.manifest.get_dataset_info()
    rows = [[d["key"], d["name"], ", ".join(d["files"]), len(d["labels"]), d["scoring"]] for d in info]
    text = render_table(["dataset", "name", "files", "classes", "scoring"], rows)
    ctx.emit(text, {"datasets": info})
    return EXIT_OK


def cmd_inspect(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    counts = dataset.class_counts()
    shares = class_distribution(dataset)
    text = render_distribution(counts, title=f"{entry.name} ({len(dataset)} documents)")
    ctx.emit(text, {
        "dataset": entry.key,
        "documents": len(dataset),
        "counts": counts,
        "distribution": shares,
    })
    return EXIT_OK


def cmd_split(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    train, holdout = ctx.split(dataset, ctx.args.holdout_fraction)
    out = Path(ctx.args.out)
    out.mkdir(parents=True, exist_ok=True)
    train_path = out / f"{entry.key}_train.csv"
    holdout_path = out / f"{entry.key}_holdout.csv"
    write_csv(train, train_path)
    write_csv(holdout, holdout_path)
    rows = [["train", len(train), str(train_path)], ["holdout", len(holdout), str(holdout_path)]]
    ctx.emit(render_table(["part", "documents", "file"], rows), {
        "dataset": entry.key,
        "seed": ctx.seed,
        "train": {"documents": len(train), "path": str(train_path)},
        "holdout": {"documents": len(holdout), "path": str(holdout_path)},
    })
    return EXIT_OK


def cmd_train(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    config = ctx.pipeline(entry)
    train = dataset if ctx.args.full else ctx.split(dataset)[0]
    bundle = fit_pipeline(train, config, seed=ctx.seed)
    save_bundle(bundle, ctx.args.out)
    pairs = [
        ("bundle", ctx.args.out),
        ("documents", len(train)),
        ("features", len(bundle.vocabulary)),
        ("classes", ", ".join(bundle.classes)),
        ("converged", bundle.metadata.get("converged", True)),
    ]
    ctx.emit(render_settings(config, ctx.seed) + "\n" + render_key_values(pairs), json_document(
        entry.key, config, seed=ctx.seed, bundle=ctx.args.out, metadata=bundle.metadata,
    ))
    return EXIT_OK


def cmd_eval(ctx: Context) -> int:
    bundle = load_bundle(ctx.args.bundle)
    entry, dataset = ctx.dataset(ctx.args.dataset)
    _, holdout = ctx.split(dataset)
    report = evaluate_pipeline(bundle, holdout)
    text = render_report_table(report, title=f"{entry.name}: holdout ({len(holdout)} documents)")
    if ctx.args.confusion:
        text += "\n\n" + render_confusion(report)
    ctx.emit(text, json_document(entry.key, bundle.pipeline, report, seed=ctx.seed))
    return EXIT_OK


def cmd_cv(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    config = ctx.pipeline(entry)
    scoring = ctx.args.scoring or entry.scoring
    folds = ctx.folds()
    result = kfold_cv(dataset, config, folds, scoring=scoring, jobs=ctx.args.jobs)
    text = render_settings(config, ctx.seed) + "\n\n" + render_cv(result, title=f"{folds.k}-fold CV")
    ctx.emit(text, json_document(entry.key, config, seed=ctx.seed, cv=result.to_dict()))
    return EXIT_OK


def cmd_grid(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    base = ctx.pipeline(entry)
    axes = entry.grid
    scoring = ctx.args.scoring or entry.scoring
    if ctx.args.grid:
        with open(ctx.args.grid, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if "axes" not in data:
            raise ConfigurationError(f"Grid file {ctx.args.grid} needs an 'axes' mapping")
        axes = data["axes"]
        scoring = ctx.args.scoring or data.get("scoring", scoring)
    grid = GridSpec(base=base, axes=axes, scoring=scoring)
    best, rows = grid_search(dataset, grid, ctx.folds(), jobs=ctx.args.jobs)
    best_row = next(row for row in rows if row.config == best)
    text = render_grid(rows, best_row.index, title=f"Grid search ({grid.size} points)")
    text += "\n\nbest: " + best.describe()
    ctx.emit(text, json_document(
        entry.key, best, seed=ctx.seed, grid=[row.to_dict() for row in rows], best_index=best_row.index,
    ))
    return EXIT_OK


def cmd_predict(ctx: Context) -> int:
    bundle = load_bundle(ctx.args.bundle)
    if ctx.args.input:
        entry = ctx.entry(bundle.dataset_name)
        documents = load_unlabeled_csv(ctx.args.input, entry.schema())
        ids = [doc.id for doc in documents]
        texts = [doc.text for doc in documents]
        if ctx.args.submission:
            write_submission(bundle, documents, ctx.args.submission, entry.schema().label_encoder)
    else:
        texts = ctx.args.text
        ids = [str(i + 1) for i in range(len(texts))]
        if ctx.args.submission:
            raise ConfigurationError("--submission needs --input")

    predictions = predict_texts(bundle, texts)
    rows = [[doc_id, pred.label, pred.confidence] for doc_id, pred in zip(ids, predictions)]
    ctx.emit(render_table(["id", "label", "confidence"], rows, precision=3), {
        "dataset": bundle.dataset_name,
        "predictions": [
            {"id": doc_id, "label": pred.label, "scores": pred.scores}
            for doc_id, pred in zip(ids, predictions)
        ],
    })
    return EXIT_OK


def cmd_reproduce(ctx: Context) -> int:
    run = reproduce(
        ctx.args.dataset,
        data_dir=ctx.data_dir,
        seed=ctx.seed,
        manifest=ctx.manifest,
        output_dir=ctx.args.output_dir,
        jobs=ctx.args.jobs,
    )
    tuned_report = run.reports.get("tuned")
    references = [c.to_dict() for c in run.checks]
    ctx.emit(run.render(), json_document(
        run.dataset, run.tuned, tuned_report, references, seed=run.seed, reproduction=run.to_dict(),
    ))
    if run.failed:
        raise AcceptanceError(
            f"{len(run.failed)} check(s) outside their acceptance band: "
            + ", ".join(c.key for c in run.failed)
        )
    return EXIT_OK


def cmd_errors(ctx: Context) -> int:
    bundle = load_bundle(ctx.args.bundle)
    entry, dataset = ctx.dataset(ctx.args.dataset)
    _, holdout = ctx.split(dataset)
    cases = dump_errors(bundle, holdout, ctx.args.n)
    rows = [[c.id, c.true_label, c.predicted_label, c.confidence, c.text[:80]] for c in cases]
    ctx.emit(
        render_table(["id", "true", "predicted", "confidence", "text"], rows, precision=3),
        {"dataset": entry.key, "errors": [c.to_dict() for c in cases]},
    )
    return EXIT_OK


def cmd_prep(ctx: Context) -> int:
    args = ctx.args
    if args.show_stopwords:
        words = sorted(ENGLISH_STOPWORDS)
        ctx.emit(f"stopwords {STOPWORDS_VERSION} ({len(words)} words)\n" + " ".join(words), {
            "version": STOPWORDS_VERSION,
            "stopwords": words,
        })
        return EXIT_OK
    texts = list(args.texts) + list(args.text)
    if not texts:
        raise ConfigurationError("prep needs a text or --show-stopwords")

    if args.full:
        config = PrepConfig.full(remove_stopwords=args.remove_stopwords)
    else:
        config = PrepConfig(
            normalize=args.normalize,
            lowercase=args.lowercase,
            stem=args.stem,
            remove_stopwords=args.remove_stopwords,
            emoticon_polarity=args.emoticon_polarity,
        )
    traces = [trace(text, config) for text in texts]
    if args.trace:
        blocks = [
            render_table(["stage", "ran", "output"], [list(step) for step in steps], title=f"text {i + 1}")
            for i, steps in enumerate(traces)
        ]
        text = "\n\n".join(blocks)
    else:
        text = "\n".join(steps[-1][2] for steps in traces)
    ctx.emit(text, {
        "config": config.model_dump(mode="json", exclude={"stopword_list"}),
        "results": [
            {
                "text": steps[0][2],
                "tokens": steps[-1][2].split(),
                "stages": [{"stage": s, "ran": ran, "output": out} for s, ran, out in steps],
            }
            for steps in traces
        ],
    })
    return EXIT_OK


def cmd_ablate(ctx: Context) -> int:
    entry, dataset = ctx.dataset(ctx.args.dataset)
    config = ctx.pipeline(entry)
    scoring = ctx.args.scoring or entry.scoring
    rows = ablate(dataset, config, ctx.folds(), scoring=scoring, jobs=ctx.args.jobs, stages=ctx.args.stages)
    table = render_table(
        ["stage", "setting", scoring, "delta"],
        [[r.stage, r.setting, r.score, f"{r.delta:+.4f}"] for r in rows],
        title=f"Ablation on {entry.name}",
        precision=4,
    )
    ctx.emit(table, json_document(entry.key, config, seed=ctx.seed, ablation=[r.to_dict() for r in rows]))
    return EXIT_OK


COMMANDS = {
    "datasets": cmd_datasets,
    "inspect": cmd_inspect,
    "split": cmd_split,
    "train": cmd_train,
    "eval": cmd_eval,
    "cv": cmd_cv,
    "grid": cmd_grid,
    "predict": cmd_predict,
    "reproduce": cmd_reproduce,
    "errors": cmd_errors,
    "prep": cmd_prep,
    "ablate": cmd_ablate,
}


def _fail(command: str, error: Exception, code: int) -> int:
    logger.debug("%s failed with exit code %d", command, code, exc_info=error)
    print(f"error: {error}", file=sys.stderr)
    return code


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command and map failures to exit codes.

    Returns:
        0 success, 1 usage/configuration error, 2 data error, 3 acceptance failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    _configure_logging(args.verbose)
    ctx = Context(args)
    try:
        return COMMANDS[args.command](ctx)
    except AcceptanceError as e:
        return _fail(args.command, e, EXIT_ACCEPTANCE)
    except (ConfigurationError, DatasetNotFoundError, ValidationError) as e:
        return _fail(args.command, e, EXIT_USAGE)
    except (DataError, OSError) as e:
        return _fail(args.command, e, EXIT_DATA)


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
