"""
Plain-text and JSON renderings of evaluation results.

Text tables follow the published layout: one row per class, then the
weighted and macro averages, then accuracy.
"""
import json
from typing import Any, Dict, List, Mapping, Optional, Sequence

from src.app.pipeline import PipelineConfig, library_versions
from src.core.table_base import render_key_values, render_table
from src.evaluation.crossval import CVResult
from src.evaluation.grid import GridRow
from src.evaluation.metrics import EvalReport

REPORT_HEADERS = ["class", "precision", "recall", "f1", "support"]


def render_report_table(report: EvalReport, title: Optional[str] = None) -> str:
    """
    Per-class metrics table with weighted, macro and accuracy rows.

    Cells where the 0/0 convention fired are marked with '*'.
    """
    def cell(label: str, metric: str, value: float) -> str:
        mark = "*" if (label, metric) in report.zero_division_flags else ""
        return f"{value:.2f}{mark}"

    rows: List[List[Any]] = []
    for label in report.classes:
        m = report.per_class[label]
        rows.append([
            label,
            cell(label, "precision", m.precision),
            cell(label, "recall", m.recall),
            cell(label, "f1", m.f1),
            m.support,
        ])
    for name, m in (("weighted avg", report.weighted), ("macro avg", report.macro)):
        rows.append([name, m.precision, m.recall, m.f1, m.support])
    rows.append(["accuracy", None, None, report.accuracy, report.macro.support])

    text = render_table(REPORT_HEADERS, rows, title=title)
    if report.zero_division_flags:
        text += "\n* undefined (0/0), reported as 0"
    return text


def render_confusion(report: EvalReport) -> str:
    """Confusion matrix with true classes as rows."""
    matrix = report.confusion
    headers = ["true \\ pred"] + list(matrix.classes)
    rows = [[label] + [int(c) for c in matrix.counts[k]] for k, label in enumerate(matrix.classes)]
    return render_table(headers, rows)


def report_to_dict(report: EvalReport) -> Dict[str, Any]:
    """JSON-ready report: per_class, macro, weighted, accuracy and flags."""
    return report.to_dict()


def render_distribution(counts: Mapping[str, int], title: Optional[str] = None) -> str:
    total = sum(counts.values())
    rows = [
        [label, n, (n / total if total else 0.0)]
        for label, n in counts.items()
    ]
    rows.append(["total", total, 1.0 if total else 0.0])
    return render_table(["class", "documents", "share"], rows, title=title, precision=3)


def render_cv(result: CVResult, title: Optional[str] = None) -> str:
    rows = [[f"fold {i + 1}", score] for i, score in enumerate(result.fold_scores)]
    rows.append(["mean", result.mean])
    rows.append(["std", result.std])
    return render_table(["fold", result.scoring], rows, title=title, precision=4)


def render_grid(rows: Sequence[GridRow], best_index: int, title: Optional[str] = None) -> str:
    table_rows = []
    for row in rows:
        point = ", ".join(f"{k}={v}" for k, v in row.point.items())
        marker = "<- best" if row.index == best_index else ""
        table_rows.append([f"#{row.index}", point, row.result.mean, row.result.std, marker])
    scoring = rows[0].result.scoring if rows else "score"
    return render_table(["point", "settings", scoring, "std", ""], table_rows, title=title, precision=4)


def render_settings(config: PipelineConfig, seed: Optional[int] = None) -> str:
    pairs = [("pipeline", config.describe())]
    if seed is not None:
        pairs.append(("seed", seed))
    return render_key_values(pairs)


def json_document(
    dataset: str,
    config: Optional[PipelineConfig],
    report: Optional[EvalReport] = None,
    references: Sequence[Dict[str, Any]] = (),
    seed: Optional[int] = None,
    **extra: Any,
) -> Dict[str, Any]:
    """
    The JSON shape shared by every reporting command.

    {dataset, config, report{per_class, macro, weighted, accuracy}, references[], seed, versions}
    """
    document: Dict[str, Any] = {
        "dataset": dataset,
        "config": config.model_dump(mode="json") if config is not None else None,
        "report": report_to_dict(report) if report is not None else None,
        "references": list(references),
        "seed": seed,
        "versions": library_versions(),
    }
    document.update(extra)
    return document


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False)
