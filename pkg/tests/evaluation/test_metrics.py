"""Tests for classification metrics."""
import numpy as np
import pytest

from src.core.exceptions import EvaluationError
from src.evaluation.metrics import compute_report, confusion_matrix


def _oracle(y_true, y_pred, classes):
    """Per-class (precision, recall, f1, support) counted pair by pair."""
    out = {}
    for label in classes:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == label and p == label)
        predicted = sum(1 for p in y_pred if p == label)
        actual = sum(1 for t in y_true if t == label)
        precision = tp / predicted if predicted else 0.0
        recall = tp / actual if actual else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        out[label] = (precision, recall, f1, actual)
    return out


class TestComputeReport:
    """Test suite for compute_report."""

    def test_worked_example(self):
        """Hand-computed precision, recall and F1 on a three-document example."""
        report = compute_report(["A", "A", "B"], ["A", "B", "B"], ["A", "B"])
        a, b = report.per_class["A"], report.per_class["B"]
        assert (a.precision, a.recall) == (1.0, 0.5)
        assert (b.precision, b.recall) == (0.5, 1.0)
        assert a.f1 == pytest.approx(2 / 3)
        assert b.f1 == pytest.approx(2 / 3)
        assert report.accuracy == pytest.approx(2 / 3)
        assert report.macro.f1 == pytest.approx(2 / 3)

    def test_matches_pairwise_oracle(self):
        """Metrics should match a direct count on random labels."""
        rng = np.random.default_rng(11)
        for _ in range(200):
            n_classes = int(rng.integers(2, 6))
            classes = [f"k{i}" for i in range(n_classes)]
            n = int(rng.integers(1, 40))
            y_true = [str(c) for c in rng.choice(classes, size=n)]
            y_pred = [str(c) for c in rng.choice(classes, size=n)]

            report = compute_report(y_true, y_pred, classes)
            expected = _oracle(y_true, y_pred, classes)
            for label, (precision, recall, f1, support) in expected.items():
                got = report.per_class[label]
                assert got.precision == pytest.approx(precision)
                assert got.recall == pytest.approx(recall)
                assert got.f1 == pytest.approx(f1)
                assert got.support == support

            macro_f1 = sum(v[2] for v in expected.values()) / n_classes
            weighted_f1 = sum(v[2] * v[3] for v in expected.values()) / n
            assert report.macro.f1 == pytest.approx(macro_f1)
            assert report.weighted.f1 == pytest.approx(weighted_f1)
            assert report.accuracy == pytest.approx(sum(t == p for t, p in zip(y_true, y_pred)) / n)
            assert report.weighted.recall == pytest.approx(report.accuracy)

    def test_never_predicted_class_is_flagged(self):
        """Zero-division precision is reported as 0 and flagged."""
        report = compute_report(["A", "B", "C"], ["A", "B", "B"], ["A", "B", "C"])
        c = report.per_class["C"]
        assert (c.precision, c.recall, c.f1) == (0.0, 0.0, 0.0)
        assert ("C", "precision") in report.zero_division_flags
        assert ("C", "f1") in report.zero_division_flags
        assert ("C", "recall") not in report.zero_division_flags

    def test_absent_class_has_zero_support(self):
        """A class absent from the truth has zero support."""
        report = compute_report(["A", "A"], ["A", "A"], ["A", "B"])
        assert report.per_class["B"].support == 0
        assert ("B", "recall") in report.zero_division_flags
        assert report.accuracy == 1.0

    def test_macro_ignores_class_order(self):
        """Macro averages do not depend on class order."""
        y_true = ["A", "B", "C", "A", "C", "C"]
        y_pred = ["A", "C", "C", "B", "C", "A"]
        forward = compute_report(y_true, y_pred, ["A", "B", "C"])
        backward = compute_report(y_true, y_pred, ["C", "B", "A"])
        assert forward.macro.f1 == pytest.approx(backward.macro.f1)
        assert forward.weighted.f1 == pytest.approx(backward.weighted.f1)

    @pytest.mark.parametrize("scoring,attribute", [
        ("accuracy", lambda r: r.accuracy),
        ("macro_f1", lambda r: r.macro.f1),
        ("weighted_f1", lambda r: r.weighted.f1),
    ])
    def test_score_selects_metric(self, scoring, attribute):
        """score() picks the named metric."""
        report = compute_report(["A", "A", "B", "B"], ["A", "B", "B", "B"], ["A", "B"])
        assert report.score(scoring) == attribute(report)

    def test_unknown_scoring(self):
        """Unknown scoring names are rejected."""
        report = compute_report(["A"], ["A"], ["A"])
        with pytest.raises(EvaluationError):
            report.score("auc")

    def test_to_dict_lists_flags(self):
        """to_dict includes the zero-division flags."""
        report = compute_report(["A", "B"], ["A", "A"], ["A", "B"])
        data = report.to_dict()
        assert ["B", "precision"] in data["zero_division_flags"]
        assert data["confusion"]["counts"] == [[1, 0], [1, 0]]


class TestConfusionMatrix:
    """Test suite for confusion_matrix."""

    def test_rows_are_true_labels(self):
        """Rows index true labels, columns predictions."""
        matrix = confusion_matrix(["A", "A", "B"], ["B", "A", "B"], ["A", "B"])
        assert matrix.counts.tolist() == [[1, 1], [0, 1]]
        assert matrix.total == 3

    def test_length_mismatch(self):
        """Mismatched lengths should raise EvaluationError."""
        with pytest.raises(EvaluationError):
            confusion_matrix(["A"], ["A", "B"], ["A", "B"])

    def test_empty(self):
        """Empty input should raise EvaluationError."""
        with pytest.raises(EvaluationError):
            confusion_matrix([], [], ["A"])

    def test_label_outside_classes(self):
        """Labels outside the class list should raise EvaluationError."""
        with pytest.raises(EvaluationError, match="Z"):
            confusion_matrix(["A"], ["Z"], ["A", "B"])
