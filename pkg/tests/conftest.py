"""Shared test fixtures for the tweet classification toolkit."""
import csv
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
import pytest
import yaml

from src.core.manifest import DatasetManifest
from src.corpus.schema import Document, LabeledDataset, LabelSchema

CLIMATE_WORDS = {
    "Anti": ["hoax", "scam", "lies", "fake", "alarmist"],
    "Neutral": ["wonder", "maybe", "question", "curious", "unsure"],
    "Pro": ["act", "save", "planet", "support", "future"],
    "News": ["report", "study", "published", "according", "scientists"],
}
SHARED_WORDS = ["climate", "change", "the", "today", "people", "is"]


def _make_documents(words: Dict[str, List[str]], per_class: int, seed: int) -> List[Document]:
    rng = np.random.default_rng(seed)
    documents = []
    for label, vocab in words.items():
        for i in range(per_class):
            tokens = list(rng.choice(vocab, size=3)) + list(rng.choice(SHARED_WORDS, size=2))
            rng.shuffle(tokens)
            documents.append(Document(id=f"{label}-{i}", text=" ".join(tokens), label=label))
    order = rng.permutation(len(documents))
    return [documents[i] for i in order]


@pytest.fixture
def climate_schema() -> LabelSchema:
    """Four-class schema laid out like the climate CSV."""
    return LabelSchema(
        name="climate",
        labels=("Anti", "Neutral", "Pro", "News"),
        column_map={"tweetid": "id", "message": "text", "sentiment": "label"},
        label_decoder={"-1": "Anti", "0": "Neutral", "1": "Pro", "2": "News"},
    )


@pytest.fixture
def binary_schema() -> LabelSchema:
    """Two-class schema laid out like the disaster CSV."""
    return LabelSchema(
        name="disaster",
        labels=("not_disaster", "disaster"),
        column_map={"id": "id", "keyword": "keyword", "location": "location",
                    "text": "text", "target": "label"},
        label_decoder={"0": "not_disaster", "1": "disaster"},
    )


@pytest.fixture
def make_dataset(climate_schema) -> Callable[..., LabeledDataset]:
    """Factory for separable four-class toy corpora."""
    def _make(per_class: int = 12, seed: int = 0) -> LabeledDataset:
        return LabeledDataset(climate_schema, tuple(_make_documents(CLIMATE_WORDS, per_class, seed)))
    return _make


@pytest.fixture
def toy_dataset(make_dataset) -> LabeledDataset:
    return make_dataset()


@pytest.fixture
def binary_dataset(binary_schema) -> LabeledDataset:
    words = {
        "not_disaster": ["love", "lunch", "movie", "happy", "music"],
        "disaster": ["fire", "flood", "earthquake", "evacuate", "wreckage"],
    }
    return LabeledDataset(binary_schema, tuple(_make_documents(words, 20, seed=3)))


@pytest.fixture
def write_rows() -> Callable[[Path, Sequence[str], Sequence[Sequence[Any]]], Path]:
    """Write a header plus rows as an RFC 4180 CSV file."""
    def _write(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows(rows)
        return path
    return _write


@pytest.fixture
def climate_csv(tmp_path, toy_dataset, write_rows) -> Path:
    """The toy corpus written as twitter_sentiment_data.csv in a data directory."""
    encoder = toy_dataset.schema.label_encoder
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    rows = [[encoder[doc.label], doc.text, doc.id] for doc in toy_dataset.documents]
    return write_rows(data_dir / "twitter_sentiment_data.csv", ["sentiment", "message", "tweetid"], rows)


@pytest.fixture
def manifest_config() -> Dict[str, Any]:
    """Minimal valid manifest with one small climate entry."""
    return {
        "version": "1.0",
        "defaults": {"seed": 7, "holdout_fraction": 0.25, "folds": 3},
        "datasets": {
            "climate": {
                "name": "Toy Climate",
                "source": "https://example.org/climate",
                "files": {"train": "twitter_sentiment_data.csv"},
                "columns": {"tweetid": "id", "message": "text", "sentiment": "label"},
                "labels": ["Anti", "Neutral", "Pro", "News"],
                "label_decoder": {"-1": "Anti", "0": "Neutral", "1": "Pro", "2": "News"},
                "pipelines": {
                    "baseline": {"model": {"kind": "mnb"}},
                    "tuned": {
                        "prep": {"lowercase": True},
                        "ngram_range": [1, 2],
                        "model": {"kind": "logreg", "penalty": "l2", "C": 1.0},
                    },
                },
                "grid": {"C": [0.5, 1.0]},
                "references": [
                    {"key": "tuned.weighted_f1", "value": 0.5, "band": 0.5, "citation": "toy"},
                    {"key": "tfidf_gap", "value": 0.0, "check": "info", "citation": "toy"},
                ],
                "bert_references": [{"metric": "weighted_f1", "value": 0.8, "citation": "toy"}],
            }
        },
    }


@pytest.fixture
def write_manifest(tmp_path) -> Callable[[Dict[str, Any]], Path]:
    def _write(config: Dict[str, Any], name: str = "datasets.yaml") -> Path:
        path = tmp_path / name
        with open(path, "w") as f:
            yaml.dump(config, f)
        return path
    return _write


@pytest.fixture
def manifest_path(write_manifest, manifest_config) -> Path:
    return write_manifest(manifest_config)


@pytest.fixture
def manifest(manifest_path) -> DatasetManifest:
    """Provide a manifest loaded from the toy configuration."""
    return DatasetManifest(config_path=str(manifest_path))


@pytest.fixture
def real_manifest() -> DatasetManifest:
    """Provide the manifest shipped in config/datasets.yaml."""
    return DatasetManifest()


@pytest.fixture
def real_data_dir() -> Path:
    """Directory with the published CSVs; integration tests skip without it."""
    raw = os.getenv("TWEETCLS_DATA_DIR")
    if not raw or not Path(raw).is_dir():
        pytest.skip("TWEETCLS_DATA_DIR not set to a directory with the dataset CSVs")
    return Path(raw)
