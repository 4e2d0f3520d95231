"""
Dataset manifest: the registry of supported datasets.

Loads config/datasets.yaml, validates every entry, and gives typed access to
file names, column maps, label decoders, canned pipelines and the published
reference scores.
"""
import codecs
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.app.pipeline import PipelineConfig
from src.core.exceptions import ConfigurationError, DatasetNotFoundError
from src.corpus.schema import LabelSchema

logger = logging.getLogger(__name__)

EXPECTED_DATASETS = ("climate", "coronavirus", "disaster")


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DatasetFiles(_Record):
    train: str
    test: Optional[str] = None


class Reference(_Record):
    """
    A published score paired with an observed metric key.

    check:
        band      |observed - value| <= band
        at_least  observed >= value
        at_most   observed <= value
        info      printed only, never fails
    """
    key: str
    value: float
    citation: str
    check: Literal["band", "at_least", "at_most", "info"] = "band"
    band: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _band_needed(self) -> "Reference":
        if self.check == "band" and self.band is None:
            raise ValueError(f"reference '{self.key}' needs a band")
        return self


class StaticReference(_Record):
    """Published figure that is printed but never computed."""
    metric: str
    value: float
    citation: str
    model: str = "BERT"


class ManifestDefaults(_Record):
    seed: int = 42
    holdout_fraction: float = Field(default=0.2, gt=0.0, lt=1.0)
    folds: int = Field(default=10, ge=2)


class DatasetEntry(_Record):
    """One dataset as declared in the manifest."""
    key: str
    name: str
    description: str = ""
    source: str
    files: DatasetFiles
    encoding_hint: str = "utf-8"
    columns: Dict[str, str]
    labels: List[str]
    label_decoder: Dict[str, str] = Field(default_factory=dict)
    label_merge: Optional[Dict[str, str]] = None
    scoring: Literal["accuracy", "macro_f1", "weighted_f1"] = "weighted_f1"
    protocol: Literal["holdout", "cv"] = "holdout"
    pipelines: Dict[str, PipelineConfig]
    grid: Dict[str, List[Any]] = Field(default_factory=dict)
    references: List[Reference] = Field(default_factory=list)
    bert_references: List[StaticReference] = Field(default_factory=list)

    @field_validator("encoding_hint")
    @classmethod
    def _known_encoding(cls, value: str) -> str:
        try:
            codecs.lookup(value)
        except LookupError:
            raise ValueError(f"unknown encoding_hint '{value}'")
        return value

    @model_validator(mode="after")
    def _check_entry(self) -> "DatasetEntry":
        for required in ("baseline", "tuned"):
            if required not in self.pipelines:
                raise ValueError(f"dataset '{self.key}' needs a '{required}' pipeline")
        if self.label_merge is not None:
            missing = sorted(set(self.labels) - set(self.label_merge))
            if missing:
                raise ValueError(f"label_merge of '{self.key}' does not map {missing}")
        return self

    def schema(self) -> LabelSchema:
        """LabelSchema for the raw (unmerged) CSV."""
        return LabelSchema(
            name=self.key,
            labels=tuple(self.labels),
            column_map=dict(self.columns),
            label_decoder=dict(self.label_decoder),
        )

    def pipeline(self, name: str) -> PipelineConfig:
        if name not in self.pipelines:
            raise ConfigurationError(
                f"Dataset '{self.key}' has no pipeline '{name}'. "
                f"Available: {', '.join(self.pipelines)}"
            )
        return self.pipelines[name]

    def train_path(self, data_dir: Path) -> Path:
        return Path(data_dir) / self.files.train

    def test_path(self, data_dir: Path) -> Optional[Path]:
        return Path(data_dir) / self.files.test if self.files.test else None


class DatasetManifest:
    """
    Registry of the datasets declared in config/datasets.yaml.

    Usage:
        manifest = DatasetManifest()
        entry = manifest.get_dataset("climate")
        tuned = entry.pipeline("tuned")
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Load and validate the manifest.

        Args:
            config_path: Path to datasets.yaml. If None, uses the project default.

        Raises:
            ConfigurationError: Missing file, missing sections or invalid entries
        """
        if config_path is None:
            project_root = Path(__file__).parent.parent.parent
            config_path = project_root / "config" / "datasets.yaml"

        self.config_path = Path(config_path)
        self.config: Dict[str, Any] = {}
        self.defaults = ManifestDefaults()
        self.datasets: Dict[str, DatasetEntry] = {}

        self._load_config()

    def _load_config(self) -> None:
        if not self.config_path.exists():
            raise ConfigurationError(f"Manifest file not found: {self.config_path}")

        with open(self.config_path, "r", encoding="utf-8") as f:
            try:
                self.config = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Manifest {self.config_path} is not valid YAML: {e}")

        if not self.config or "datasets" not in self.config:
            raise ConfigurationError("Invalid manifest: 'datasets' section required")

        unknown = sorted(set(self.config["datasets"] or {}) - set(EXPECTED_DATASETS))
        if unknown:
            raise ConfigurationError(
                f"Manifest declares unknown datasets {unknown}; expected keys: "
                f"{', '.join(EXPECTED_DATASETS)}"
            )

        try:
            self.defaults = ManifestDefaults(**(self.config.get("defaults") or {}))
            for key, entry in (self.config["datasets"] or {}).items():
                self.datasets[key] = DatasetEntry(key=key, **entry)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid manifest {self.config_path}: {e}")
        except TypeError as e:
            raise ConfigurationError(f"Invalid manifest entry in {self.config_path}: {e}")

        logger.info(f"Loaded manifest with datasets: {', '.join(self.datasets)}")

    def list_datasets(self) -> List[str]:
        return list(self.datasets)

    def get_dataset(self, name: str) -> DatasetEntry:
        """
        Look up a dataset by key.

        Raises:
            DatasetNotFoundError: Unknown key; the message lists valid names
        """
        if name not in self.datasets:
            raise DatasetNotFoundError(
                f"Unknown dataset '{name}'. Valid datasets: {', '.join(self.datasets)}"
            )
        return self.datasets[name]

    def covers_expected(self) -> bool:
        """True when exactly the three published datasets are declared."""
        return sorted(self.datasets) == sorted(EXPECTED_DATASETS)

    def get_dataset_info(self) -> List[Dict[str, Any]]:
        """Summary rows for listing."""
        return [
            {
                "key": entry.key,
                "name": entry.name,
                "files": [f for f in (entry.files.train, entry.files.test) if f],
                "labels": list(entry.labels),
                "scoring": entry.scoring,
                "protocol": entry.protocol,
                "source": entry.source,
            }
            for entry in self.datasets.values()
        ]
