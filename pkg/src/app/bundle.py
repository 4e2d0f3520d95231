"""
ModelBundle persistence.

A bundle file is one JSON document:

    {"format_version": 1, "checksum": "<sha256 hex>", "payload": {...}}

The checksum covers the canonical encoding of the payload (sorted keys, no
whitespace). Floats are written with repr precision, so a loaded bundle
predicts bit-identically to the one that was saved.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from src.app.pipeline import BUNDLE_FORMAT_VERSION, ModelBundle, PipelineConfig
from src.core.exceptions import BundleCorruptError, BundleVersionError, MissingFileError
from src.features.tfidf import IdfModel
from src.features.vocabulary import Vocabulary
from src.models.logistic import LogRegModel
from src.models.naive_bayes import MnbModel

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
SUPPORTED_VERSIONS = (BUNDLE_FORMAT_VERSION,)


def _canonical(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def checksum(payload: Dict[str, Any]) -> str:
    return hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()


def bundle_to_dict(bundle: ModelBundle) -> Dict[str, Any]:
    payload = {
        "dataset_name": bundle.dataset_name,
        "pipeline": bundle.pipeline.model_dump(mode="json"),
        "vocabulary": bundle.vocabulary.to_dict(),
        "idf": bundle.idf.to_dict() if bundle.idf is not None else None,
        "model": bundle.model.to_dict(),
        "metadata": bundle.metadata,
    }
    return {
        "format_version": bundle.format_version,
        "checksum": checksum(payload),
        "payload": payload,
    }


def bundle_from_dict(document: Dict[str, Any]) -> ModelBundle:
    """
    Rebuild a bundle from its JSON document.

    Raises:
        BundleVersionError: Unknown format_version
        BundleCorruptError: Missing fields, checksum mismatch or invalid contents
    """
    if not isinstance(document, dict) or "format_version" not in document:
        raise BundleCorruptError("Bundle document has no format_version")
    version = document["format_version"]
    if version not in SUPPORTED_VERSIONS:
        raise BundleVersionError(
            f"Unsupported bundle format_version {version!r}; supported: {list(SUPPORTED_VERSIONS)}"
        )
    payload = document.get("payload")
    if not isinstance(payload, dict):
        raise BundleCorruptError("Bundle has no payload")
    if checksum(payload) != document.get("checksum"):
        raise BundleCorruptError("Bundle checksum mismatch")

    try:
        model_data = payload["model"]
        if model_data["kind"] == "mnb":
            model = MnbModel.from_dict(model_data)
        elif model_data["kind"] == "logreg":
            model = LogRegModel.from_dict(model_data)
        else:
            raise BundleCorruptError(f"Unknown model kind {model_data['kind']!r}")
        idf = IdfModel.from_dict(payload["idf"]) if payload["idf"] is not None else None
        return ModelBundle(
            dataset_name=payload["dataset_name"],
            pipeline=PipelineConfig.model_validate(payload["pipeline"]),
            vocabulary=Vocabulary.from_dict(payload["vocabulary"]),
            idf=idf,
            model=model,
            metadata=payload.get("metadata", {}),
            format_version=version,
        )
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise BundleCorruptError(f"Invalid bundle contents: {e}") from e


def save_bundle(bundle: ModelBundle, path: PathLike) -> None:
    """Write a bundle as a single JSON document (UTF-8)."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(bundle_to_dict(bundle), f, ensure_ascii=False)
    logger.info(f"Saved bundle for '{bundle.dataset_name}' to {path}")


def load_bundle(path: PathLike) -> ModelBundle:
    """
    Read a bundle written by save_bundle.

    Raises:
        MissingFileError: Path does not exist
        BundleVersionError: Unknown format_version
        BundleCorruptError: Truncated or edited file
    """
    path = Path(path)
    if not path.exists():
        raise MissingFileError(f"Bundle file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise BundleCorruptError(f"Bundle file {path} is not valid JSON: {e}") from e
    bundle = bundle_from_dict(document)
    logger.info(f"Loaded bundle for '{bundle.dataset_name}' from {path}")
    return bundle
