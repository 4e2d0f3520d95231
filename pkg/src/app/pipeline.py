"""
Pipeline composition: preprocess -> vocabulary -> vectors (-> TF-IDF) -> model.

A fitted pipeline is a ModelBundle, which carries everything needed to
predict on raw text. Bundles are immutable and safe to share across threads.
"""
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse

from src.core.exceptions import BundleCorruptError, LabelError, TrainingError
from src.corpus.schema import LabeledDataset
from src.evaluation.metrics import EvalReport, compute_report
from src.features.ngrams import NgramRange
from src.features.tfidf import IdfModel, fit_idf, transform_matrix
from src.features.vectors import vectorize_corpus
from src.features.vocabulary import Vocabulary, build_vocabulary
from src.models.config import MnbConfig, TrainConfig
from src.models.logistic import LogRegModel, train_logreg
from src.models.naive_bayes import MnbModel, train_mnb
from src.textprep.pipeline import PrepConfig, preprocess

logger = logging.getLogger(__name__)

BUNDLE_FORMAT_VERSION = 1

Model = Union[MnbModel, LogRegModel]
TokenLists = Sequence[Sequence[str]]


class PipelineConfig(BaseModel):
    """Everything that decides how raw text becomes a prediction."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    prep: PrepConfig = Field(default_factory=PrepConfig)
    ngram_range: NgramRange = Field(default_factory=NgramRange)
    min_count: int = Field(default=1, ge=1)
    weighting: Literal["counts", "tfidf"] = "counts"
    model: Union[MnbConfig, TrainConfig] = Field(default_factory=MnbConfig, discriminator="kind")

    def describe(self) -> str:
        """One-line summary for tables and logs."""
        if isinstance(self.model, TrainConfig):
            weights = self.model.class_weights
            if isinstance(weights, dict):
                weights = "custom"
            model = f"logreg({self.model.penalty}, C={self.model.C:g}, weights={weights})"
        else:
            model = f"mnb(alpha={self.model.alpha:g})"
        stages = [
            name for name in ("normalize", "lowercase", "remove_stopwords", "stem", "emoticon_polarity")
            if getattr(self.prep, name)
        ]
        prep = "+".join(stages) if stages else "raw"
        return f"{model} ngrams={self.ngram_range} min_count={self.min_count} {self.weighting} prep={prep}"

    def with_overrides(self, overrides: Dict[str, Any]) -> "PipelineConfig":
        """
        Validated copy with dotted-path overrides applied.

        Example:
            config.with_overrides({"model.C": 0.5, "prep.remove_stopwords": True})
        """
        data = self.model_dump()
        for path, value in overrides.items():
            target = data
            *parents, leaf = path.split(".")
            for key in parents:
                target = target[key]
            target[leaf] = value
        return PipelineConfig.model_validate(data)


@dataclass(frozen=True)
class ModelBundle:
    """
    A fitted pipeline.

    Attributes:
        format_version: Serialization format version
        dataset_name: Schema name the bundle was trained on
        pipeline: Configuration used for fitting
        vocabulary: Frozen term -> column map
        idf: IDF weights when the pipeline uses tfidf
        model: Trained classifier
        metadata: Seed, row counts, timestamps and library versions
    """
    dataset_name: str
    pipeline: PipelineConfig
    vocabulary: Vocabulary
    idf: Optional[IdfModel]
    model: Model
    metadata: Dict[str, Any] = field(default_factory=dict)
    format_version: int = BUNDLE_FORMAT_VERSION

    def __post_init__(self):
        if self.model.n_features != len(self.vocabulary):
            raise BundleCorruptError(
                f"Model expects {self.model.n_features} features but vocabulary has "
                f"{len(self.vocabulary)} terms"
            )
        if self.idf is not None and len(self.idf.idf) != len(self.vocabulary):
            raise BundleCorruptError("IDF length does not match vocabulary size")

    @property
    def classes(self) -> Tuple[str, ...]:
        return self.model.classes


@dataclass(frozen=True)
class Prediction:
    """Predicted label and per-class probabilities."""
    label: str
    scores: Dict[str, float]

    @property
    def confidence(self) -> float:
        return self.scores[self.label]


def library_versions() -> Dict[str, str]:
    import nltk
    import scipy

    from src import __version__

    return {
        "tweetcls": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "nltk": nltk.__version__,
    }


def _featurize(
    tokens: TokenLists, vocabulary: Vocabulary, idf: Optional[IdfModel]
) -> sparse.csr_matrix:
    matrix = vectorize_corpus(tokens, vocabulary)
    if idf is not None:
        matrix = transform_matrix(matrix, idf)
    return matrix.to_csr()


def fit_pipeline(
    train: LabeledDataset,
    config: PipelineConfig,
    seed: Optional[int] = None,
    tokens: Optional[TokenLists] = None,
) -> ModelBundle:
    """
    Fit every stage on the training documents.

    Args:
        train: Labeled training documents
        config: Pipeline configuration
        seed: Recorded in metadata; also overrides the logreg seed when given
        tokens: Already preprocessed token lists aligned with train (skips preprocessing)

    Returns:
        ModelBundle

    Raises:
        TrainingError: Empty training set
        VocabularyError: Nothing survives the rare-word threshold
    """
    if len(train) == 0:
        raise TrainingError("Cannot fit a pipeline on an empty training set")
    if tokens is None:
        tokens = [preprocess(text, config.prep) for text in train.texts]

    vocabulary = build_vocabulary(tokens, config.ngram_range, config.min_count)
    counts = vectorize_corpus(tokens, vocabulary)
    idf = fit_idf(counts) if config.weighting == "tfidf" else None
    X = (transform_matrix(counts, idf) if idf is not None else counts).to_csr()

    y = train.labels
    present = set(y)
    classes = tuple(label for label in train.schema.labels if label in present)

    model_config = config.model
    if isinstance(model_config, TrainConfig):
        if seed is not None:
            model_config = model_config.model_copy(update={"seed": seed})
        model: Model = train_logreg(X, y, model_config, classes=classes)
    else:
        model = train_mnb(X, y, model_config.alpha, classes=classes)

    metadata: Dict[str, Any] = {
        "seed": seed,
        "trained_at": datetime.now(timezone.utc).isoformat(),
        "n_train": len(train),
        "n_features": len(vocabulary),
        "classes": list(classes),
        "versions": library_versions(),
    }
    if isinstance(model, LogRegModel):
        metadata["converged"] = model.converged
        metadata["n_iter"] = model.n_iter

    logger.info(f"Fitted {config.describe()} on {len(train)} documents, V={len(vocabulary)}")
    return ModelBundle(
        dataset_name=train.schema.name,
        pipeline=config,
        vocabulary=vocabulary,
        idf=idf,
        model=model,
        metadata=metadata,
    )


def _decide(bundle: ModelBundle, X: sparse.csr_matrix) -> Tuple[np.ndarray, np.ndarray]:
    """(decision scores, probabilities), both N x K."""
    model = bundle.model
    if isinstance(model, MnbModel):
        decision = model.joint_log_scores(X)
    else:
        decision = model.decision_function(X)
    shifted = decision - decision.max(axis=1, keepdims=True)
    probs = np.exp(shifted)
    probs /= probs.sum(axis=1, keepdims=True)
    return decision, probs


def predict_tokens(bundle: ModelBundle, tokens: TokenLists) -> List[Prediction]:
    """Predict from already preprocessed token lists."""
    if not tokens:
        return []
    decision, probs = _decide(bundle, _featurize(tokens, bundle.vocabulary, bundle.idf))
    classes = bundle.classes
    return [
        Prediction(
            label=classes[int(np.argmax(decision[i]))],
            scores={label: float(probs[i, k]) for k, label in enumerate(classes)},
        )
        for i in range(len(tokens))
    ]


def predict_texts(bundle: ModelBundle, texts: Sequence[str]) -> List[Prediction]:
    """
    Predict raw texts with the bundle's frozen preprocessing and vocabulary.

    Scores are class probabilities: the softmax output for logistic
    regression, the normalized posterior for Naive Bayes.
    """
    prep = bundle.pipeline.prep
    return predict_tokens(bundle, [preprocess(text, prep) for text in texts])


def evaluate_pipeline(
    bundle: ModelBundle,
    holdout: LabeledDataset,
    tokens: Optional[TokenLists] = None,
) -> EvalReport:
    """
    Score a bundle on labeled documents.

    Raises:
        LabelError: A holdout label the bundle was never trained on
    """
    unknown = sorted(set(holdout.labels) - set(bundle.classes))
    if unknown:
        raise LabelError(
            f"Holdout labels not seen in training: {unknown} (bundle classes {list(bundle.classes)})"
        )
    if tokens is None:
        tokens = [preprocess(text, bundle.pipeline.prep) for text in holdout.texts]
    predictions = predict_tokens(bundle, tokens)
    return compute_report(holdout.labels, [p.label for p in predictions], bundle.classes)
