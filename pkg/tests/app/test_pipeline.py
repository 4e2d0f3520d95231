"""Tests for pipeline fitting, prediction and evaluation."""
import pytest
from pydantic import ValidationError

from src.app.pipeline import PipelineConfig, evaluate_pipeline, fit_pipeline, predict_texts, predict_tokens
from src.core.exceptions import LabelError, TrainingError
from src.corpus.schema import LabeledDataset
from src.models.config import TrainConfig
from src.textprep.pipeline import PrepConfig, preprocess

TUNED = PipelineConfig(
    prep=PrepConfig(normalize=True, lowercase=True),
    ngram_range=[1, 2],
    model=TrainConfig(penalty="l2", C=1.0),
)


class TestPipelineConfig:
    """Test suite for PipelineConfig."""

    def test_defaults_are_mnb_unigram_counts(self):
        """Defaults should be MNB over unigram counts."""
        config = PipelineConfig()
        assert config.describe().startswith("mnb(alpha=1)")
        assert "ngrams=(1,1)" in config.describe()
        assert config.weighting == "counts"

    def test_model_kind_discriminates(self):
        """The model mapping's kind selects the config class."""
        config = PipelineConfig.model_validate({"model": {"kind": "logreg", "C": 0.5}})
        assert isinstance(config.model, TrainConfig)
        assert config.model.C == 0.5

    def test_with_overrides(self):
        """with_overrides returns a new config and leaves the original alone."""
        config = TUNED.with_overrides({"model.C": 10.0, "prep.stem": True})
        assert config.model.C == 10.0
        assert config.prep.stem
        assert TUNED.model.C == 1.0

    def test_overrides_are_validated(self):
        """Overrides go through validation."""
        with pytest.raises(ValidationError):
            TUNED.with_overrides({"model.C": -1.0})

    def test_unknown_field_rejected(self):
        """Unknown fields should raise ValidationError."""
        with pytest.raises(ValidationError):
            PipelineConfig.model_validate({"ngrams": [1, 2]})


class TestFitPipeline:
    """Test suite for fit_pipeline."""

    @pytest.mark.parametrize("config", [PipelineConfig(), TUNED], ids=["mnb", "logreg"])
    def test_fits_training_data(self, toy_dataset, config):
        """Both models should fit the separable toy corpus."""
        bundle = fit_pipeline(toy_dataset, config, seed=1)
        report = evaluate_pipeline(bundle, toy_dataset)
        assert report.accuracy >= 0.95
        assert bundle.classes == ("Anti", "Neutral", "Pro", "News")

    def test_metadata(self, toy_dataset):
        """Bundle metadata records seed, row count and library versions."""
        bundle = fit_pipeline(toy_dataset, TUNED, seed=3)
        assert bundle.metadata["seed"] == 3
        assert bundle.metadata["n_train"] == len(toy_dataset)
        assert bundle.metadata["n_features"] == len(bundle.vocabulary)
        assert "converged" in bundle.metadata
        assert set(bundle.metadata["versions"]) >= {"numpy", "scipy", "nltk"}

    def test_tfidf_bundle_carries_idf(self, toy_dataset):
        """A TF-IDF pipeline stores its IDF weights."""
        assert fit_pipeline(toy_dataset, PipelineConfig()).idf is None
        bundle = fit_pipeline(toy_dataset, PipelineConfig(weighting="tfidf"))
        assert len(bundle.idf.idf) == len(bundle.vocabulary)

    def test_classes_follow_schema_order(self, toy_dataset):
        """Classes follow the schema, not the data."""
        no_anti = [i for i, label in enumerate(toy_dataset.labels) if label != "Anti"]
        bundle = fit_pipeline(toy_dataset.subset(no_anti), PipelineConfig())
        assert bundle.classes == ("Neutral", "Pro", "News")

    def test_empty_training_set(self, climate_schema):
        """An empty training set should raise."""
        with pytest.raises(TrainingError):
            fit_pipeline(LabeledDataset(climate_schema, ()), PipelineConfig())

    def test_pretokenized_input_gives_same_model(self, toy_dataset):
        """Passing tokens up front gives the same model."""
        tokens = [preprocess(text, TUNED.prep) for text in toy_dataset.texts]
        a = fit_pipeline(toy_dataset, TUNED, seed=0)
        b = fit_pipeline(toy_dataset, TUNED, seed=0, tokens=tokens)
        assert a.vocabulary.terms == b.vocabulary.terms
        assert (a.model.weights == b.model.weights).all()


class TestPredict:
    """Test suite for predict_texts."""

    def test_scores_are_probabilities(self, toy_dataset):
        """Scores are non-negative and sum to one."""
        bundle = fit_pipeline(toy_dataset, TUNED)
        for prediction in predict_texts(bundle, ["the hoax is fake", "new study published", "???"]):
            assert sum(prediction.scores.values()) == pytest.approx(1.0)
            assert prediction.confidence == max(prediction.scores.values())

    def test_obvious_texts(self, toy_dataset):
        """Texts made of one class's words get that class."""
        bundle = fit_pipeline(toy_dataset, PipelineConfig())
        labels = [p.label for p in predict_texts(bundle, ["hoax scam lies", "report study scientists"])]
        assert labels == ["Anti", "News"]

    def test_out_of_vocabulary_text_falls_back_to_prior(self, toy_dataset):
        """A text with no known terms gets the prior."""
        bundle = fit_pipeline(toy_dataset, PipelineConfig())
        prediction = predict_texts(bundle, ["zzz qqq"])[0]
        assert prediction.scores == pytest.approx({label: 0.25 for label in bundle.classes})

    def test_empty_batch(self, toy_dataset):
        """An empty batch returns no predictions."""
        assert predict_tokens(fit_pipeline(toy_dataset, PipelineConfig()), []) == []


class TestEvaluatePipeline:
    """Test suite for evaluate_pipeline."""

    def test_unseen_holdout_label(self, toy_dataset):
        """A holdout label the model never saw should raise LabelError."""
        no_news = [i for i, label in enumerate(toy_dataset.labels) if label != "News"]
        bundle = fit_pipeline(toy_dataset.subset(no_news), PipelineConfig())
        with pytest.raises(LabelError, match="News"):
            evaluate_pipeline(bundle, toy_dataset)
