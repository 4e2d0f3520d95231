"""
Configurable preprocessing pipeline: normalize -> tokenize -> lowercase ->
stopword removal -> stemming.
"""
from typing import FrozenSet, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from src.textprep.normalizer import NormalizerRules, normalize
from src.textprep.stemmer import stem
from src.textprep.stopwords import ENGLISH_STOPWORDS, remove_stopwords
from src.textprep.tokenizer import mark_emoticon_polarity, tokenize


class PrepConfig(BaseModel):
    """Which preprocessing stages run. All stages off reduces to plain tokenization."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    normalize: bool = False
    lowercase: bool = False
    remove_stopwords: bool = False
    stem: bool = False
    emoticon_polarity: bool = False
    stopword_list: FrozenSet[str] = Field(default=ENGLISH_STOPWORDS)
    rules: NormalizerRules = Field(default_factory=NormalizerRules)

    @field_validator("stopword_list")
    @classmethod
    def _check_stopwords(cls, value: FrozenSet[str]) -> FrozenSet[str]:
        bad = sorted(w for w in value if not w or w != w.lower())
        if bad:
            raise ValueError(f"stopwords must be non-empty and lowercase: {bad[:5]}")
        return value

    @field_serializer("stopword_list")
    def _dump_stopwords(self, value: FrozenSet[str]) -> List[str]:
        return sorted(value)

    @classmethod
    def raw(cls) -> "PrepConfig":
        """Tokenization only."""
        return cls()

    @classmethod
    def full(cls, remove_stopwords: bool = False) -> "PrepConfig":
        """Normalize, lowercase and stem, optionally dropping stopwords."""
        return cls(normalize=True, lowercase=True, stem=True, remove_stopwords=remove_stopwords)


def preprocess(text: str, config: PrepConfig) -> List[str]:
    """
    Turn raw tweet text into tokens.

    Args:
        text: Raw tweet text
        config: Stage switches

    Returns:
        Token list (deterministic for a given text and config)
    """
    if config.normalize:
        text = normalize(text, config.rules)
    tokens = tokenize(text)
    if config.emoticon_polarity:
        tokens = mark_emoticon_polarity(tokens)
    if config.lowercase:
        tokens = [token.lower() for token in tokens]
    if config.remove_stopwords:
        tokens = remove_stopwords(tokens, config.stopword_list)
    if config.stem:
        tokens = [stem(token) for token in tokens]
    return tokens


def trace(text: str, config: PrepConfig) -> List[Tuple[str, bool, str]]:
    """
    Run the pipeline stage by stage.

    Returns:
        (stage name, whether the stage ran, output after the stage) per stage;
        token stages render their output as a space-joined token list
    """
    steps: List[Tuple[str, bool, str]] = [("input", True, text)]

    if config.normalize:
        text = normalize(text, config.rules)
    steps.append(("normalize", config.normalize, text))

    tokens = tokenize(text)
    steps.append(("tokenize", True, " ".join(tokens)))

    if config.emoticon_polarity:
        tokens = mark_emoticon_polarity(tokens)
        steps.append(("emoticon_polarity", True, " ".join(tokens)))

    if config.lowercase:
        tokens = [token.lower() for token in tokens]
    steps.append(("lowercase", config.lowercase, " ".join(tokens)))

    if config.remove_stopwords:
        tokens = remove_stopwords(tokens, config.stopword_list)
    steps.append(("remove_stopwords", config.remove_stopwords, " ".join(tokens)))

    if config.stem:
        tokens = [stem(token) for token in tokens]
    steps.append(("stem", config.stem, " ".join(tokens)))
    return steps
