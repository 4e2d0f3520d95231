"""
Tweet normalization, tokenization, stopword removal and stemming.
"""
from src.textprep.normalizer import NormalizerRules, normalize, PLACEHOLDERS
from src.textprep.tokenizer import tokenize, EMOTICONS
from src.textprep.stopwords import remove_stopwords, ENGLISH_STOPWORDS, STOPWORDS_VERSION
from src.textprep.stemmer import stem
from src.textprep.pipeline import PrepConfig, preprocess, trace

__all__ = [
    "NormalizerRules",
    "normalize",
    "PLACEHOLDERS",
    "tokenize",
    "EMOTICONS",
    "remove_stopwords",
    "ENGLISH_STOPWORDS",
    "STOPWORDS_VERSION",
    "stem",
    "PrepConfig",
    "preprocess",
    "trace",
]
