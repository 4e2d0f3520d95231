"""
Vocabulary building and sparse count / TF-IDF feature vectors.
"""
from src.features.ngrams import NgramRange, extract_ngrams
from src.features.vocabulary import Vocabulary, build_vocabulary
from src.features.vectors import (
    FeatureVector,
    FeatureMatrix,
    vectorize_counts,
    vectorize_corpus,
)
from src.features.tfidf import IdfModel, fit_idf, apply_tfidf, transform_matrix

__all__ = [
    "NgramRange",
    "extract_ngrams",
    "Vocabulary",
    "build_vocabulary",
    "FeatureVector",
    "FeatureMatrix",
    "vectorize_counts",
    "vectorize_corpus",
    "IdfModel",
    "fit_idf",
    "apply_tfidf",
    "transform_matrix",
]
