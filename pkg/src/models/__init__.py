"""
Multinomial Naive Bayes and softmax logistic regression classifiers.
"""
from src.models.config import MnbConfig, TrainConfig
from src.models.naive_bayes import MnbModel, train_mnb, predict_mnb, predict_mnb_batch
from src.models.logistic import (
    LogRegModel,
    LogisticObjective,
    loss_and_gradient,
    resolve_class_weights,
    train_logreg,
    predict_logreg,
    predict_logreg_batch,
)

__all__ = [
    "MnbConfig",
    "TrainConfig",
    "MnbModel",
    "train_mnb",
    "predict_mnb",
    "predict_mnb_batch",
    "LogRegModel",
    "LogisticObjective",
    "loss_and_gradient",
    "resolve_class_weights",
    "train_logreg",
    "predict_logreg",
    "predict_logreg_batch",
]
