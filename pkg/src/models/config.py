"""
Training configuration records for the classifiers.
"""
from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

Penalty = Literal["none", "l1", "l2"]
ClassWeightOption = Optional[Union[Literal["balanced"], Dict[str, float]]]


class MnbConfig(BaseModel):
    """Multinomial Naive Bayes settings."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["mnb"] = "mnb"
    alpha: float = Field(default=1.0, gt=0.0)


class TrainConfig(BaseModel):
    """
    Logistic regression settings.

    The objective is sum_i c_{y_i} * NLL_i + (1/C) * R(W): the data term is
    not averaged, so small C means strong regularization. The bias is never
    penalized.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["logreg"] = "logreg"
    penalty: Penalty = "l2"
    C: float = Field(default=1.0, gt=0.0)
    class_weights: ClassWeightOption = None
    tolerance: float = Field(default=1e-6, gt=0.0)
    max_iterations: int = Field(default=1000, ge=1)
    seed: int = 0
    init: Literal["zeros", "random"] = "zeros"

    @field_validator("class_weights")
    @classmethod
    def _check_weights(cls, value: ClassWeightOption) -> ClassWeightOption:
        if isinstance(value, dict):
            bad = {label: w for label, w in value.items() if not w > 0}
            if bad:
                raise ValueError(f"class weights must be positive: {bad}")
        return value
