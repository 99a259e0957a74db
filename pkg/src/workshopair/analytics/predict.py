"""Single prediction entry point over the three model kinds."""

from __future__ import annotations

from ..errors import InvalidParameterError
from ..salubrity import Label
from .data import Sample2D
from .regression import RegressionModel
from .svm import SvmModel
from .tree import Leaf, Split, predict_tree


def predict(model, point: Sample2D) -> float | Label:
    """Regression -> predicted humidity; tree/SVM -> SAFE or UNSAFE."""
    if isinstance(model, RegressionModel):
        return model.predict(point.x)
    if isinstance(model, (Leaf, Split)):
        return predict_tree(model, point)
    if isinstance(model, SvmModel):
        return model.predict_label(point)
    raise InvalidParameterError(f"unsupported model type: {type(model).__name__}")
