"""Ordinary least squares fit of humidity against temperature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataError, InsufficientDataError
from .data import Sample2D


@dataclass(frozen=True)
class RegressionModel:
    """y = slope * x + intercept. r_squared is None when the target is constant."""

    slope: float
    intercept: float
    r_squared: float | None

    def predict(self, x: float) -> float:
        return self.slope * x + self.intercept

    def to_json_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RegressionModel":
        r2 = obj.get("r_squared")
        return cls(float(obj["slope"]), float(obj["intercept"]), None if r2 is None else float(r2))


def fit_linear_regression(samples: list[Sample2D]) -> RegressionModel:
    """Least-squares slope/intercept via the centred sums.

    Raises InsufficientDataError for n < 2 and DegenerateDataError when every
    x is identical (the slope is unidentifiable).
    """
    if len(samples) < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {len(samples)}")
    x = np.array([s.x for s in samples], dtype=float)
    y = np.array([s.y for s in samples], dtype=float)
    if np.all(x == x[0]):
        raise DegenerateDataError("all x values identical; slope is undefined")

    x_bar = x.mean()
    y_bar = y.mean()
    sxx = float(np.sum((x - x_bar) ** 2))
    sxy = float(np.sum((x - x_bar) * (y - y_bar)))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar

    ss_tot = float(np.sum((y - y_bar) ** 2))
    if ss_tot == 0.0:
        r_squared = None
    else:
        ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
        # rounding can push 1 - ss_res/ss_tot a hair outside [0, 1]
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return RegressionModel(slope=slope, intercept=intercept, r_squared=r_squared)
