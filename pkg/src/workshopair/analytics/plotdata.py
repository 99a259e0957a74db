"""Underlying data for the three model figures.

Rather than rendering charts server-side, each export carries everything a
plotting tool needs: the training scatter plus a fitted line (regression),
a decision-region grid (tree) or the separating boundary (SVM).

CSV flattening uses the fixed column order role,x,y,value where role is one
of scatter | line | region | boundary and value holds the label or the
predicted number for that row.
"""

from __future__ import annotations

import csv
import io

from ..errors import InvalidParameterError
from .data import Sample2D
from .predict import predict
from .regression import RegressionModel
from .svm import SvmModel
from .tree import Leaf, Split

Bounds = tuple[float, float, float, float]  # (t_min, t_max, h_min, h_max)


def _scatter_rows(samples: list[Sample2D]) -> list[dict]:
    return [
        {"x": s.x, "y": s.y, "label": s.label.value if s.label else None}
        for s in samples
    ]


def _clip_line_to_bounds(w: tuple[float, float], b: float, bounds: Bounds) -> list[dict]:
    """Intersect w.(x,y) + b = 0 with the bounds rectangle; [] if it misses."""
    t_min, t_max, h_min, h_max = bounds
    wx, wy = w
    points: list[tuple[float, float]] = []
    if wx == 0.0 and wy == 0.0:
        return []
    # crossings with the two vertical edges
    if wy != 0.0:
        for x_edge in (t_min, t_max):
            y_at = -(wx * x_edge + b) / wy
            if h_min <= y_at <= h_max:
                points.append((x_edge, y_at))
    # crossings with the two horizontal edges
    if wx != 0.0:
        for y_edge in (h_min, h_max):
            x_at = -(wy * y_edge + b) / wx
            if t_min <= x_at <= t_max:
                points.append((x_at, y_edge))
    unique: list[tuple[float, float]] = []
    for p in points:
        if not any(abs(p[0] - q[0]) < 1e-12 and abs(p[1] - q[1]) < 1e-12 for q in unique):
            unique.append(p)
    unique.sort()
    if len(unique) < 2:
        return []
    return [{"x": unique[0][0], "y": unique[0][1]}, {"x": unique[-1][0], "y": unique[-1][1]}]


def export_model_plot_data(
    model,
    samples: list[Sample2D],
    bounds: Bounds,
    region_steps: int = 10,
) -> dict:
    t_min, t_max, h_min, h_max = bounds
    if not (t_min < t_max and h_min < h_max):
        raise InvalidParameterError(f"degenerate plot bounds {bounds!r}")

    if isinstance(model, RegressionModel):
        return {
            "schema": 1,
            "model": "linear_regression",
            "scatter": _scatter_rows(samples),
            "line": [
                {"x": t_min, "y": model.predict(t_min)},
                {"x": t_max, "y": model.predict(t_max)},
            ],
        }

    if isinstance(model, (Leaf, Split)):
        regions = []
        for i in range(region_steps):
            x = t_min + (t_max - t_min) * (i + 0.5) / region_steps
            for j in range(region_steps):
                y = h_min + (h_max - h_min) * (j + 0.5) / region_steps
                regions.append({"x": x, "y": y, "label": predict(model, Sample2D(x, y)).value})
        return {
            "schema": 1,
            "model": "decision_tree",
            "scatter": _scatter_rows(samples),
            "regions": regions,
        }

    if isinstance(model, SvmModel):
        return {
            "schema": 1,
            "model": "svm",
            "scatter": _scatter_rows(samples),
            "boundary": _clip_line_to_bounds(model.w, model.b, bounds),
            "w": list(model.w),
            "b": model.b,
        }

    raise InvalidParameterError(f"unsupported model type: {type(model).__name__}")


def plot_data_to_csv(dataset: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["role", "x", "y", "value"])
    for row in dataset.get("scatter", []):
        writer.writerow(["scatter", repr(row["x"]), repr(row["y"]), row["label"] or ""])
    for row in dataset.get("line", []):
        writer.writerow(["line", repr(row["x"]), repr(row["y"]), ""])
    for row in dataset.get("regions", []):
        writer.writerow(["region", repr(row["x"]), repr(row["y"]), row["label"]])
    for row in dataset.get("boundary", []):
        writer.writerow(["boundary", repr(row["x"]), repr(row["y"]), ""])
    return buf.getvalue()
