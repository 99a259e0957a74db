"""Linear SVM trained with a deterministic SMO variant.

Classic pairwise dual ascent: scan training points in index order, and for
each KKT violator pick the partner with the largest error gap (ties to the
lower index), falling back to an ordered scan when that pair cannot move.
No randomness anywhere, so identical inputs always produce identical models.
Labels map SAFE -> +1, UNSAFE -> -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataError, InvalidParameterError
from ..salubrity import Label
from .data import Sample2D

LABEL_SIGN = {Label.SAFE: 1.0, Label.UNSAFE: -1.0}

# alpha steps smaller than this are numerical noise, not progress
_MIN_ALPHA_STEP = 1e-12


@dataclass(frozen=True)
class SvmModel:
    w: tuple[float, float]
    b: float
    alphas: tuple[float, ...]
    c: float
    converged: bool
    iterations: int

    def decision_value(self, x: float, y: float) -> float:
        return self.w[0] * x + self.w[1] * y + self.b

    def predict_label(self, sample: Sample2D) -> Label:
        return Label.SAFE if self.decision_value(sample.x, sample.y) >= 0.0 else Label.UNSAFE

    def to_json_dict(self) -> dict:
        return {
            "w": list(self.w),
            "b": self.b,
            "alphas": list(self.alphas),
            "c": self.c,
            "converged": self.converged,
            "iterations": self.iterations,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SvmModel":
        return cls(
            w=(float(obj["w"][0]), float(obj["w"][1])),
            b=float(obj["b"]),
            alphas=tuple(float(a) for a in obj["alphas"]),
            c=float(obj["c"]),
            converged=bool(obj["converged"]),
            iterations=int(obj["iterations"]),
        )


def fit_svm(
    samples: list[Sample2D],
    c: float = 10.0,
    tol: float = 1e-3,
    max_iter: int = 1000,
) -> SvmModel:
    """Solve the soft-margin dual; max_iter counts full passes over the data.

    Convergence means one complete pass found no KKT violator beyond tol.
    Running out of passes returns the best-effort model with converged False.
    """
    if c <= 0:
        raise InvalidParameterError(f"box constraint c must be > 0, got {c}")
    if any(s.label is None for s in samples):
        raise InvalidParameterError("every sample must carry a label")
    labels = {s.label for s in samples}
    if len(labels) < 2:
        raise DegenerateDataError(f"both classes required, got only {sorted(lb.value for lb in labels)}")

    x = np.array([[s.x, s.y] for s in samples], dtype=float)
    y = np.array([LABEL_SIGN[s.label] for s in samples], dtype=float)
    n = len(samples)
    k = x @ x.T  # linear kernel, cached

    alphas = np.zeros(n)
    b = 0.0

    def decision(i: int) -> float:
        return float((alphas * y) @ k[:, i]) + b

    def errors() -> np.ndarray:
        return (alphas * y) @ k + b - y

    def try_step(i: int, j: int, e: np.ndarray) -> bool:
        nonlocal b
        if i == j:
            return False
        if y[i] != y[j]:
            lo = max(0.0, alphas[j] - alphas[i])
            hi = min(c, c + alphas[j] - alphas[i])
        else:
            lo = max(0.0, alphas[i] + alphas[j] - c)
            hi = min(c, alphas[i] + alphas[j])
        if hi - lo < _MIN_ALPHA_STEP:
            return False
        eta = 2.0 * k[i, j] - k[i, i] - k[j, j]
        if eta >= 0:
            return False
        a_j_new = alphas[j] - y[j] * (e[i] - e[j]) / eta
        a_j_new = min(hi, max(lo, a_j_new))
        if abs(a_j_new - alphas[j]) < _MIN_ALPHA_STEP:
            return False
        a_i_new = alphas[i] + y[i] * y[j] * (alphas[j] - a_j_new)

        b1 = b - e[i] - y[i] * (a_i_new - alphas[i]) * k[i, i] - y[j] * (a_j_new - alphas[j]) * k[i, j]
        b2 = b - e[j] - y[i] * (a_i_new - alphas[i]) * k[i, j] - y[j] * (a_j_new - alphas[j]) * k[j, j]
        alphas[i] = a_i_new
        alphas[j] = a_j_new
        if 0.0 < a_i_new < c:
            b = b1
        elif 0.0 < a_j_new < c:
            b = b2
        else:
            b = (b1 + b2) / 2.0
        return True

    converged = False
    passes = 0
    for passes in range(1, max_iter + 1):
        changed = 0
        violated = 0
        for i in range(n):
            e = errors()
            r_i = y[i] * e[i]
            if not ((r_i < -tol and alphas[i] < c) or (r_i > tol and alphas[i] > 0)):
                continue
            violated += 1
            gaps = np.abs(e[i] - e)
            gaps[i] = -1.0
            # largest error gap first, lowest index on ties, then ordered fallback
            order = sorted(range(n), key=lambda jj: (-gaps[jj], jj))
            for j in order:
                if j != i and try_step(i, j, e):
                    changed += 1
                    break
        if violated == 0:
            converged = True
            break
        if changed == 0:
            break  # violators remain but no pair can move: stuck, report as-is

    w_vec = (alphas * y) @ x
    return SvmModel(
        w=(float(w_vec[0]), float(w_vec[1])),
        b=float(b),
        alphas=tuple(float(a) for a in alphas),
        c=float(c),
        converged=converged,
        iterations=passes,
    )


def kkt_residuals(model: SvmModel, samples: list[Sample2D]) -> list[float]:
    """Per-sample KKT violation magnitudes (0 = condition satisfied).

    alpha = 0 requires y*f >= 1, interior alpha requires y*f == 1 and
    alpha = C requires y*f <= 1; anything else is a positive residual.
    """
    residuals = []
    for alpha, s in zip(model.alphas, samples):
        margin = LABEL_SIGN[s.label] * model.decision_value(s.x, s.y)
        if alpha <= 0.0:
            residuals.append(max(0.0, 1.0 - margin))
        elif alpha >= model.c:
            residuals.append(max(0.0, margin - 1.0))
        else:
            residuals.append(abs(margin - 1.0))
    return residuals
