"""Gaussian comfort model.

Two bell curves, one per environmental axis (temperature centred on 21 degC,
relative humidity centred on 40 %), are multiplied into a single salubrity
index. The index peaks at the configured scale (100 by default) when both
readings sit exactly on their centres and decays smoothly as either one
drifts away. Everything here is pure math over immutable inputs and is safe
to call from any thread.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameterError


class Label(str, Enum):
    SAFE = "SAFE"
    UNSAFE = "UNSAFE"


@dataclass(frozen=True)
class SalubrityConfig:
    """Centres and spreads of the two comfort Gaussians plus the peak value.

    The spreads are engineering defaults (the index roughly halves about
    4.7 degC / 14 %RH away from centre); deployments tune them in config.
    """

    mu_t: float = 21.0
    sigma_t: float = 4.0
    mu_h: float = 40.0
    sigma_h: float = 12.0
    scale: float = 100.0

    def __post_init__(self):
        for name in ("mu_t", "mu_h"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        for name in ("sigma_t", "sigma_h", "scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")

    def to_json_dict(self) -> dict:
        return {
            "mu_t": self.mu_t,
            "sigma_t": self.sigma_t,
            "mu_h": self.mu_h,
            "sigma_h": self.sigma_h,
            "scale": self.scale,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SalubrityConfig":
        return cls(**{k: float(obj[k]) for k in ("mu_t", "sigma_t", "mu_h", "sigma_h", "scale") if k in obj})


@dataclass(frozen=True)
class SalubrityScore:
    """Index value together with its two per-axis factors."""

    value: float
    temp_factor: float
    hum_factor: float

    def to_json_dict(self) -> dict:
        return {"value": self.value, "temp_factor": self.temp_factor, "hum_factor": self.hum_factor}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SalubrityScore":
        return cls(float(obj["value"]), float(obj["temp_factor"]), float(obj["hum_factor"]))


def gaussian_factor(x: float, mu: float, sigma: float) -> float:
    """exp(-(x - mu)^2 / (2 sigma^2)); 1.0 exactly at the centre, never 0."""
    if not math.isfinite(x):
        raise InvalidParameterError(f"x must be finite, got {x!r}")
    if not math.isfinite(mu):
        raise InvalidParameterError(f"mu must be finite, got {mu!r}")
    if not (math.isfinite(sigma) and sigma > 0):
        raise InvalidParameterError(f"sigma must be finite and > 0, got {sigma!r}")
    z = (x - mu) / sigma
    return math.exp(-0.5 * z * z)


def salubrity(temp_c: float, hum_pct: float, cfg: SalubrityConfig | None = None) -> SalubrityScore:
    """Index for one (temperature, humidity) reading.

    The value is scale * f_T(temp) * f_H(hum). The Gaussian product never
    reaches 0, so the index lives in the open-closed interval (0, scale];
    no clamping or rounding happens here.
    """
    cfg = cfg if cfg is not None else SalubrityConfig()
    temp_factor = gaussian_factor(temp_c, cfg.mu_t, cfg.sigma_t)
    hum_factor = gaussian_factor(hum_pct, cfg.mu_h, cfg.sigma_h)
    return SalubrityScore(
        value=cfg.scale * temp_factor * hum_factor,
        temp_factor=temp_factor,
        hum_factor=hum_factor,
    )


def classify_salubrity(score: SalubrityScore, threshold: float) -> Label:
    """SAFE when value >= threshold; the tie goes to the non-alert side."""
    return Label.SAFE if score.value >= threshold else Label.UNSAFE


@dataclass(frozen=True)
class SurfaceGrid:
    """Index sampled on a rectangular (temperature x humidity) grid.

    values is row-major: values[i][j] belongs to (t_axis[i], h_axis[j]).
    """

    t_axis: tuple[float, ...]
    h_axis: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "t_axis": list(self.t_axis),
            "h_axis": list(self.h_axis),
            "values": [list(row) for row in self.values],
        }

    def to_csv_text(self) -> str:
        """Header row = humidity axis, first column = temperature axis."""
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["temp_c\\hum_pct"] + [repr(h) for h in self.h_axis])
        for t, row in zip(self.t_axis, self.values):
            writer.writerow([repr(t)] + [repr(v) for v in row])
        return buf.getvalue()


def _linspace(lo: float, hi: float, steps: int) -> tuple[float, ...]:
    # endpoints exact by construction; interior points use the weighted form
    last = steps - 1
    return tuple(
        lo if i == 0 else hi if i == last else (lo * (last - i) + hi * i) / last
        for i in range(steps)
    )


def surface_grid(
    cfg: SalubrityConfig,
    t_min: float,
    t_max: float,
    h_min: float,
    h_max: float,
    steps: int,
) -> SurfaceGrid:
    """Evenly spaced steps x steps grid, endpoints included.

    Each cell is produced by the same salubrity() call a live reading would
    take, so grid values and per-reading values can never disagree.
    """
    if not isinstance(steps, int) or steps < 2:
        raise InvalidParameterError(f"steps must be an integer >= 2, got {steps!r}")
    for name, value in (("t_min", t_min), ("t_max", t_max), ("h_min", h_min), ("h_max", h_max)):
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite")
    if not t_min < t_max:
        raise InvalidParameterError(f"degenerate temperature range [{t_min}, {t_max}]")
    if not h_min < h_max:
        raise InvalidParameterError(f"degenerate humidity range [{h_min}, {h_max}]")

    t_axis = _linspace(t_min, t_max, steps)
    h_axis = _linspace(h_min, h_max, steps)
    values = tuple(
        tuple(salubrity(t, h, cfg).value for h in h_axis)
        for t in t_axis
    )
    return SurfaceGrid(t_axis=t_axis, h_axis=h_axis, values=values)
