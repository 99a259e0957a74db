"""Training samples and their CSV import/export.

The import format is whatever the channel-store CSV export produces: a header
row with at least ts, temperature_c and humidity_pct columns; an optional
label column carries SAFE/UNSAFE. Extra columns are ignored.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from ..errors import InvalidParameterError
from ..salubrity import Label, SalubrityConfig, classify_salubrity, salubrity

REQUIRED_COLUMNS = ("ts", "temperature_c", "humidity_pct")


@dataclass(frozen=True)
class Sample2D:
    """One (temperature, humidity) point, optionally labelled."""

    x: float  # temperature, degC
    y: float  # humidity, %RH
    label: Label | None = None

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameterError(f"sample coordinates must be finite, got ({self.x!r}, {self.y!r})")


def derive_labels(samples: list[Sample2D], cfg: SalubrityConfig, threshold: float) -> list[Sample2D]:
    """Label each sample by whether its salubrity index clears the threshold."""
    return [
        Sample2D(s.x, s.y, classify_salubrity(salubrity(s.x, s.y, cfg), threshold))
        for s in samples
    ]


def load_samples_csv(path: str | Path) -> list[Sample2D]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise InvalidParameterError(f"CSV missing required columns: {', '.join(missing)}")
        has_label = "label" in header
        samples = []
        for row in reader:
            label = None
            if has_label and row["label"]:
                label = Label(row["label"])
            samples.append(Sample2D(float(row["temperature_c"]), float(row["humidity_pct"]), label))
    return samples


def write_samples_csv(path: str | Path, samples: list[Sample2D], ts: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["ts", "temperature_c", "humidity_pct", "label"])
        for s in samples:
            writer.writerow([ts, repr(s.x), repr(s.y), s.label.value if s.label else ""])
