"""DHT-11 and MQ-135 transfer models.

The DHT-11 side is datasheet-informed: 0-50 degC and 20-90 %RH at 1-unit
resolution, with optional Gaussian read noise. The MQ-135 side follows the
usual log-log power law ppm = a * (Rs/R0)^b seen through a voltage divider
and an n-bit ADC; a, b and R0 are calibration placeholders carried in
config, not facts about any particular sensor unit.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvalidParameterError, SaturatedReadingError

T_CLAMPED = "T_CLAMPED"
H_CLAMPED = "H_CLAMPED"
GAS_SATURATED = "GAS_SATURATED"


def round_half_up(value: float, resolution: float = 1.0) -> float:
    """Round to the nearest multiple of resolution; ties go toward +inf."""
    return math.floor(value / resolution + 0.5) * resolution


@dataclass(frozen=True)
class Dht11Spec:
    t_min: float = 0.0
    t_max: float = 50.0
    t_resolution: float = 1.0
    h_min: float = 20.0
    h_max: float = 90.0
    h_resolution: float = 1.0
    t_noise_sd: float = 0.5
    h_noise_sd: float = 2.0

    def __post_init__(self):
        if self.t_resolution <= 0 or self.h_resolution <= 0:
            raise InvalidParameterError("resolutions must be > 0")
        if self.t_noise_sd < 0 or self.h_noise_sd < 0:
            raise InvalidParameterError("noise standard deviations must be >= 0")
        if not (self.t_min < self.t_max and self.h_min < self.h_max):
            raise InvalidParameterError("sensor ranges must be non-degenerate")

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Dht11Spec":
        known = ("t_min", "t_max", "t_resolution", "h_min", "h_max", "h_resolution",
                 "t_noise_sd", "h_noise_sd")
        return cls(**{k: float(obj[k]) for k in known if k in obj})


def dht11_quantize(
    true_temp_c: float,
    true_hum_pct: float,
    spec: Dht11Spec = Dht11Spec(),
    rng: random.Random | None = None,
) -> tuple[float, float, list[str]]:
    """Noise, then round-half-up to resolution, then clamp into range.

    Real sensors saturate instead of failing, so out-of-range inputs clamp
    and flag rather than raise.
    """
    if not (math.isfinite(true_temp_c) and math.isfinite(true_hum_pct)):
        raise InvalidParameterError("sensor inputs must be finite")
    temp = true_temp_c
    hum = true_hum_pct
    if rng is not None:
        if spec.t_noise_sd > 0:
            temp += rng.gauss(0.0, spec.t_noise_sd)
        if spec.h_noise_sd > 0:
            hum += rng.gauss(0.0, spec.h_noise_sd)

    flags: list[str] = []
    temp = round_half_up(temp, spec.t_resolution)
    hum = round_half_up(hum, spec.h_resolution)
    if temp < spec.t_min or temp > spec.t_max:
        temp = min(spec.t_max, max(spec.t_min, temp))
        flags.append(T_CLAMPED)
    if hum < spec.h_min or hum > spec.h_max:
        hum = min(spec.h_max, max(spec.h_min, hum))
        flags.append(H_CLAMPED)
    return temp, hum, flags


@dataclass(frozen=True)
class Mq135Spec:
    r0: float = 10_000.0  # clean-air baseline resistance, ohms
    curve_a: float = 110.0
    curve_b: float = -2.7
    adc_bits: int = 10
    v_ref: float = 5.0
    load_resistance: float = 10_000.0

    def __post_init__(self):
        if self.r0 <= 0:
            raise InvalidParameterError("r0 must be > 0")
        if self.curve_a <= 0:
            raise InvalidParameterError("curve_a must be > 0")
        if self.curve_b >= 0:
            raise InvalidParameterError("curve_b must be < 0")
        if self.adc_bits < 2:
            raise InvalidParameterError("adc_bits must be >= 2")
        if self.v_ref <= 0 or self.load_resistance <= 0:
            raise InvalidParameterError("v_ref and load_resistance must be > 0")

    @property
    def adc_full_scale(self) -> int:
        return (1 << self.adc_bits) - 1

    def to_json_dict(self) -> dict:
        return {
            "r0": self.r0,
            "curve_a": self.curve_a,
            "curve_b": self.curve_b,
            "adc_bits": self.adc_bits,
            "v_ref": self.v_ref,
            "load_resistance": self.load_resistance,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Mq135Spec":
        known = ("r0", "curve_a", "curve_b", "adc_bits", "v_ref", "load_resistance")
        kwargs = {k: obj[k] for k in known if k in obj}
        if "adc_bits" in kwargs:
            kwargs["adc_bits"] = int(kwargs["adc_bits"])
        return cls(**kwargs)


def mq135_adc_from_ppm(ppm: float, spec: Mq135Spec = Mq135Spec()) -> int:
    """Forward model: concentration -> sensor resistance -> divider -> ADC code.

    Higher ppm lowers Rs (b < 0), which raises the divider output and the
    code; the code clamps at the ADC rails.
    """
    if not (math.isfinite(ppm) and ppm > 0):
        raise InvalidParameterError(f"ppm must be finite and > 0, got {ppm!r}")
    ratio = (ppm / spec.curve_a) ** (1.0 / spec.curve_b)
    rs = ratio * spec.r0
    v_out = spec.v_ref * spec.load_resistance / (rs + spec.load_resistance)
    code = int(round_half_up(v_out / spec.v_ref * spec.adc_full_scale))
    return min(spec.adc_full_scale, max(0, code))


def mq135_ppm_from_adc(adc: int, spec: Mq135Spec = Mq135Spec()) -> float:
    """Inverse model for calibration: ADC code back to concentration.

    Codes at 0 or full scale carry no resistance information (the divider
    ratio degenerates), so they raise SaturatedReadingError.
    """
    if adc <= 0 or adc >= spec.adc_full_scale:
        raise SaturatedReadingError(f"adc code {adc} is saturated for {spec.adc_bits}-bit range")
    rs = spec.load_resistance * (spec.adc_full_scale - adc) / adc
    return spec.curve_a * (rs / spec.r0) ** spec.curve_b
