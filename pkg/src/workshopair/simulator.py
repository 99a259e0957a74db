"""Scenario-driven sensor emulator and its MQTT wire format.

A scenario holds a baseline climate plus scripted events (gas spikes and
temperature/humidity drifts) that ramp linearly in and out of their windows.
Runs are reproducible: the same scenario and seed always produce the same
byte sequence of payloads. Timestamps are simulated (start epoch + k * period)
unless wall-clock mode is requested.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable

from .errors import InvalidParameterError, ScenarioAbortedError
from .sensors import Dht11Spec, Mq135Spec, dht11_quantize, mq135_adc_from_ppm
from .timeutil import format_iso_utc, parse_iso_utc

TOPIC_TEMPLATE = "workshop/{device_id}/reading"
DEFAULT_START_TS = "2024-01-01T00:00:00Z"

# concentrations this low pin the ADC at zero anyway; keeps the power law defined
_MIN_PPM = 1e-9

Publisher = Callable[[str, bytes], None]


class EventKind(str, Enum):
    GAS_SPIKE = "GAS_SPIKE"
    TEMP_DRIFT = "TEMP_DRIFT"
    HUM_DRIFT = "HUM_DRIFT"


@dataclass(frozen=True)
class Baseline:
    temp_c: float = 21.0
    hum_pct: float = 40.0
    gas_ppm: float = 110.0


@dataclass(frozen=True)
class ScenarioEvent:
    start_s: float
    end_s: float
    kind: EventKind
    magnitude: float
    ramp_s: float = 0.0

    def factor_at(self, t: float) -> float:
        """0 outside [start, end); ramps linearly over ramp_s at both edges."""
        if t < self.start_s or t >= self.end_s:
            return 0.0
        if self.ramp_s <= 0:
            return 1.0
        return max(0.0, min(1.0, (t - self.start_s) / self.ramp_s, (self.end_s - t) / self.ramp_s))


@dataclass(frozen=True)
class Scenario:
    duration_s: float
    sample_period_s: float
    baseline: Baseline = Baseline()
    events: tuple[ScenarioEvent, ...] = ()
    seed: int = 0
    device_id: str = "sim-01"
    start_ts: str = DEFAULT_START_TS

    def __post_init__(self):
        if self.duration_s <= 0:
            raise InvalidParameterError("duration_s must be > 0")
        if self.sample_period_s <= 0:
            raise InvalidParameterError("sample_period_s must be > 0")
        for ev in self.events:
            if ev.ramp_s < 0:
                raise InvalidParameterError("ramp_s must be >= 0")
            if not (0 <= ev.start_s < ev.end_s <= self.duration_s):
                raise InvalidParameterError(
                    f"event window [{ev.start_s}, {ev.end_s}] outside scenario [0, {self.duration_s}]"
                )

    @property
    def sample_count(self) -> int:
        return math.ceil(self.duration_s / self.sample_period_s)

    def values_at(self, t: float) -> tuple[float, float, float]:
        """True (temp, hum, gas) at scenario time t, before sensor effects."""
        temp = self.baseline.temp_c
        hum = self.baseline.hum_pct
        gas = self.baseline.gas_ppm
        for ev in self.events:
            contribution = ev.magnitude * ev.factor_at(t)
            if ev.kind is EventKind.GAS_SPIKE:
                gas += contribution
            elif ev.kind is EventKind.TEMP_DRIFT:
                temp += contribution
            else:
                hum += contribution
        return temp, hum, max(_MIN_PPM, gas)

    def to_json_dict(self) -> dict:
        return {
            "duration_s": self.duration_s,
            "sample_period_s": self.sample_period_s,
            "baseline": {
                "temp_c": self.baseline.temp_c,
                "hum_pct": self.baseline.hum_pct,
                "gas_ppm": self.baseline.gas_ppm,
            },
            "events": [
                {
                    "start_s": ev.start_s,
                    "end_s": ev.end_s,
                    "kind": ev.kind.value,
                    "magnitude": ev.magnitude,
                    "ramp_s": ev.ramp_s,
                }
                for ev in self.events
            ],
            "seed": self.seed,
            "device_id": self.device_id,
            "start_ts": self.start_ts,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Scenario":
        try:
            baseline = Baseline(**obj.get("baseline", {}))
            events = tuple(
                ScenarioEvent(
                    start_s=float(ev["start_s"]),
                    end_s=float(ev["end_s"]),
                    kind=EventKind(ev["kind"]),
                    magnitude=float(ev["magnitude"]),
                    ramp_s=float(ev.get("ramp_s", 0.0)),
                )
                for ev in obj.get("events", [])
            )
            return cls(
                duration_s=float(obj["duration_s"]),
                sample_period_s=float(obj["sample_period_s"]),
                baseline=baseline,
                events=events,
                seed=int(obj.get("seed", 0)),
                device_id=str(obj.get("device_id", "sim-01")),
                start_ts=str(obj.get("start_ts", DEFAULT_START_TS)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidParameterError(f"bad scenario: {exc}") from exc


def load_scenario(path: str | Path) -> Scenario:
    with open(path, encoding="utf-8") as f:
        return Scenario.from_json_dict(json.load(f))


@dataclass(frozen=True)
class WirePayload:
    """One reading as it travels over MQTT (JSON, UTF-8, fixed field order)."""

    ts: str
    device_id: str
    temperature_c: int
    humidity_pct: int
    mq135_adc: int
    flags: tuple[str, ...] = ()

    def to_json_bytes(self) -> bytes:
        obj = {
            "ts": self.ts,
            "device_id": self.device_id,
            "temperature_c": self.temperature_c,
            "humidity_pct": self.humidity_pct,
            "mq135_adc": self.mq135_adc,
            "flags": list(self.flags),
        }
        return json.dumps(obj, separators=(",", ":")).encode("utf-8")

    @property
    def topic(self) -> str:
        return TOPIC_TEMPLATE.format(device_id=self.device_id)


def build_payload(
    scenario: Scenario,
    sample_index: int,
    dht: Dht11Spec,
    mq: Mq135Spec,
    rng: random.Random,
    wall_clock: bool = False,
) -> WirePayload:
    t = sample_index * scenario.sample_period_s
    temp, hum, gas = scenario.values_at(t)
    temp_q, hum_q, flags = dht11_quantize(temp, hum, dht, rng)
    adc = mq135_adc_from_ppm(gas, mq)
    if wall_clock:
        ts = format_iso_utc(datetime.now(timezone.utc))
    else:
        start = parse_iso_utc(scenario.start_ts)
        ts = format_iso_utc(datetime.fromtimestamp(start.timestamp() + t, tz=timezone.utc))
    return WirePayload(
        ts=ts,
        device_id=scenario.device_id,
        temperature_c=int(temp_q),
        humidity_pct=int(hum_q),
        mq135_adc=adc,
        flags=tuple(flags),
    )


def run_scenario(
    scenario: Scenario,
    dht: Dht11Spec,
    mq: Mq135Spec,
    publisher: Publisher,
    *,
    retries: int = 3,
    backoff_s: float = 0.05,
    realtime: bool = False,
    wall_clock: bool = False,
) -> int:
    """Publish every sample of the scenario; returns how many went out.

    Each payload gets `retries` extra attempts with linear backoff; if one
    still cannot be delivered the run aborts with the count so far.
    """
    rng = random.Random(scenario.seed)
    published = 0
    for k in range(scenario.sample_count):
        payload = build_payload(scenario, k, dht, mq, rng, wall_clock=wall_clock)
        data = payload.to_json_bytes()
        attempt = 0
        while True:
            try:
                publisher(payload.topic, data)
                break
            except Exception as exc:
                attempt += 1
                if attempt > retries:
                    raise ScenarioAbortedError(
                        f"publish failed after {retries} retries at sample {k}: {exc}",
                        published=published,
                    ) from exc
                time.sleep(backoff_s * attempt)
        published += 1
        if realtime and k + 1 < scenario.sample_count:
            time.sleep(scenario.sample_period_s)
    return published
