"""Threshold alerting with hysteresis and a consecutive-sample filter.

Two rule kinds mirror each other: SALUBRITY_BELOW raises when the index
drops under its threshold (strictly) and clears only once the value climbs
back to threshold + hysteresis; GAS_PPM_ABOVE raises on values strictly
over the threshold and clears at threshold - hysteresis. min_consecutive
violating samples are required before a raise, which filters one-sample
blips. The evaluator is pure: same rule, state and value always produce the
same transition, and RAISE/CLEAR events strictly alternate per rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum

from .errors import InvalidParameterError
from .timeutil import format_iso_utc, parse_iso_utc


class AlertKind(str, Enum):
    SALUBRITY_BELOW = "SALUBRITY_BELOW"
    GAS_PPM_ABOVE = "GAS_PPM_ABOVE"


class AlertStatus(str, Enum):
    IDLE = "IDLE"
    RAISED = "RAISED"


class AlertEventKind(str, Enum):
    RAISE = "RAISE"
    CLEAR = "CLEAR"
    CONFIG_RESET = "CONFIG_RESET"


@dataclass(frozen=True)
class AlertRule:
    rule_id: str
    kind: AlertKind
    threshold: float
    hysteresis: float = 0.0
    min_consecutive: int = 1

    def __post_init__(self):
        if not self.rule_id:
            raise InvalidParameterError("rule_id must be non-empty")
        if not math.isfinite(self.threshold):
            raise InvalidParameterError("threshold must be finite")
        if self.kind is AlertKind.SALUBRITY_BELOW and self.threshold <= 0:
            raise InvalidParameterError("SALUBRITY_BELOW threshold must be > 0")
        if not (math.isfinite(self.hysteresis) and self.hysteresis >= 0):
            raise InvalidParameterError(f"hysteresis must be >= 0, got {self.hysteresis!r}")
        if self.min_consecutive < 1:
            raise InvalidParameterError(f"min_consecutive must be >= 1, got {self.min_consecutive}")

    def violates(self, value: float) -> bool:
        if self.kind is AlertKind.SALUBRITY_BELOW:
            return value < self.threshold
        return value > self.threshold

    def clears(self, value: float) -> bool:
        if self.kind is AlertKind.SALUBRITY_BELOW:
            return value >= self.threshold + self.hysteresis
        return value <= self.threshold - self.hysteresis

    def to_json_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "kind": self.kind.value,
            "threshold": self.threshold,
            "hysteresis": self.hysteresis,
            "min_consecutive": self.min_consecutive,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AlertRule":
        try:
            return cls(
                rule_id=str(obj["rule_id"]),
                kind=AlertKind(obj["kind"]),
                threshold=float(obj["threshold"]),
                hysteresis=float(obj.get("hysteresis", 0.0)),
                min_consecutive=int(obj.get("min_consecutive", 1)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidParameterError(f"bad alert rule: {exc}") from exc


@dataclass(frozen=True)
class AlertState:
    status: AlertStatus = AlertStatus.IDLE
    streak: int = 0
    raised_at: datetime | None = None
    cleared_at: datetime | None = None
    last_value: float | None = None


@dataclass(frozen=True)
class AlertEvent:
    rule_id: str
    kind: AlertEventKind
    ts: datetime
    value: float | None

    def to_json_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "kind": self.kind.value,
            "ts": format_iso_utc(self.ts),
            "value": self.value,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AlertEvent":
        return cls(
            rule_id=obj["rule_id"],
            kind=AlertEventKind(obj["kind"]),
            ts=parse_iso_utc(obj["ts"]),
            value=obj.get("value"),
        )


def evaluate_alert(
    rule: AlertRule,
    state: AlertState,
    value: float,
    ts: datetime,
) -> tuple[AlertState, AlertEvent | None]:
    """Advance the per-rule state machine by one sample."""
    if not math.isfinite(value):
        raise InvalidParameterError(f"alert values must be finite, got {value!r}")

    if state.status is AlertStatus.IDLE:
        if rule.violates(value):
            streak = state.streak + 1
            if streak >= rule.min_consecutive:
                new_state = replace(state, status=AlertStatus.RAISED, streak=0, raised_at=ts, last_value=value)
                return new_state, AlertEvent(rule.rule_id, AlertEventKind.RAISE, ts, value)
            return replace(state, streak=streak, last_value=value), None
        return replace(state, streak=0, last_value=value), None

    # RAISED: only a full recovery past the hysteresis band clears
    if rule.clears(value):
        new_state = replace(state, status=AlertStatus.IDLE, streak=0, cleared_at=ts, last_value=value)
        return new_state, AlertEvent(rule.rule_id, AlertEventKind.CLEAR, ts, value)
    return replace(state, last_value=value), None


class AlertRuleSet:
    """Rules plus live per-rule state for one channel."""

    def __init__(self, rules: list[AlertRule] | None = None):
        self._rules: dict[str, AlertRule] = {}
        self._states: dict[str, AlertState] = {}
        for rule in rules or []:
            self._add(rule)

    def _add(self, rule: AlertRule) -> None:
        if rule.rule_id in self._rules:
            raise InvalidParameterError(f"duplicate rule_id {rule.rule_id!r}")
        self._rules[rule.rule_id] = rule
        self._states[rule.rule_id] = AlertState()

    def rules(self) -> list[AlertRule]:
        return list(self._rules.values())

    def state(self, rule_id: str) -> AlertState:
        return self._states[rule_id]

    def observe(self, kind: AlertKind, value: float, ts: datetime) -> list[AlertEvent]:
        """Feed one sample to every rule of the given kind."""
        events = []
        for rule_id, rule in self._rules.items():
            if rule.kind is not kind:
                continue
            new_state, event = evaluate_alert(rule, self._states[rule_id], value, ts)
            self._states[rule_id] = new_state
            if event is not None:
                events.append(event)
        return events

    def replace_rules(self, rules: list[AlertRule], ts: datetime) -> list[AlertEvent]:
        """Swap the whole rule list; changed rules restart from IDLE.

        Rules kept identical keep their in-flight state; changed or re-added
        ones reset and emit CONFIG_RESET so the event history explains why a
        RAISED alert vanished without a CLEAR.
        """
        fresh = AlertRuleSet(rules)
        events = []
        for rule_id, rule in fresh._rules.items():
            if rule_id in self._rules and self._rules[rule_id] == rule:
                fresh._states[rule_id] = self._states[rule_id]
            elif rule_id in self._rules:
                events.append(AlertEvent(rule_id, AlertEventKind.CONFIG_RESET, ts, None))
        self._rules = fresh._rules
        self._states = fresh._states
        return events
