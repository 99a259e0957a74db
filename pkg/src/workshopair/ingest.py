"""Payload validation and the per-channel ingestion pipeline.

Every MQTT message goes through: strict JSON parse -> schema/range checks ->
device-to-channel routing -> (device_id, ts) dedup -> derived ppm and
salubrity -> append -> alert evaluation. Any failure along the way is
counted and written to the dead-letter log; ingestion itself never raises
out of the message handler.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path

from .alerts import AlertEvent, AlertKind, AlertRule, AlertRuleSet, AlertState
from .errors import (
    DuplicatePayloadError,
    IngestError,
    PayloadParseError,
    PayloadRangeError,
    PayloadSchemaError,
    RoutingError,
    SaturatedReadingError,
)
from .mqtt import MqttClient, parse_broker_uri
from .salubrity import SalubrityConfig, salubrity
from .sensors import GAS_SATURATED, Mq135Spec, mq135_ppm_from_adc
from .simulator import WirePayload
from .store import ChannelStore, FeedEntry
from .timeutil import parse_iso_utc, utc_now

log = logging.getLogger(__name__)

SUBSCRIBE_FILTER = "workshop/+/reading"

REQUIRED_FIELDS = ("ts", "device_id", "temperature_c", "humidity_pct", "mq135_adc")


@dataclass(frozen=True)
class PayloadBounds:
    """Wire-level sanity ranges; defaults follow the DHT-11 datasheet and a
    10-bit ADC."""

    temp_min: int = 0
    temp_max: int = 50
    hum_min: int = 20
    hum_max: int = 90
    adc_min: int = 0
    adc_max: int = 1023


DEFAULT_BOUNDS = PayloadBounds()


def parse_payload(raw: bytes, bounds: PayloadBounds = DEFAULT_BOUNDS) -> WirePayload:
    """Strict parse of one wire message; unknown JSON fields are ignored."""
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise PayloadParseError(f"malformed payload: {exc}") from exc
    if not isinstance(obj, dict):
        raise PayloadSchemaError("payload must be a JSON object", missing=list(REQUIRED_FIELDS))

    missing = [name for name in REQUIRED_FIELDS if name not in obj]
    if missing:
        raise PayloadSchemaError(f"missing required fields: {', '.join(missing)}", missing=missing)

    if not isinstance(obj["device_id"], str) or not obj["device_id"]:
        raise PayloadSchemaError("device_id must be a non-empty string")
    try:
        parse_iso_utc(str(obj["ts"]))
    except ValueError as exc:
        raise PayloadSchemaError(f"unparseable ts {obj['ts']!r}") from exc

    numbers = {}
    for name in ("temperature_c", "humidity_pct", "mq135_adc"):
        value = obj[name]
        if isinstance(value, bool) or not isinstance(value, int):
            raise PayloadSchemaError(f"{name} must be an integer, got {value!r}")
        numbers[name] = value

    checks = (
        ("temperature_c", bounds.temp_min, bounds.temp_max),
        ("humidity_pct", bounds.hum_min, bounds.hum_max),
        ("mq135_adc", bounds.adc_min, bounds.adc_max),
    )
    for name, lo, hi in checks:
        if not lo <= numbers[name] <= hi:
            raise PayloadRangeError(f"{name}={numbers[name]} outside [{lo}, {hi}]", field=name)

    flags = obj.get("flags", [])
    if not isinstance(flags, list) or not all(isinstance(x, str) for x in flags):
        raise PayloadSchemaError("flags must be a list of strings")

    return WirePayload(
        ts=str(obj["ts"]),
        device_id=obj["device_id"],
        temperature_c=numbers["temperature_c"],
        humidity_pct=numbers["humidity_pct"],
        mq135_adc=numbers["mq135_adc"],
        flags=tuple(flags),
    )


class DeadLetterLog:
    """JSON-lines record of every rejected payload and why."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def record(self, raw: bytes, error: IngestError, topic: str | None = None) -> None:
        row = {
            "received_at": utc_now().isoformat(),
            "topic": topic,
            "error_code": error.code,
            "reason": str(error),
            "payload": raw.decode("utf-8", errors="replace"),
        }
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps(row) + "\n")

    def count(self) -> int:
        if not self.path.exists():
            return 0
        with open(self.path, encoding="utf-8") as f:
            return sum(1 for line in f if line.strip())


@dataclass
class IngestCounters:
    received: int = 0
    stored: int = 0
    duplicates: int = 0
    dead_lettered: int = 0


class Ingestor:
    """Routes validated payloads into the store and drives alert evaluation.

    Appends and alert transitions for one channel happen under that
    channel's store lock, so event ordering per rule is total.
    """

    def __init__(
        self,
        store: ChannelStore,
        salubrity_cfg: SalubrityConfig,
        mq_spec: Mq135Spec,
        rules_by_channel: dict[str, list[AlertRule]] | None = None,
        dead_letter_path: str | Path | None = None,
        bounds: PayloadBounds = DEFAULT_BOUNDS,
    ):
        self.store = store
        self.salubrity_cfg = salubrity_cfg
        self.mq_spec = mq_spec
        self.bounds = bounds
        self.dead_letters = DeadLetterLog(dead_letter_path or store.data_dir / "dead_letter.jsonl")
        self.counters = IngestCounters()
        self._rulesets: dict[str, AlertRuleSet] = {}
        self._routes: dict[str, str] = {}  # device_id -> channel_id
        for channel in store.channels():
            self._routes[channel.bound_device_id] = channel.channel_id
            rules = (rules_by_channel or {}).get(channel.channel_id, [])
            self._rulesets[channel.channel_id] = AlertRuleSet(rules)

    # -- message paths

    def handle_message(self, topic: str, raw: bytes) -> FeedEntry | None:
        """MQTT entry point: never raises, returns the stored entry or None."""
        self.counters.received += 1
        try:
            payload = parse_payload(raw, self.bounds)
            return self.ingest(payload)
        except DuplicatePayloadError:
            self.counters.duplicates += 1
            return None
        except IngestError as exc:
            self.counters.dead_lettered += 1
            self.dead_letters.record(raw, exc, topic=topic)
            log.warning("payload rejected (%s): %s", exc.code, exc)
            return None

    def ingest(self, payload: WirePayload) -> FeedEntry:
        """Validated payload -> FeedEntry; raises IngestError subclasses."""
        channel_id = self._routes.get(payload.device_id)
        if channel_id is None:
            raise RoutingError(f"no channel bound to device {payload.device_id!r}")
        channel = self.store.get_channel(channel_id)

        ts = parse_iso_utc(payload.ts)
        flags = list(payload.flags)
        try:
            ppm = mq135_ppm_from_adc(payload.mq135_adc, self.mq_spec)
        except SaturatedReadingError:
            ppm = None
            flags.append(GAS_SATURATED)
        score = salubrity(float(payload.temperature_c), float(payload.humidity_pct), self.salubrity_cfg)

        wire_values = {
            "temperature_c": payload.temperature_c,
            "humidity_pct": payload.humidity_pct,
            "mq135_adc": payload.mq135_adc,
        }
        values = {name: wire_values[name] for name in channel.field_names() if name in wire_values}

        with self.store.channel_lock(channel_id):  # one logical writer per channel
            entry = self.store.append(
                channel_id,
                ts=ts,
                device_id=payload.device_id,
                values=values,
                salubrity=score,
                ppm=ppm,
                flags=tuple(flags),
            )
            if entry is None:
                raise DuplicatePayloadError(f"duplicate ({payload.device_id}, {payload.ts})")
            ruleset = self._rulesets[channel_id]
            events = ruleset.observe(AlertKind.SALUBRITY_BELOW, score.value, ts)
            if ppm is not None:
                events += ruleset.observe(AlertKind.GAS_PPM_ABOVE, ppm, ts)
            for event in events:
                self.store.append_event(channel_id, event)
                log.info("alert %s %s on %s value=%s", event.kind.value, event.rule_id, channel_id, event.value)
        self.counters.stored += 1
        return entry

    # -- alert config surface (used by the API layer)

    def rules(self, channel_id: str) -> list[AlertRule]:
        self.store.get_channel(channel_id)  # raises UnknownChannelError
        return self._rulesets[channel_id].rules()

    def alert_state(self, channel_id: str, rule_id: str) -> AlertState:
        return self._rulesets[channel_id].state(rule_id)

    def replace_rules(self, channel_id: str, rules: list[AlertRule]) -> list[AlertEvent]:
        self.store.get_channel(channel_id)
        with self.store.channel_lock(channel_id):  # atomic w.r.t. in-flight ingestion
            events = self._rulesets[channel_id].replace_rules(rules, utc_now())
            for event in events:
                self.store.append_event(channel_id, event)
        return events


class MqttIngestService:
    """Subscribes the ingestor to the broker and keeps it attached."""

    def __init__(
        self,
        ingestor: Ingestor,
        broker_uri: str,
        client_id: str = "workshopair-ingest",
        username: str | None = None,
        password: str | None = None,
    ):
        host, port = parse_broker_uri(broker_uri)
        self.client = MqttClient(host, port, client_id, username=username, password=password, keepalive_s=30)
        self.ingestor = ingestor

    def start(self) -> None:
        self.client.connect()
        self.client.subscribe(SUBSCRIBE_FILTER, self.ingestor.handle_message, qos=1)
        log.info("subscribed to %s", SUBSCRIBE_FILTER)

    def stop(self) -> None:
        self.client.disconnect()
