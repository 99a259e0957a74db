"""ThingSpeak-style channel store over append-only JSON-lines files.

One file per channel under data_dir (<channel_id>.jsonl for readings,
<channel_id>.events.jsonl for alert events); the in-memory index is rebuilt
from those files at startup. Appends for a channel are serialized behind a
per-channel lock, queries copy a consistent prefix under that same lock, so
readers never observe a half-applied write. Retention trims the in-memory
window at append time; the log itself is never rewritten.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path

from .alerts import AlertEvent
from .errors import InvalidParameterError, UnknownChannelError
from .salubrity import SalubrityScore
from .timeutil import format_iso_utc, parse_iso_utc

MAX_FIELDS = 8


class Aggregation(str, Enum):
    NONE = "none"
    HOURLY_MEAN = "hourly_mean"
    HOURLY_MIN = "hourly_min"
    HOURLY_MAX = "hourly_max"


@dataclass(frozen=True)
class FieldDef:
    name: str
    unit: str = ""


@dataclass(frozen=True)
class Retention:
    max_entries: int | None = None
    max_age_s: float | None = None


@dataclass(frozen=True)
class Channel:
    channel_id: str
    name: str
    field_defs: tuple[FieldDef, ...]
    retention: Retention = Retention()
    device_id: str | None = None  # payload routing key; defaults to channel_id

    def __post_init__(self):
        if not self.channel_id:
            raise InvalidParameterError("channel_id must be non-empty")
        if not 1 <= len(self.field_defs) <= MAX_FIELDS:
            raise InvalidParameterError(f"channels carry 1..{MAX_FIELDS} fields, got {len(self.field_defs)}")
        names = [fd.name for fd in self.field_defs]
        if len(set(names)) != len(names):
            raise InvalidParameterError(f"duplicate field names in channel {self.channel_id!r}")

    @property
    def bound_device_id(self) -> str:
        return self.device_id or self.channel_id

    def field_names(self) -> list[str]:
        return [fd.name for fd in self.field_defs]


@dataclass(frozen=True)
class FeedEntry:
    entry_id: int
    ts: datetime
    device_id: str
    values: dict
    salubrity: SalubrityScore | None = None
    ppm: float | None = None
    flags: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "ts": format_iso_utc(self.ts),
            "device_id": self.device_id,
            "values": self.values,
            "salubrity": self.salubrity.to_json_dict() if self.salubrity else None,
            "ppm": self.ppm,
            "flags": list(self.flags),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FeedEntry":
        score = obj.get("salubrity")
        return cls(
            entry_id=int(obj["entry_id"]),
            ts=parse_iso_utc(obj["ts"]),
            device_id=obj["device_id"],
            values=dict(obj["values"]),
            salubrity=SalubrityScore.from_json_dict(score) if score else None,
            ppm=obj.get("ppm"),
            flags=tuple(obj.get("flags", [])),
        )


@dataclass(frozen=True)
class AggregateRow:
    """One UTC-hour bucket of a feed."""

    bucket_ts: datetime
    values: dict
    ppm: float | None
    salubrity: float | None
    count: int


@dataclass
class _ChannelState:
    channel: Channel
    entries: list = field(default_factory=list)
    seen: set = field(default_factory=set)  # (device_id, ts iso) dedup keys
    next_entry_id: int = 1
    events: list = field(default_factory=list)
    duplicates_dropped: int = 0
    lock: threading.RLock = field(default_factory=threading.RLock)


class ChannelStore:
    def __init__(self, data_dir: str | Path, channels: list[Channel] | None = None):
        self._data_dir = Path(data_dir)
        self._data_dir.mkdir(parents=True, exist_ok=True)
        self._map_lock = threading.Lock()
        self._channels: dict[str, _ChannelState] = {}
        for channel in channels or []:
            self.add_channel(channel)

    @property
    def data_dir(self) -> Path:
        return self._data_dir

    # -- channel management

    def add_channel(self, channel: Channel) -> None:
        with self._map_lock:
            if channel.channel_id in self._channels:
                raise InvalidParameterError(f"duplicate channel_id {channel.channel_id!r}")
            state = _ChannelState(channel=channel)
            self._channels[channel.channel_id] = state
        self._replay_logs(state)

    def channels(self) -> list[Channel]:
        with self._map_lock:
            return [state.channel for state in self._channels.values()]

    def get_channel(self, channel_id: str) -> Channel:
        return self._state(channel_id).channel

    def _state(self, channel_id: str) -> _ChannelState:
        with self._map_lock:
            state = self._channels.get(channel_id)
        if state is None:
            raise UnknownChannelError(channel_id)
        return state

    def channel_lock(self, channel_id: str) -> threading.RLock:
        """Reentrant per-channel lock; ingestion holds it across append +
        alert evaluation so each channel has one logical writer."""
        return self._state(channel_id).lock

    # -- persistence

    def _feed_path(self, channel_id: str) -> Path:
        return self._data_dir / f"{channel_id}.jsonl"

    def _events_path(self, channel_id: str) -> Path:
        return self._data_dir / f"{channel_id}.events.jsonl"

    def _replay_logs(self, state: _ChannelState) -> None:
        feed_path = self._feed_path(state.channel.channel_id)
        if feed_path.exists():
            with open(feed_path, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    entry = FeedEntry.from_json_dict(json.loads(line))
                    state.entries.append(entry)
                    state.seen.add((entry.device_id, format_iso_utc(entry.ts)))
                    state.next_entry_id = max(state.next_entry_id, entry.entry_id + 1)
            self._apply_retention(state)
        events_path = self._events_path(state.channel.channel_id)
        if events_path.exists():
            with open(events_path, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if line:
                        state.events.append(AlertEvent.from_json_dict(json.loads(line)))

    def _apply_retention(self, state: _ChannelState) -> None:
        retention = state.channel.retention
        if retention.max_entries is not None and len(state.entries) > retention.max_entries:
            state.entries = state.entries[-retention.max_entries:]
        if retention.max_age_s is not None and state.entries:
            # age is measured against the newest stored timestamp, which keeps
            # replayed simulations (simulated clocks) deterministic
            newest = max(e.ts for e in state.entries)
            cutoff = newest - timedelta(seconds=retention.max_age_s)
            state.entries = [e for e in state.entries if e.ts >= cutoff]

    # -- writes

    def is_duplicate(self, channel_id: str, device_id: str, ts: datetime) -> bool:
        state = self._state(channel_id)
        with state.lock:
            return (device_id, format_iso_utc(ts)) in state.seen

    def append(
        self,
        channel_id: str,
        ts: datetime,
        device_id: str,
        values: dict,
        salubrity: SalubrityScore | None = None,
        ppm: float | None = None,
        flags: tuple[str, ...] = (),
    ) -> FeedEntry | None:
        """Store one entry; returns None when (device_id, ts) was already seen."""
        state = self._state(channel_id)
        key_ts = format_iso_utc(ts)
        with state.lock:
            if (device_id, key_ts) in state.seen:
                state.duplicates_dropped += 1
                return None
            entry = FeedEntry(
                entry_id=state.next_entry_id,
                ts=ts,
                device_id=device_id,
                values=dict(values),
                salubrity=salubrity,
                ppm=ppm,
                flags=tuple(flags),
            )
            state.next_entry_id += 1
            state.seen.add((device_id, key_ts))
            state.entries.append(entry)
            with open(self._feed_path(channel_id), "a", encoding="utf-8") as f:
                f.write(json.dumps(entry.to_json_dict()) + "\n")
            self._apply_retention(state)
            return entry

    def append_event(self, channel_id: str, event: AlertEvent) -> None:
        state = self._state(channel_id)
        with state.lock:
            state.events.append(event)
            with open(self._events_path(channel_id), "a", encoding="utf-8") as f:
                f.write(json.dumps(event.to_json_dict()) + "\n")

    # -- reads

    def entries(self, channel_id: str) -> list[FeedEntry]:
        state = self._state(channel_id)
        with state.lock:
            return list(state.entries)

    def latest(self, channel_id: str) -> FeedEntry | None:
        state = self._state(channel_id)
        with state.lock:
            return state.entries[-1] if state.entries else None

    def duplicates_dropped(self, channel_id: str) -> int:
        return self._state(channel_id).duplicates_dropped

    def events(self, channel_id: str, start: datetime | None = None, end: datetime | None = None) -> list[AlertEvent]:
        state = self._state(channel_id)
        with state.lock:
            events = list(state.events)
        if start is not None:
            events = [e for e in events if e.ts >= start]
        if end is not None:
            events = [e for e in events if e.ts < end]
        return events

    def query_feed(
        self,
        channel_id: str,
        start: datetime | None = None,
        end: datetime | None = None,
        max_results: int | None = None,
        aggregation: Aggregation = Aggregation.NONE,
    ):
        """Rows in [start, end) ascending by ts; returns (rows, truncated).

        NONE yields FeedEntry rows; the hourly modes yield AggregateRow
        buckets keyed by UTC hour, empty buckets omitted.
        """
        if start is not None and end is not None and start > end:
            raise InvalidParameterError(f"inverted range: {start} > {end}")
        if max_results is not None and max_results < 1:
            raise InvalidParameterError(f"max_results must be >= 1, got {max_results}")
        snapshot = self.entries(channel_id)
        selected = sorted(
            (
                e for e in snapshot
                if (start is None or e.ts >= start) and (end is None or e.ts < end)
            ),
            key=lambda e: (e.ts, e.entry_id),
        )
        if aggregation is Aggregation.NONE:
            rows = selected
        else:
            rows = _aggregate_hourly(selected, aggregation, self.get_channel(channel_id).field_names())
        truncated = max_results is not None and len(rows) > max_results
        if truncated:
            rows = rows[:max_results]
        return rows, truncated


def _aggregate_hourly(entries: list[FeedEntry], aggregation: Aggregation, field_names: list[str]) -> list[AggregateRow]:
    reducer = {
        Aggregation.HOURLY_MEAN: lambda xs: sum(xs) / len(xs),
        Aggregation.HOURLY_MIN: min,
        Aggregation.HOURLY_MAX: max,
    }[aggregation]

    buckets: dict[datetime, list[FeedEntry]] = {}
    for entry in entries:
        bucket = entry.ts.astimezone(timezone.utc).replace(minute=0, second=0, microsecond=0)
        buckets.setdefault(bucket, []).append(entry)

    rows = []
    for bucket_ts in sorted(buckets):
        members = buckets[bucket_ts]
        values = {}
        for name in field_names:
            present = [e.values[name] for e in members if name in e.values and e.values[name] is not None]
            if present:
                values[name] = reducer(present)
        ppms = [e.ppm for e in members if e.ppm is not None]
        scores = [e.salubrity.value for e in members if e.salubrity is not None]
        rows.append(
            AggregateRow(
                bucket_ts=bucket_ts,
                values=values,
                ppm=reducer(ppms) if ppms else None,
                salubrity=reducer(scores) if scores else None,
                count=len(members),
            )
        )
    return rows
