"""UTC timestamp helpers: everything on the wire is ISO-8601 with a Z suffix."""

from __future__ import annotations

from datetime import datetime, timezone


def parse_iso_utc(text: str) -> datetime:
    """ISO-8601 with either 'Z' or an explicit offset; naive means UTC."""
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_iso_utc(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.isoformat().replace("+00:00", "Z")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def utc_now() -> datetime:
    return datetime.now(timezone.utc)
