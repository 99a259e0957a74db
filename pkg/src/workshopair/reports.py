"""Historical report rows shared by the REST endpoint and the CLI export.

Column order is fixed: ts, then the channel's fields in definition order,
then ppm and salubrity. The CSV form is RFC-4180 (CRLF, minimal quoting,
mandatory header); JSON reports carry exactly the same values keyed by the
same column names.
"""

from __future__ import annotations

import csv
import io
from datetime import datetime

from .store import Aggregation, AggregateRow, ChannelStore, FeedEntry
from .timeutil import format_iso_utc


def report_columns(store: ChannelStore, channel_id: str) -> list[str]:
    return ["ts"] + store.get_channel(channel_id).field_names() + ["ppm", "salubrity"]


def build_report(
    store: ChannelStore,
    channel_id: str,
    start: datetime | None,
    end: datetime | None,
    aggregation: Aggregation = Aggregation.NONE,
    max_results: int | None = None,
) -> tuple[list[str], list[dict], bool]:
    """Returns (columns, rows, truncated); rows are dicts keyed by column."""
    columns = report_columns(store, channel_id)
    field_names = store.get_channel(channel_id).field_names()
    raw_rows, truncated = store.query_feed(
        channel_id, start=start, end=end, max_results=max_results, aggregation=aggregation
    )
    rows = []
    for raw in raw_rows:
        if isinstance(raw, FeedEntry):
            row = {"ts": format_iso_utc(raw.ts)}
            for name in field_names:
                row[name] = raw.values.get(name)
            row["ppm"] = raw.ppm
            row["salubrity"] = raw.salubrity.value if raw.salubrity else None
        else:
            assert isinstance(raw, AggregateRow)
            row = {"ts": format_iso_utc(raw.bucket_ts)}
            for name in field_names:
                row[name] = raw.values.get(name)
            row["ppm"] = raw.ppm
            row["salubrity"] = raw.salubrity
        rows.append(row)
    return columns, rows, truncated


def report_to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # csv defaults already match RFC 4180 (CRLF, minimal quoting)
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row[c] is None else row[c] for c in columns])
    return buf.getvalue()
