"""REST surface over the store, the salubrity engine and the alert config.

Handlers are stateless; reads take consistent-prefix snapshots from the
store and the alert-config PUT shares the channel's ingest lock. Errors
always render as {"code", "message"} plus an optional "field". Timestamps
are ISO-8601 UTC on the wire, both directions.
"""

from __future__ import annotations

from datetime import datetime
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .alerts import AlertRule
from .config import AppConfig
from .errors import InvalidParameterError, UnknownChannelError, WorkshopAirError
from .ingest import Ingestor
from .reports import build_report, report_to_csv
from .salubrity import surface_grid
from .store import Aggregation, AggregateRow, Channel, FeedEntry
from .timeutil import format_iso_utc, parse_iso_utc


class ApiError(WorkshopAirError):
    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.field = field

    def body(self) -> dict:
        body = {"code": self.code, "message": str(self)}
        if self.field:
            body["field"] = self.field
        return body


def _parse_ts(raw: str | None, field: str) -> datetime | None:
    if raw is None or raw == "":
        return None
    try:
        return parse_iso_utc(raw)
    except ValueError:
        raise ApiError(400, "invalid_parameter", f"{field} is not an ISO-8601 timestamp: {raw!r}", field=field)


def _parse_aggregation(raw: str | None) -> Aggregation:
    if raw is None or raw == "":
        return Aggregation.NONE
    try:
        return Aggregation(raw.lower())
    except ValueError:
        valid = ", ".join(a.value for a in Aggregation)
        raise ApiError(400, "invalid_parameter", f"agg must be one of {valid}", field="agg")


def _channel_meta(channel: Channel, entry_count: int, last_ts: datetime | None) -> dict:
    return {
        "channel_id": channel.channel_id,
        "name": channel.name,
        "device_id": channel.bound_device_id,
        "fields": {
            f"field{i + 1}": {"name": fd.name, "unit": fd.unit}
            for i, fd in enumerate(channel.field_defs)
        },
        "entry_count": entry_count,
        "last_entry_at": format_iso_utc(last_ts) if last_ts else None,
    }


def _feed_row(channel: Channel, entry: FeedEntry) -> dict:
    row = {"entry_id": entry.entry_id, "created_at": format_iso_utc(entry.ts)}
    for i, fd in enumerate(channel.field_defs):
        row[f"field{i + 1}"] = entry.values.get(fd.name)
    row["ppm"] = entry.ppm
    row["salubrity"] = entry.salubrity.value if entry.salubrity else None
    row["flags"] = list(entry.flags)
    return row


def _aggregate_feed_row(channel: Channel, row: AggregateRow) -> dict:
    out = {"created_at": format_iso_utc(row.bucket_ts)}
    for i, fd in enumerate(channel.field_defs):
        out[f"field{i + 1}"] = row.values.get(fd.name)
    out["ppm"] = row.ppm
    out["salubrity"] = row.salubrity
    out["count"] = row.count
    return out


def create_app(ingestor: Ingestor, config: AppConfig) -> FastAPI:
    app = FastAPI(title="workshopair", version="0.1.0", docs_url=None, redoc_url=None)
    store = ingestor.store

    @app.exception_handler(ApiError)
    async def on_api_error(_: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(UnknownChannelError)
    async def on_unknown_channel(_: Request, exc: UnknownChannelError):
        return JSONResponse(status_code=404, content={"code": "unknown_channel", "message": f"no such channel: {exc.args[0]}"})

    @app.exception_handler(InvalidParameterError)
    async def on_invalid_parameter(_: Request, exc: InvalidParameterError):
        return JSONResponse(status_code=400, content={"code": "invalid_parameter", "message": str(exc)})

    # ---- channels and feeds

    @app.get("/channels")
    def list_channels():
        out = []
        for channel in store.channels():
            latest = store.latest(channel.channel_id)
            out.append(_channel_meta(channel, len(store.entries(channel.channel_id)), latest.ts if latest else None))
        return {"channels": out}

    @app.get("/channels/{channel_id}/feed")
    def get_feed(
        channel_id: str,
        start: str | None = None,
        end: str | None = None,
        agg: str | None = None,
        limit: int | None = None,
    ):
        channel = store.get_channel(channel_id)
        start_ts = _parse_ts(start, "start")
        end_ts = _parse_ts(end, "end")
        if start_ts is not None and end_ts is not None and start_ts > end_ts:
            raise ApiError(400, "invalid_parameter", "start must be <= end", field="start")
        if limit is not None and limit < 1:
            raise ApiError(400, "invalid_parameter", "limit must be >= 1", field="limit")
        aggregation = _parse_aggregation(agg)
        rows, truncated = store.query_feed(channel_id, start_ts, end_ts, limit, aggregation)
        if aggregation is Aggregation.NONE:
            feed = [_feed_row(channel, e) for e in rows]
        else:
            feed = [_aggregate_feed_row(channel, r) for r in rows]
        latest = store.latest(channel_id)
        return {
            "channel": _channel_meta(channel, len(store.entries(channel_id)), latest.ts if latest else None),
            "feed": feed,
            "truncated": truncated,
        }

    # ---- salubrity

    @app.get("/channels/{channel_id}/salubrity/latest")
    def latest_salubrity(channel_id: str):
        store.get_channel(channel_id)
        entry = store.latest(channel_id)
        if entry is None or entry.salubrity is None:
            raise ApiError(404, "no_data", f"channel {channel_id!r} has no scored entries yet")
        return {
            "channel_id": channel_id,
            "entry_id": entry.entry_id,
            "ts": format_iso_utc(entry.ts),
            "value": entry.salubrity.value,
            "temp_factor": entry.salubrity.temp_factor,
            "hum_factor": entry.salubrity.hum_factor,
        }

    @app.get("/salubrity/surface")
    def salubrity_surface(
        steps: int = 25,
        t_min: float = 0.0,
        t_max: float = 50.0,
        h_min: float = 20.0,
        h_max: float = 90.0,
    ):
        grid = surface_grid(config.salubrity, t_min, t_max, h_min, h_max, steps)
        return grid.to_json_dict()

    # ---- alerts

    @app.get("/channels/{channel_id}/alerts/config")
    def get_alert_config(channel_id: str):
        rules = ingestor.rules(channel_id)
        return {
            "channel_id": channel_id,
            "rules": [r.to_json_dict() for r in rules],
            "states": {
                r.rule_id: ingestor.alert_state(channel_id, r.rule_id).status.value
                for r in rules
            },
        }

    @app.put("/channels/{channel_id}/alerts/config")
    async def put_alert_config(channel_id: str, request: Request):
        store.get_channel(channel_id)
        body = await request.json()
        raw_rules = body.get("rules") if isinstance(body, dict) else body
        if not isinstance(raw_rules, list):
            raise ApiError(400, "invalid_parameter", "body must be a rule list or {'rules': [...]}", field="rules")
        try:
            rules = [AlertRule.from_json_dict(r) for r in raw_rules]
            if rules and config.salubrity.scale:
                for rule in rules:
                    if rule.kind.value == "SALUBRITY_BELOW" and not 0 < rule.threshold < config.salubrity.scale:
                        raise InvalidParameterError(
                            f"SALUBRITY_BELOW threshold must lie in (0, {config.salubrity.scale})"
                        )
        except InvalidParameterError as exc:
            raise ApiError(400, "invalid_rule", str(exc), field="rules")
        events = ingestor.replace_rules(channel_id, rules)
        return {
            "channel_id": channel_id,
            "rules": [r.to_json_dict() for r in rules],
            "reset_events": [e.to_json_dict() for e in events],
        }

    @app.get("/channels/{channel_id}/alerts/events")
    def get_alert_events(channel_id: str, start: str | None = None, end: str | None = None):
        store.get_channel(channel_id)
        events = store.events(channel_id, _parse_ts(start, "start"), _parse_ts(end, "end"))
        return {"channel_id": channel_id, "events": [e.to_json_dict() for e in events]}

    # ---- reports

    @app.post("/reports")
    async def post_report(request: Request):
        body = await request.json()
        if not isinstance(body, dict):
            raise ApiError(400, "invalid_parameter", "report request must be a JSON object")
        channel_id = body.get("channel_id")
        if not channel_id:
            raise ApiError(400, "invalid_parameter", "channel_id is required", field="channel_id")
        start = _parse_ts(body.get("start_ts"), "start_ts")
        end = _parse_ts(body.get("end_ts"), "end_ts")
        if start is not None and end is not None and start > end:
            raise ApiError(400, "invalid_parameter", "start_ts must be <= end_ts", field="start_ts")
        aggregation = _parse_aggregation(body.get("aggregation"))
        fmt = str(body.get("format", "JSON")).upper()
        if fmt not in ("JSON", "CSV"):
            raise ApiError(400, "invalid_parameter", "format must be JSON or CSV", field="format")

        columns, rows, _ = build_report(store, channel_id, start, end, aggregation)
        if fmt == "CSV":
            csv_text = report_to_csv(columns, rows)
            return Response(
                content=csv_text,
                media_type="text/csv",
                headers={"Content-Disposition": f'attachment; filename="{channel_id}-report.csv"'},
            )
        return {
            "channel_id": channel_id,
            "aggregation": aggregation.value,
            "columns": columns,
            "rows": rows,
        }

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
