"""Service configuration: one JSON file, a few env-var overrides.

Env overrides (all optional): WORKSHOPAIR_BROKER_URI, WORKSHOPAIR_BIND_HOST,
WORKSHOPAIR_BIND_PORT, WORKSHOPAIR_DATA_DIR. Flags given to the CLI win over
both.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .alerts import AlertKind, AlertRule
from .errors import ConfigError, InvalidParameterError
from .salubrity import SalubrityConfig
from .sensors import Dht11Spec, Mq135Spec
from .store import Channel, FieldDef, Retention

DEFAULT_FIELDS = (
    FieldDef("temperature_c", "degC"),
    FieldDef("humidity_pct", "%RH"),
    FieldDef("mq135_adc", "count"),
)

# paper-free placeholders: tune per deployment
DEFAULT_RULES = [
    AlertRule("salubrity-low", AlertKind.SALUBRITY_BELOW, threshold=50.0, hysteresis=5.0, min_consecutive=1),
    AlertRule("gas-high", AlertKind.GAS_PPM_ABOVE, threshold=300.0, hysteresis=25.0, min_consecutive=1),
]


@dataclass
class AppConfig:
    bind_host: str = "127.0.0.1"
    bind_port: int = 8000
    data_dir: str = "./data"
    broker_uri: str = "mqtt://127.0.0.1:1883"
    embedded_broker: bool = False
    mqtt_client_id: str = "workshopair-ingest"
    mqtt_username: str | None = None
    mqtt_password: str | None = None
    static_dir: str | None = None
    salubrity: SalubrityConfig = dc_field(default_factory=SalubrityConfig)
    mq135: Mq135Spec = dc_field(default_factory=Mq135Spec)
    dht11: Dht11Spec = dc_field(default_factory=Dht11Spec)
    channels: list[Channel] = dc_field(default_factory=list)
    alert_rules: dict[str, list[AlertRule]] = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.channels:
            self.channels = [default_channel()]
        if not self.alert_rules:
            self.alert_rules = {ch.channel_id: list(DEFAULT_RULES) for ch in self.channels}


def default_channel() -> Channel:
    return Channel(
        channel_id="workshop-1",
        name="Workshop bay 1",
        field_defs=DEFAULT_FIELDS,
        device_id="sim-01",
    )


def _parse_channel(obj: dict) -> Channel:
    fields = tuple(FieldDef(fd["name"], fd.get("unit", "")) for fd in obj.get("fields", []))
    retention_obj = obj.get("retention", {})
    retention = Retention(
        max_entries=retention_obj.get("max_entries"),
        max_age_s=retention_obj.get("max_age_s"),
    )
    return Channel(
        channel_id=obj["channel_id"],
        name=obj.get("name", obj["channel_id"]),
        field_defs=fields or DEFAULT_FIELDS,
        retention=retention,
        device_id=obj.get("device_id"),
    )


def load_config(path: str | Path | None) -> AppConfig:
    """Read the config file (all keys optional) and apply env overrides."""
    obj: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as f:
                obj = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise ConfigError(f"config {path} must hold a JSON object")

    try:
        cfg = AppConfig(
            bind_host=obj.get("bind_host", "127.0.0.1"),
            bind_port=int(obj.get("bind_port", 8000)),
            data_dir=obj.get("data_dir", "./data"),
            broker_uri=obj.get("broker_uri", "mqtt://127.0.0.1:1883"),
            embedded_broker=bool(obj.get("embedded_broker", False)),
            mqtt_client_id=obj.get("mqtt_client_id", "workshopair-ingest"),
            mqtt_username=obj.get("mqtt_username"),
            mqtt_password=obj.get("mqtt_password"),
            static_dir=obj.get("static_dir"),
            salubrity=SalubrityConfig.from_json_dict(obj.get("salubrity", {})),
            mq135=Mq135Spec.from_json_dict(obj.get("mq135", {})),
            dht11=Dht11Spec.from_json_dict(obj.get("dht11", {})),
            channels=[_parse_channel(ch) for ch in obj.get("channels", [])],
            alert_rules={
                channel_id: [AlertRule.from_json_dict(r) for r in rules]
                for channel_id, rules in obj.get("alert_rules", {}).items()
            },
        )
    except (KeyError, TypeError, ValueError, InvalidParameterError) as exc:
        raise ConfigError(f"invalid config field: {exc}") from exc

    cfg.broker_uri = os.environ.get("WORKSHOPAIR_BROKER_URI", cfg.broker_uri)
    cfg.bind_host = os.environ.get("WORKSHOPAIR_BIND_HOST", cfg.bind_host)
    cfg.data_dir = os.environ.get("WORKSHOPAIR_DATA_DIR", cfg.data_dir)
    port_override = os.environ.get("WORKSHOPAIR_BIND_PORT")
    if port_override is not None:
        try:
            cfg.bind_port = int(port_override)
        except ValueError as exc:
            raise ConfigError(f"WORKSHOPAIR_BIND_PORT must be an integer, got {port_override!r}") from exc

    unknown_rules = set(cfg.alert_rules) - {ch.channel_id for ch in cfg.channels}
    if unknown_rules:
        raise ConfigError(f"alert_rules reference unknown channels: {sorted(unknown_rules)}")
    for channel_id, rules in cfg.alert_rules.items():
        for rule in rules:
            if rule.kind is AlertKind.SALUBRITY_BELOW and not rule.threshold < cfg.salubrity.scale:
                raise ConfigError(
                    f"rule {rule.rule_id!r} on {channel_id!r}: SALUBRITY_BELOW threshold "
                    f"{rule.threshold} must lie below the index scale {cfg.salubrity.scale}"
                )
    return cfg
