"""Operator entry point.

Subcommands: serve (MQTT subscriber + HTTP API), simulate (scenario player),
train / plotdata (ML baselines and figure datasets), export (historical CSV).
Exit codes: 0 ok, 2 config/usage, 3 bad or degenerate data, 4 broker or
publish failure, 5 unknown channel/model, 1 anything unexpected. Diagnostics
go to stderr; data goes to stdout or the requested output file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .analytics import (
    RegressionModel,
    SvmModel,
    derive_labels,
    export_model_plot_data,
    fit_decision_tree,
    fit_linear_regression,
    fit_svm,
    load_samples_csv,
    plot_data_to_csv,
    tree_depth,
)
from .analytics.predict import predict
from .analytics.tree import tree_from_json_dict, tree_to_json_dict
from .config import AppConfig, load_config
from .errors import (
    ConfigError,
    DegenerateDataError,
    InsufficientDataError,
    InvalidParameterError,
    PublishError,
    ScenarioAbortedError,
    UnknownChannelError,
)
from .ingest import Ingestor, MqttIngestService
from .mqtt import MqttBroker, MqttClient, parse_broker_uri
from .reports import build_report, report_to_csv
from .simulator import load_scenario, run_scenario
from .store import Aggregation, ChannelStore
from .timeutil import parse_iso_utc

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_BROKER = 4
EXIT_NOT_FOUND = 5


def _err(message: str) -> None:
    print(f"workshopair: {message}", file=sys.stderr)


def _build_runtime(cfg: AppConfig) -> Ingestor:
    Path(cfg.data_dir).mkdir(parents=True, exist_ok=True)
    store = ChannelStore(cfg.data_dir, cfg.channels)
    return Ingestor(store, cfg.salubrity, cfg.mq135, cfg.alert_rules)


# ---------------------------------------------------------------- serve

def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    cfg = load_config(args.config)
    if args.port is not None:
        cfg.bind_port = args.port
    try:
        host, port = parse_broker_uri(cfg.broker_uri)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc

    broker = None
    if cfg.embedded_broker:
        try:
            broker = MqttBroker(host, port).start()
        except OSError as exc:
            _err(f"cannot bind embedded broker on {host}:{port}: {exc}")
            return EXIT_CONFIG

    ingestor = _build_runtime(cfg)
    service = MqttIngestService(
        ingestor,
        cfg.broker_uri,
        client_id=cfg.mqtt_client_id,
        username=cfg.mqtt_username,
        password=cfg.mqtt_password,
    )
    try:
        service.start()
    except (OSError, ConnectionError) as exc:
        if broker is not None:
            broker.stop()
        _err(f"cannot reach MQTT broker at {cfg.broker_uri}: {exc}")
        return EXIT_BROKER

    print(f"workshopair ready: http://{cfg.bind_host}:{cfg.bind_port} "
          f"(broker {cfg.broker_uri}, data {cfg.data_dir})", flush=True)
    app = create_app(ingestor, cfg)
    try:
        uvicorn.run(app, host=cfg.bind_host, port=cfg.bind_port, log_level="warning")
    finally:
        service.stop()
        if broker is not None:
            broker.stop()
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)

    if args.loopback:
        ingestor = _build_runtime(cfg)

        def publisher(topic: str, data: bytes) -> None:
            ingestor.handle_message(topic, data)

        published = run_scenario(scenario, cfg.dht11, cfg.mq135, publisher,
                                 realtime=args.realtime, wall_clock=args.wall_clock)
        print(f"published {published}")
        print(f"stored {ingestor.counters.stored} duplicates {ingestor.counters.duplicates} "
              f"dead_lettered {ingestor.counters.dead_lettered}")
        return EXIT_OK

    broker_uri = args.broker or cfg.broker_uri
    host, port = parse_broker_uri(broker_uri)
    client = MqttClient(host, port, client_id=f"workshopair-sim-{scenario.device_id}")
    try:
        client.connect()
    except (OSError, ConnectionError) as exc:
        _err(f"cannot reach MQTT broker at {broker_uri}: {exc}")
        return EXIT_BROKER
    try:
        published = run_scenario(
            scenario, cfg.dht11, cfg.mq135,
            lambda topic, data: client.publish(topic, data, qos=1),
            realtime=args.realtime, wall_clock=args.wall_clock,
        )
    finally:
        client.disconnect()
    print(f"published {published}")
    return EXIT_OK


# ---------------------------------------------------------------- train / plotdata

def _training_samples(args, cfg: AppConfig, need_labels: bool):
    samples = load_samples_csv(getattr(args, "from"))
    if need_labels and any(s.label is None for s in samples):
        samples = derive_labels(samples, cfg.salubrity, args.threshold)
    return samples


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    kind = args.model
    if kind == "linreg":
        samples = _training_samples(args, cfg, need_labels=False)
        model = fit_linear_regression(samples)
        payload = model.to_json_dict()
        metrics = {"n": len(samples), "slope": model.slope, "intercept": model.intercept,
                   "r_squared": model.r_squared}
    elif kind == "tree":
        samples = _training_samples(args, cfg, need_labels=True)
        model = fit_decision_tree(samples, max_depth=args.max_depth, min_leaf=args.min_leaf)
        payload = tree_to_json_dict(model)
        correct = sum(1 for s in samples if predict(model, s) == s.label)
        metrics = {"n": len(samples), "depth": tree_depth(model),
                   "training_accuracy": correct / len(samples)}
    else:
        samples = _training_samples(args, cfg, need_labels=True)
        model = fit_svm(samples, c=args.c, tol=args.tol, max_iter=args.max_iter)
        payload = model.to_json_dict()
        correct = sum(1 for s in samples if predict(model, s) == s.label)
        metrics = {"n": len(samples), "w": list(model.w), "b": model.b,
                   "converged": model.converged, "iterations": model.iterations,
                   "training_accuracy": correct / len(samples)}

    document = {"schema": 1, "kind": kind, "model": payload, "metrics": metrics}
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    print(json.dumps(metrics))
    return EXIT_OK


def _load_model_file(path: str):
    with open(path, encoding="utf-8") as f:
        document = json.load(f)
    kind = document.get("kind")
    body = document.get("model", {})
    if kind == "linreg":
        return RegressionModel.from_json_dict(body)
    if kind == "tree":
        return tree_from_json_dict(body)
    if kind == "svm":
        return SvmModel.from_json_dict(body)
    raise InvalidParameterError(f"unknown model kind {kind!r} in {path}")


def cmd_plotdata(args) -> int:
    model = _load_model_file(args.model)
    samples = load_samples_csv(getattr(args, "from")) if getattr(args, "from") else []
    bounds = tuple(args.bounds)
    dataset = export_model_plot_data(model, samples, bounds, region_steps=args.steps)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix.lower() == ".csv":
        out.write_text(plot_data_to_csv(dataset), encoding="utf-8")
    else:
        out.write_text(json.dumps(dataset, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- export

def cmd_export(args) -> int:
    cfg = load_config(args.config)
    store = ChannelStore(cfg.data_dir, cfg.channels)
    start = parse_iso_utc(args.start) if args.start else None
    end = parse_iso_utc(args.end) if args.end else None
    aggregation = Aggregation(args.agg)
    columns, rows, _ = build_report(store, args.channel, start, end, aggregation)
    if args.format == "csv":
        text = report_to_csv(columns, rows)
    else:
        text = json.dumps({"channel_id": args.channel, "columns": columns, "rows": rows}, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="workshopair", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the MQTT subscriber and the HTTP API")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--port", type=int, default=None, help="override HTTP port")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("simulate", help="play a scenario file through MQTT or in-process")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--broker", default=None, help="broker URI (default from config)")
    p.add_argument("--loopback", action="store_true", help="skip MQTT and ingest in-process")
    p.add_argument("--realtime", action="store_true", help="sleep one sample period between publishes")
    p.add_argument("--wall-clock", action="store_true",
                   help="stamp payloads with the current time instead of the simulated clock")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="fit a model from an exported CSV")
    p.add_argument("--model", required=True, choices=("linreg", "tree", "svm"))
    p.add_argument("--from", required=True, help="CSV with ts,temperature_c,humidity_pct[,label]")
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--threshold", type=float, default=50.0,
                   help="salubrity threshold used to derive labels when the CSV has none")
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--c", type=float, default=10.0)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("plotdata", help="emit the figure dataset for a trained model")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--out", required=True, help=".json or .csv output path")
    p.add_argument("--from", default=None, help="optional samples CSV for the scatter layer")
    p.add_argument("--bounds", type=float, nargs=4, default=(0.0, 50.0, 20.0, 90.0),
                   metavar=("T_MIN", "T_MAX", "H_MIN", "H_MAX"))
    p.add_argument("--steps", type=int, default=10, help="decision-region grid resolution")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("export", help="export a channel's history like POST /reports")
    p.add_argument("--channel", required=True)
    p.add_argument("--start", default=None)
    p.add_argument("--end", default=None)
    p.add_argument("--agg", default="none", choices=[a.value for a in Aggregation])
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except (InsufficientDataError, DegenerateDataError, InvalidParameterError) as exc:
        _err(str(exc))
        return EXIT_DATA
    except ScenarioAbortedError as exc:
        _err(f"{exc} (published {exc.published})")
        return EXIT_BROKER
    except PublishError as exc:
        _err(str(exc))
        return EXIT_BROKER
    except UnknownChannelError as exc:
        _err(f"unknown channel: {exc.args[0]}")
        return EXIT_NOT_FOUND
    except FileNotFoundError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except ValueError as exc:
        _err(str(exc))
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
