import hashlib
import json
import math

import pytest
from fastapi.testclient import TestClient

from workshopair.api import create_app
from workshopair.config import AppConfig
from workshopair.ingest import Ingestor
from workshopair.store import ChannelStore

GOOD = '{"ts":"%s","device_id":"sim-01","temperature_c":%d,"humidity_pct":%d,"mq135_adc":%d,"flags":[]}'


@pytest.fixture()
def stack(tmp_path):
    cfg = AppConfig(data_dir=str(tmp_path / "data"))
    (tmp_path / "data").mkdir()
    store = ChannelStore(cfg.data_dir, cfg.channels)
    ingestor = Ingestor(store, cfg.salubrity, cfg.mq135, cfg.alert_rules)
    client = TestClient(create_app(ingestor, cfg), raise_server_exceptions=False)
    return cfg, ingestor, client


def feed(ingestor, ts, temp=22, hum=41, adc=512):
    raw = (GOOD % (ts, temp, hum, adc)).encode()
    return ingestor.handle_message("workshop/sim-01/reading", raw)


def store_digest(store, data_dir):
    h = hashlib.sha256()
    for channel in sorted(store.channels(), key=lambda c: c.channel_id):
        for entry in store.entries(channel.channel_id):
            h.update(json.dumps(entry.to_json_dict(), sort_keys=True).encode())
        for event in store.events(channel.channel_id):
            h.update(json.dumps(event.to_json_dict(), sort_keys=True).encode())
    for path in sorted(data_dir.glob("*.jsonl")):
        h.update(path.read_bytes())
    return h.hexdigest()


class TestChannels:
    def test_list_channels(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z")
        body = client.get("/channels").json()
        assert len(body["channels"]) == 1
        meta = body["channels"][0]
        assert meta["channel_id"] == "workshop-1"
        assert meta["fields"]["field1"] == {"name": "temperature_c", "unit": "degC"}
        assert meta["entry_count"] == 1
        assert meta["last_entry_at"] == "2024-01-01T00:00:00Z"

    def test_unknown_channel_is_machine_readable_404(self, stack):
        _, _, client = stack
        response = client.get("/channels/nope/feed")
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "unknown_channel"
        assert "nope" in body["message"]


class TestFeed:
    def test_empty_range_returns_empty_feed(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z")
        response = client.get("/channels/workshop-1/feed",
                              params={"start": "2030-01-01T00:00:00Z", "end": "2030-01-02T00:00:00Z"})
        assert response.status_code == 200
        assert response.json()["feed"] == []

    def test_thingspeak_like_rows(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z")
        row = client.get("/channels/workshop-1/feed").json()["feed"][0]
        assert row["entry_id"] == 1
        assert row["created_at"] == "2024-01-01T00:00:00Z"
        assert row["field1"] == 22
        assert row["field2"] == 41
        assert row["field3"] == 512
        assert row["ppm"] == pytest.approx(110.58218054180654)

    def test_limit_and_truncated_marker(self, stack):
        _, ingestor, client = stack
        for i in range(5):
            feed(ingestor, f"2024-01-01T00:00:{10 * i:02d}Z")
        body = client.get("/channels/workshop-1/feed", params={"limit": 2}).json()
        assert len(body["feed"]) == 2
        assert body["truncated"] is True
        assert [r["entry_id"] for r in body["feed"]] == [1, 2]

    def test_invalid_range_is_400(self, stack):
        _, _, client = stack
        response = client.get("/channels/workshop-1/feed",
                              params={"start": "2024-01-02T00:00:00Z", "end": "2024-01-01T00:00:00Z"})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_parameter"

    def test_bad_timestamp_names_field(self, stack):
        _, _, client = stack
        response = client.get("/channels/workshop-1/feed", params={"start": "noon-ish"})
        assert response.status_code == 400
        assert response.json()["field"] == "start"

    def test_hourly_aggregation(self, stack):
        _, ingestor, client = stack
        for minute, temp in [(0, 10), (10, 20), (20, 30)]:
            feed(ingestor, f"2024-01-01T00:{minute:02d}:00Z", temp=temp)
        body = client.get("/channels/workshop-1/feed", params={"agg": "hourly_mean"}).json()
        assert len(body["feed"]) == 1
        assert body["feed"][0]["field1"] == pytest.approx(20.0)
        assert body["feed"][0]["count"] == 3


class TestSalubrity:
    def test_latest_after_peak_reading(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z", temp=21, hum=40)
        body = client.get("/channels/workshop-1/salubrity/latest").json()
        assert body["value"] == 100.0
        assert body["temp_factor"] == 1.0

    def test_latest_404_when_empty(self, stack):
        _, _, client = stack
        response = client.get("/channels/workshop-1/salubrity/latest")
        assert response.status_code == 404
        assert response.json()["code"] == "no_data"

    def test_surface_corners(self, stack):
        _, _, client = stack
        body = client.get("/salubrity/surface",
                          params={"steps": 2, "t_min": 17, "t_max": 25, "h_min": 28, "h_max": 52}).json()
        expected = 100 * math.exp(-1)
        for row in body["values"]:
            for value in row:
                assert value == pytest.approx(expected, abs=1e-9)

    def test_surface_steps_one_is_400(self, stack):
        _, _, client = stack
        response = client.get("/salubrity/surface", params={"steps": 1})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_parameter"


class TestAlertConfig:
    def test_get_default_rules(self, stack):
        _, _, client = stack
        body = client.get("/channels/workshop-1/alerts/config").json()
        assert {r["rule_id"] for r in body["rules"]} == {"salubrity-low", "gas-high"}
        assert body["states"]["salubrity-low"] == "IDLE"

    def test_put_then_replay_hand_traced_sequence(self, stack):
        _, ingestor, client = stack
        response = client.put("/channels/workshop-1/alerts/config", json={"rules": [
            {"rule_id": "sal", "kind": "SALUBRITY_BELOW", "threshold": 50, "hysteresis": 5, "min_consecutive": 1},
        ]})
        assert response.status_code == 200

        # integer readings whose scores land band-for-band on the hand trace
        # 60 -> 48 -> 52 -> 56: 60.65, 48.57 (raise), 51.17 (inside the
        # hysteresis band), 57.37 (>= 55, clear)
        feed(ingestor, "2024-01-01T00:00:00Z", temp=25, hum=40)
        feed(ingestor, "2024-01-01T00:00:10Z", temp=25, hum=48)
        feed(ingestor, "2024-01-01T00:00:20Z", temp=25, hum=47)
        feed(ingestor, "2024-01-01T00:00:30Z", temp=25, hum=44)

        events = client.get("/channels/workshop-1/alerts/events").json()["events"]
        assert [e["kind"] for e in events] == ["RAISE", "CLEAR"]
        assert events[0]["rule_id"] == "sal"
        assert events[0]["ts"] == "2024-01-01T00:00:10Z"
        assert events[1]["ts"] == "2024-01-01T00:00:30Z"

    def test_put_negative_hysteresis_is_400(self, stack):
        _, _, client = stack
        response = client.put("/channels/workshop-1/alerts/config", json={"rules": [
            {"rule_id": "bad", "kind": "SALUBRITY_BELOW", "threshold": 50, "hysteresis": -1},
        ]})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_rule"

    def test_put_duplicate_rule_ids_is_400(self, stack):
        _, _, client = stack
        rule = {"rule_id": "dup", "kind": "GAS_PPM_ABOVE", "threshold": 300, "hysteresis": 5}
        response = client.put("/channels/workshop-1/alerts/config", json={"rules": [rule, rule]})
        assert response.status_code == 400

    def test_put_threshold_beyond_scale_is_400(self, stack):
        _, _, client = stack
        response = client.put("/channels/workshop-1/alerts/config", json={"rules": [
            {"rule_id": "high", "kind": "SALUBRITY_BELOW", "threshold": 150, "hysteresis": 5},
        ]})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_rule"

    def test_put_resets_changed_rule_with_event(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z", temp=29, hum=52)  # raises salubrity-low
        state = client.get("/channels/workshop-1/alerts/config").json()["states"]
        assert state["salubrity-low"] == "RAISED"
        client.put("/channels/workshop-1/alerts/config", json={"rules": [
            {"rule_id": "salubrity-low", "kind": "SALUBRITY_BELOW", "threshold": 40, "hysteresis": 5},
        ]})
        state = client.get("/channels/workshop-1/alerts/config").json()["states"]
        assert state["salubrity-low"] == "IDLE"
        kinds = [e["kind"] for e in client.get("/channels/workshop-1/alerts/events").json()["events"]]
        assert kinds[-1] == "CONFIG_RESET"

    def test_events_empty_on_fresh_channel(self, stack):
        _, _, client = stack
        assert client.get("/channels/workshop-1/alerts/events").json()["events"] == []

    def test_events_filtered_by_range(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z", temp=29, hum=52)  # raise at 00:00:00
        feed(ingestor, "2024-01-01T01:00:00Z", temp=21, hum=40)  # clear at 01:00:00
        body = client.get("/channels/workshop-1/alerts/events",
                          params={"start": "2024-01-01T00:30:00Z"}).json()
        assert [e["kind"] for e in body["events"]] == ["CLEAR"]
        body = client.get("/channels/workshop-1/alerts/events",
                          params={"end": "2024-01-01T00:30:00Z"}).json()
        assert [e["kind"] for e in body["events"]] == ["RAISE"]


class TestReports:
    def test_hourly_mean_csv_single_row(self, stack):
        _, ingestor, client = stack
        for minute, temp in [(0, 10), (10, 20), (20, 30)]:
            feed(ingestor, f"2024-01-01T00:{minute:02d}:00Z", temp=temp)
        response = client.post("/reports", json={
            "channel_id": "workshop-1", "aggregation": "hourly_mean", "format": "CSV",
        })
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/csv")
        lines = response.text.splitlines()
        assert lines[0] == "ts,temperature_c,humidity_pct,mq135_adc,ppm,salubrity"
        assert len(lines) == 2
        assert lines[1].split(",")[1] == "20.0"

    def test_json_and_csv_carry_identical_values(self, stack):
        _, ingestor, client = stack
        feed(ingestor, "2024-01-01T00:00:00Z")
        request = {"channel_id": "workshop-1", "format": "JSON"}
        json_body = client.post("/reports", json=request).json()
        request["format"] = "CSV"
        csv_lines = client.post("/reports", json=request).text.splitlines()
        json_row = json_body["rows"][0]
        csv_row = dict(zip(csv_lines[0].split(","), csv_lines[1].split(",")))
        for column in json_body["columns"]:
            json_value = json_row[column]
            if isinstance(json_value, float):
                assert float(csv_row[column]) == json_value
            else:
                assert str(json_value) == csv_row[column]

    def test_report_errors(self, stack):
        _, _, client = stack
        assert client.post("/reports", json={"channel_id": "nope"}).status_code == 404
        assert client.post("/reports", json={}).status_code == 400
        response = client.post("/reports", json={
            "channel_id": "workshop-1",
            "start_ts": "2024-01-02T00:00:00Z", "end_ts": "2024-01-01T00:00:00Z",
        })
        assert response.status_code == 400


class TestReadOnlyInvariant:
    def test_get_endpoints_do_not_mutate_store(self, stack, tmp_path):
        cfg, ingestor, client = stack
        for i in range(3):
            feed(ingestor, f"2024-01-01T00:00:{10 * i:02d}Z")
        data_dir = ingestor.store.data_dir
        before = store_digest(ingestor.store, data_dir)
        client.get("/channels")
        client.get("/channels/workshop-1/feed")
        client.get("/channels/workshop-1/feed", params={"agg": "hourly_max", "limit": 1})
        client.get("/channels/workshop-1/salubrity/latest")
        client.get("/salubrity/surface", params={"steps": 5})
        client.get("/channels/workshop-1/alerts/config")
        client.get("/channels/workshop-1/alerts/events")
        client.post("/reports", json={"channel_id": "workshop-1", "format": "CSV"})
        assert store_digest(ingestor.store, data_dir) == before
