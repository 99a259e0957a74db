"""Full-stack flow over real sockets: scenario -> MQTT broker -> subscriber
-> channel store, exactly as `serve` + `simulate` wire it up."""

import time

from workshopair.config import AppConfig
from workshopair.ingest import Ingestor, MqttIngestService
from workshopair.mqtt import MqttBroker, MqttClient
from workshopair.sensors import Dht11Spec
from workshopair.simulator import Baseline, EventKind, Scenario, ScenarioEvent, run_scenario
from workshopair.store import ChannelStore


def wait_until(predicate, timeout_s=5.0):
    deadline = time.time() + timeout_s
    while time.time() < deadline:
        if predicate():
            return True
        time.sleep(0.01)
    return predicate()


def test_scenario_flows_through_broker_into_store(tmp_path):
    cfg = AppConfig(data_dir=str(tmp_path))
    store = ChannelStore(cfg.data_dir, cfg.channels)
    ingestor = Ingestor(store, cfg.salubrity, cfg.mq135, cfg.alert_rules)

    with MqttBroker() as broker:
        service = MqttIngestService(ingestor, broker.uri)
        service.start()

        publisher_client = MqttClient(broker.host, broker.port, "sim-pub")
        publisher_client.connect()
        scenario = Scenario(
            duration_s=120,
            sample_period_s=10,
            baseline=Baseline(21, 40, 110),
            events=(ScenarioEvent(40, 80, EventKind.GAS_SPIKE, 400),),
            seed=3,
        )
        published = run_scenario(
            scenario,
            Dht11Spec(t_noise_sd=0, h_noise_sd=0),
            cfg.mq135,
            lambda topic, data: publisher_client.publish(topic, data, qos=1),
        )
        assert published == 12

        assert wait_until(lambda: ingestor.counters.stored == 12)
        publisher_client.disconnect()
        service.stop()

    entries = store.entries("workshop-1")
    assert [e.entry_id for e in entries] == list(range(1, 13))
    assert entries[0].values["temperature_c"] == 21
    assert ingestor.counters.dead_lettered == 0

    # the spike window [40, 80) covers samples at t=40..70
    in_window = [e for e in entries if 653 == e.values["mq135_adc"]]
    assert len(in_window) == 4

    gas_events = [e for e in store.events("workshop-1") if e.rule_id == "gas-high"]
    assert [e.kind.value for e in gas_events] == ["RAISE", "CLEAR"]


def test_duplicate_deliveries_on_the_wire_are_deduplicated(tmp_path):
    cfg = AppConfig(data_dir=str(tmp_path))
    store = ChannelStore(cfg.data_dir, cfg.channels)
    ingestor = Ingestor(store, cfg.salubrity, cfg.mq135, cfg.alert_rules)

    payload = (b'{"ts":"2024-01-01T00:00:00Z","device_id":"sim-01","temperature_c":22,'
               b'"humidity_pct":41,"mq135_adc":512,"flags":[]}')
    with MqttBroker() as broker:
        service = MqttIngestService(ingestor, broker.uri)
        service.start()
        pub = MqttClient(broker.host, broker.port, "dup-pub")
        pub.connect()
        for _ in range(3):  # QoS-1 redelivery equivalent: same bytes, three times
            pub.publish("workshop/sim-01/reading", payload, qos=1)
        assert wait_until(lambda: ingestor.counters.received == 3)
        pub.disconnect()
        service.stop()

    assert len(store.entries("workshop-1")) == 1
    assert ingestor.counters.duplicates == 2
    assert ingestor.counters.dead_lettered == 0
