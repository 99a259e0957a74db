import socket
import struct
import threading
import time

import pytest

from workshopair.errors import InvalidParameterError, PublishError
from workshopair.mqtt import (
    CONNACK,
    CONNECT,
    PUBACK,
    PUBLISH,
    MqttBroker,
    MqttClient,
    make_publish,
    parse_broker_uri,
    parse_publish,
    read_packet,
    topic_matches,
)


class TestTopicMatching:
    def test_exact(self):
        assert topic_matches("workshop/sim-01/reading", "workshop/sim-01/reading")
        assert not topic_matches("workshop/sim-01/reading", "workshop/sim-01/status")

    def test_single_level_wildcard(self):
        assert topic_matches("workshop/+/reading", "workshop/sim-01/reading")
        assert topic_matches("workshop/+/reading", "workshop/anything/reading")
        assert not topic_matches("workshop/+/reading", "workshop/a/b/reading")
        assert not topic_matches("workshop/+/reading", "workshop/sim-01")

    def test_multi_level_wildcard(self):
        assert topic_matches("workshop/#", "workshop/sim-01/reading")
        assert topic_matches("#", "a/b/c")
        assert not topic_matches("workshop/#/x", "workshop/a/x")  # '#' must be last

    def test_plus_does_not_cross_levels(self):
        assert not topic_matches("+", "a/b")


class TestFraming:
    def test_publish_roundtrip(self):
        raw = make_publish("t/x", b"hello", qos=1, packet_id=77)
        # reparse through a socketpair to exercise read_packet
        a, b = socket.socketpair()
        a.sendall(raw)
        ptype, flags, body = read_packet(b)
        a.close(); b.close()
        assert ptype == PUBLISH
        topic, qos, pid, payload = parse_publish(flags, body)
        assert (topic, qos, pid, payload) == ("t/x", 1, 77, b"hello")

    def test_qos0_has_no_packet_id(self):
        raw = make_publish("t", b"p", qos=0, packet_id=None)
        a, b = socket.socketpair()
        a.sendall(raw)
        _, flags, body = read_packet(b)
        a.close(); b.close()
        topic, qos, pid, payload = parse_publish(flags, body)
        assert (topic, qos, pid, payload) == ("t", 0, None, b"p")

    def test_large_payload_varint_length(self):
        blob = b"x" * 50_000
        raw = make_publish("big", blob, qos=0, packet_id=None)
        a, b = socket.socketpair()
        threading.Thread(target=a.sendall, args=(raw,)).start()
        _, flags, body = read_packet(b)
        a.close(); b.close()
        _, _, _, payload = parse_publish(flags, body)
        assert payload == blob


class TestBrokerUri:
    def test_parse(self):
        assert parse_broker_uri("mqtt://10.0.0.5:2883") == ("10.0.0.5", 2883)
        assert parse_broker_uri("mqtt://broker.local") == ("broker.local", 1883)

    def test_rejects_bad_scheme(self):
        with pytest.raises(InvalidParameterError):
            parse_broker_uri("http://x:1883")
        with pytest.raises(InvalidParameterError):
            parse_broker_uri("mqtt://")


class TestEndToEnd:
    def test_publish_subscribe_roundtrip(self):
        with MqttBroker() as broker:
            received = []
            done = threading.Event()

            sub = MqttClient(broker.host, broker.port, "sub-1")
            sub.connect()
            sub.subscribe("workshop/+/reading", lambda t, p: (received.append((t, p)), done.set()))

            pub = MqttClient(broker.host, broker.port, "pub-1")
            pub.connect()
            pub.publish("workshop/sim-01/reading", b'{"n":1}', qos=1)

            assert done.wait(3.0)
            assert received == [("workshop/sim-01/reading", b'{"n":1}')]
            pub.disconnect()
            sub.disconnect()

    def test_non_matching_topic_not_delivered(self):
        with MqttBroker() as broker:
            received = []
            sub = MqttClient(broker.host, broker.port, "sub-2")
            sub.connect()
            sub.subscribe("workshop/+/reading", lambda t, p: received.append(t))
            pub = MqttClient(broker.host, broker.port, "pub-2")
            pub.connect()
            pub.publish("other/sim-01/reading", b"x", qos=1)
            pub.publish("workshop/sim-01/reading", b"y", qos=1)
            deadline = time.time() + 3.0
            while len(received) < 1 and time.time() < deadline:
                time.sleep(0.01)
            time.sleep(0.05)
            assert received == ["workshop/sim-01/reading"]
            pub.disconnect()
            sub.disconnect()

    def test_qos0_also_routed(self):
        with MqttBroker() as broker:
            done = threading.Event()
            sub = MqttClient(broker.host, broker.port, "sub-3")
            sub.connect()
            sub.subscribe("a/#", lambda t, p: done.set(), qos=0)
            pub = MqttClient(broker.host, broker.port, "pub-3")
            pub.connect()
            pub.publish("a/b", b"z", qos=0)
            assert done.wait(3.0)
            pub.disconnect()
            sub.disconnect()

    def test_connection_refused_when_no_broker(self):
        client = MqttClient("127.0.0.1", 1, "nobody")
        with pytest.raises(OSError):
            client.connect(timeout_s=0.5)


class TestQos1Redelivery:
    def test_client_resends_with_dup_until_acked(self):
        """A hand-rolled server swallows the first PUBLISH and acks the DUP."""
        listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        listener.bind(("127.0.0.1", 0))
        listener.listen(1)
        port = listener.getsockname()[1]
        seen = []

        def server():
            conn, _ = listener.accept()
            ptype, _, _ = read_packet(conn)
            assert ptype == CONNECT
            conn.sendall(bytes([CONNACK << 4, 2, 0, 0]))
            # first PUBLISH: record, do not ack
            ptype, flags, body = read_packet(conn)
            seen.append((ptype, flags))
            # second PUBLISH (the DUP resend): ack it
            ptype, flags, body = read_packet(conn)
            seen.append((ptype, flags))
            _, _, pid, _ = parse_publish(flags, body)
            conn.sendall(bytes([PUBACK << 4, 2]) + struct.pack("!H", pid))
            time.sleep(0.1)
            conn.close()

        thread = threading.Thread(target=server, daemon=True)
        thread.start()

        client = MqttClient("127.0.0.1", port, "redelivery-test")
        client.connect()
        client.publish("t", b"payload", qos=1, timeout_s=0.3, resends=2)
        client.disconnect()
        listener.close()
        thread.join(2.0)

        assert len(seen) == 2
        assert seen[0][0] == PUBLISH and not seen[0][1] & 0x08
        assert seen[1][0] == PUBLISH and seen[1][1] & 0x08  # DUP bit set

    def test_publish_fails_cleanly_when_never_acked(self):
        listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        listener.bind(("127.0.0.1", 0))
        listener.listen(1)
        port = listener.getsockname()[1]

        def server():
            conn, _ = listener.accept()
            read_packet(conn)
            conn.sendall(bytes([CONNACK << 4, 2, 0, 0]))
            try:
                while True:
                    read_packet(conn)  # swallow everything, never ack
            except (ConnectionError, OSError):
                pass

        thread = threading.Thread(target=server, daemon=True)
        thread.start()
        client = MqttClient("127.0.0.1", port, "never-acked")
        client.connect()
        with pytest.raises(PublishError):
            client.publish("t", b"x", qos=1, timeout_s=0.1, resends=1)
        client.disconnect()
        listener.close()
