"""Minimal MQTT 3.1.1 over TCP: a client and an embedded broker.

Covers exactly what the telemetry path needs: CONNECT/CONNACK, QoS 0/1
PUBLISH with PUBACK and DUP redelivery, SUBSCRIBE with + and # filters,
ping and clean disconnect. No retained messages, persistent sessions,
wills or MQTT 5 features. The broker exists so deployments and tests can
run without an external mosquitto; it keeps no state across connections.
"""

from __future__ import annotations

import logging
import socket
import struct
import threading
from dataclasses import dataclass
from urllib.parse import urlparse

from .errors import InvalidParameterError, PublishError

log = logging.getLogger(__name__)

CONNECT = 1
CONNACK = 2
PUBLISH = 3
PUBACK = 4
SUBSCRIBE = 8
SUBACK = 9
UNSUBSCRIBE = 10
UNSUBACK = 11
PINGREQ = 12
PINGRESP = 13
DISCONNECT = 14


def parse_broker_uri(uri: str) -> tuple[str, int]:
    parsed = urlparse(uri)
    if parsed.scheme not in ("mqtt", "tcp"):
        raise InvalidParameterError(f"unsupported broker scheme {parsed.scheme!r} in {uri!r}")
    if not parsed.hostname:
        raise InvalidParameterError(f"broker URI {uri!r} has no host")
    return parsed.hostname, parsed.port or 1883


# ---------------------------------------------------------------- framing

def _encode_string(text: str) -> bytes:
    data = text.encode("utf-8")
    return struct.pack("!H", len(data)) + data


def _encode_remaining_length(n: int) -> bytes:
    out = bytearray()
    while True:
        byte = n % 128
        n //= 128
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = bytearray()
    while len(chunks) < n:
        chunk = sock.recv(n - len(chunks))
        if not chunk:
            raise ConnectionError("peer closed the connection")
        chunks.extend(chunk)
    return bytes(chunks)


def read_packet(sock: socket.socket) -> tuple[int, int, bytes]:
    """Blocking read of one packet; returns (type, flags, body)."""
    first = _recv_exact(sock, 1)[0]
    remaining = 0
    multiplier = 1
    for _ in range(4):
        byte = _recv_exact(sock, 1)[0]
        remaining += (byte & 0x7F) * multiplier
        if not byte & 0x80:
            break
        multiplier *= 128
    else:
        raise ConnectionError("malformed remaining-length field")
    body = _recv_exact(sock, remaining) if remaining else b""
    return first >> 4, first & 0x0F, body


def _take_string(body: bytes, offset: int) -> tuple[str, int]:
    (length,) = struct.unpack_from("!H", body, offset)
    end = offset + 2 + length
    return body[offset + 2:end].decode("utf-8"), end


def make_publish(topic: str, payload: bytes, qos: int, packet_id: int | None, dup: bool = False) -> bytes:
    flags = (0x08 if dup else 0) | (qos << 1)
    body = _encode_string(topic)
    if qos > 0:
        body += struct.pack("!H", packet_id)
    body += payload
    return bytes([(PUBLISH << 4) | flags]) + _encode_remaining_length(len(body)) + body


def parse_publish(flags: int, body: bytes) -> tuple[str, int, int | None, bytes]:
    """Returns (topic, qos, packet_id, payload)."""
    qos = (flags >> 1) & 0x03
    topic, offset = _take_string(body, 0)
    packet_id = None
    if qos > 0:
        (packet_id,) = struct.unpack_from("!H", body, offset)
        offset += 2
    return topic, qos, packet_id, body[offset:]


def topic_matches(topic_filter: str, topic: str) -> bool:
    filter_parts = topic_filter.split("/")
    topic_parts = topic.split("/")
    for i, part in enumerate(filter_parts):
        if part == "#":
            return i == len(filter_parts) - 1
        if i >= len(topic_parts):
            return False
        if part != "+" and part != topic_parts[i]:
            return False
    return len(filter_parts) == len(topic_parts)


# ---------------------------------------------------------------- client

class MqttClient:
    """Blocking client with a background reader thread.

    Subscription callbacks run on the reader thread, so they must be quick
    and must not publish synchronously on this same client with qos > 0.
    """

    def __init__(
        self,
        host: str,
        port: int,
        client_id: str,
        username: str | None = None,
        password: str | None = None,
        keepalive_s: int = 0,
    ):
        self._host = host
        self._port = port
        self._client_id = client_id
        self._username = username
        self._password = password
        self._keepalive_s = keepalive_s
        self._sock: socket.socket | None = None
        self._send_lock = threading.Lock()
        self._pid_lock = threading.Lock()
        self._next_pid = 1
        self._acks: dict[int, threading.Event] = {}
        self._subs: list[tuple[str, object]] = []
        self._reader: threading.Thread | None = None
        self._pinger: threading.Thread | None = None
        self._closing = threading.Event()

    # -- lifecycle

    def connect(self, timeout_s: float = 5.0) -> None:
        sock = socket.create_connection((self._host, self._port), timeout=timeout_s)
        flags = 0x02  # clean session
        payload = _encode_string(self._client_id)
        if self._username is not None:
            flags |= 0x80
            payload += _encode_string(self._username)
            if self._password is not None:
                flags |= 0x40
                payload += _encode_string(self._password)
        body = _encode_string("MQTT") + bytes([4, flags]) + struct.pack("!H", self._keepalive_s) + payload
        sock.sendall(bytes([CONNECT << 4]) + _encode_remaining_length(len(body)) + body)
        ptype, _, ack = read_packet(sock)
        if ptype != CONNACK or len(ack) < 2 or ack[1] != 0:
            sock.close()
            raise ConnectionError(f"broker refused connection (CONNACK rc={ack[1] if len(ack) > 1 else '?'})")
        sock.settimeout(None)
        self._sock = sock
        self._closing.clear()
        self._reader = threading.Thread(target=self._read_loop, name="mqtt-reader", daemon=True)
        self._reader.start()
        if self._keepalive_s > 0:
            self._pinger = threading.Thread(target=self._ping_loop, name="mqtt-pinger", daemon=True)
            self._pinger.start()

    def disconnect(self) -> None:
        self._closing.set()
        sock = self._sock
        if sock is not None:
            try:
                self._send(bytes([DISCONNECT << 4, 0]))
            except OSError:
                pass
            try:
                sock.shutdown(socket.SHUT_RDWR)  # unblocks the reader's recv
            except OSError:
                pass
            try:
                sock.close()
            except OSError:
                pass
            self._sock = None
        if self._reader is not None:
            self._reader.join(timeout=2.0)
            self._reader = None

    # -- operations

    def publish(self, topic: str, payload: bytes, qos: int = 1, timeout_s: float = 5.0, resends: int = 2) -> None:
        if self._sock is None:
            raise PublishError("not connected")
        if qos == 0:
            self._send(make_publish(topic, payload, 0, None))
            return
        pid = self._claim_pid()
        event = threading.Event()
        self._acks[pid] = event
        try:
            self._send(make_publish(topic, payload, 1, pid))
            for _ in range(resends + 1):
                if event.wait(timeout_s):
                    return
                log.warning("PUBACK timeout for pid %d on %s, resending with DUP", pid, topic)
                self._send(make_publish(topic, payload, 1, pid, dup=True))
            raise PublishError(f"no PUBACK for {topic!r} after {resends} resends")
        finally:
            self._acks.pop(pid, None)

    def subscribe(self, topic_filter: str, callback, qos: int = 1, timeout_s: float = 5.0) -> None:
        """callback(topic: str, payload: bytes) for every matching message."""
        if self._sock is None:
            raise ConnectionError("not connected")
        pid = self._claim_pid()
        event = threading.Event()
        self._acks[pid] = event
        body = struct.pack("!H", pid) + _encode_string(topic_filter) + bytes([qos])
        try:
            self._send(bytes([(SUBSCRIBE << 4) | 0x02]) + _encode_remaining_length(len(body)) + body)
            if not event.wait(timeout_s):
                raise ConnectionError(f"no SUBACK for {topic_filter!r}")
        finally:
            self._acks.pop(pid, None)
        self._subs.append((topic_filter, callback))

    # -- internals

    def _claim_pid(self) -> int:
        with self._pid_lock:
            pid = self._next_pid
            self._next_pid = pid % 65535 + 1
            return pid

    def _send(self, data: bytes) -> None:
        sock = self._sock
        if sock is None:
            raise PublishError("not connected")
        with self._send_lock:
            sock.sendall(data)

    def _read_loop(self) -> None:
        sock = self._sock
        try:
            while sock is not None:
                ptype, flags, body = read_packet(sock)
                if ptype == PUBLISH:
                    topic, qos, pid, payload = parse_publish(flags, body)
                    if qos > 0:
                        self._send(bytes([PUBACK << 4, 2]) + struct.pack("!H", pid))
                    for topic_filter, callback in list(self._subs):
                        if topic_matches(topic_filter, topic):
                            try:
                                callback(topic, payload)
                            except Exception:
                                log.exception("subscriber callback failed for %s", topic)
                elif ptype in (PUBACK, SUBACK, UNSUBACK):
                    (pid,) = struct.unpack_from("!H", body, 0)
                    event = self._acks.get(pid)
                    if event is not None:
                        event.set()
                elif ptype == PINGRESP:
                    pass
        except (OSError, ConnectionError, struct.error):
            if not self._closing.is_set():
                log.warning("mqtt reader stopped: connection lost")

    def _ping_loop(self) -> None:
        interval = max(1.0, self._keepalive_s / 2.0)
        while not self._closing.wait(interval):
            try:
                self._send(bytes([PINGREQ << 4, 0]))
            except OSError:
                return


# ---------------------------------------------------------------- broker

@dataclass
class _BrokerSession:
    sock: socket.socket
    client_id: str
    send_lock: threading.Lock
    next_pid: int = 1


class MqttBroker:
    """In-process broker for tests and single-host deployments."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen()
        self.host, self.port = self._listener.getsockname()[:2]
        self._lock = threading.Lock()
        self._sessions: list[_BrokerSession] = []
        self._subscriptions: list[tuple[_BrokerSession, str, int]] = []
        self._accept_thread: threading.Thread | None = None
        self._stopping = threading.Event()

    @property
    def uri(self) -> str:
        return f"mqtt://{self.host}:{self.port}"

    def start(self) -> "MqttBroker":
        self._accept_thread = threading.Thread(target=self._accept_loop, name="mqtt-broker", daemon=True)
        self._accept_thread.start()
        log.info("embedded MQTT broker listening on %s", self.uri)
        return self

    def stop(self) -> None:
        self._stopping.set()
        for closer in (lambda: self._listener.shutdown(socket.SHUT_RDWR), self._listener.close):
            try:
                closer()
            except OSError:
                pass
        with self._lock:
            sessions = list(self._sessions)
        for session in sessions:
            for closer in (lambda: session.sock.shutdown(socket.SHUT_RDWR), session.sock.close):
                try:
                    closer()
                except OSError:
                    pass
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=2.0)

    def __enter__(self) -> "MqttBroker":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def _accept_loop(self) -> None:
        while not self._stopping.is_set():
            try:
                conn, _ = self._listener.accept()
            except OSError:
                return
            threading.Thread(target=self._serve_client, args=(conn,), daemon=True).start()

    def _serve_client(self, conn: socket.socket) -> None:
        session: _BrokerSession | None = None
        try:
            ptype, _, body = read_packet(conn)
            if ptype != CONNECT:
                conn.close()
                return
            session = self._handle_connect(conn, body)
            while not self._stopping.is_set():
                ptype, flags, body = read_packet(conn)
                if ptype == PUBLISH:
                    self._handle_publish(session, flags, body)
                elif ptype == SUBSCRIBE:
                    self._handle_subscribe(session, body)
                elif ptype == UNSUBSCRIBE:
                    self._handle_unsubscribe(session, body)
                elif ptype == PINGREQ:
                    self._session_send(session, bytes([PINGRESP << 4, 0]))
                elif ptype == PUBACK:
                    pass  # outbound QoS-1 deliveries are fire-and-forget
                elif ptype == DISCONNECT:
                    break
        except (OSError, ConnectionError, struct.error):
            pass
        finally:
            if session is not None:
                self._drop_session(session)
            try:
                conn.close()
            except OSError:
                pass

    def _handle_connect(self, conn: socket.socket, body: bytes) -> _BrokerSession:
        _, offset = _take_string(body, 0)  # protocol name
        connect_flags = body[offset + 1]
        offset += 4  # level byte + flags byte + keepalive u16
        client_id, offset = _take_string(body, offset)
        if connect_flags & 0x04:  # will topic + message, parsed only to stay aligned
            _, offset = _take_string(body, offset)
            (will_len,) = struct.unpack_from("!H", body, offset)
            offset += 2 + will_len
        if connect_flags & 0x80:
            _, offset = _take_string(body, offset)
        if connect_flags & 0x40:
            _, offset = _take_string(body, offset)
        session = _BrokerSession(sock=conn, client_id=client_id or "anon", send_lock=threading.Lock())
        with self._lock:
            self._sessions.append(session)
        self._session_send(session, bytes([CONNACK << 4, 2, 0, 0]))
        return session

    def _handle_publish(self, session: _BrokerSession, flags: int, body: bytes) -> None:
        topic, qos, pid, payload = parse_publish(flags, body)
        if qos > 0:
            self._session_send(session, bytes([PUBACK << 4, 2]) + struct.pack("!H", pid))
        with self._lock:
            targets = [(s, f, q) for (s, f, q) in self._subscriptions if topic_matches(f, topic)]
        for target, _, sub_qos in targets:
            out_qos = min(qos, sub_qos)
            out_pid = None
            if out_qos > 0:
                out_pid = target.next_pid
                target.next_pid = out_pid % 65535 + 1
            try:
                self._session_send(target, make_publish(topic, payload, out_qos, out_pid))
            except OSError:
                self._drop_session(target)

    def _handle_subscribe(self, session: _BrokerSession, body: bytes) -> None:
        (pid,) = struct.unpack_from("!H", body, 0)
        offset = 2
        granted = bytearray()
        while offset < len(body):
            topic_filter, offset = _take_string(body, offset)
            qos = min(body[offset], 1)
            offset += 1
            with self._lock:
                self._subscriptions.append((session, topic_filter, qos))
            granted.append(qos)
        self._session_send(session, bytes([SUBACK << 4]) + _encode_remaining_length(2 + len(granted))
                           + struct.pack("!H", pid) + bytes(granted))

    def _handle_unsubscribe(self, session: _BrokerSession, body: bytes) -> None:
        (pid,) = struct.unpack_from("!H", body, 0)
        offset = 2
        filters = []
        while offset < len(body):
            topic_filter, offset = _take_string(body, offset)
            filters.append(topic_filter)
        with self._lock:
            self._subscriptions = [
                (s, f, q) for (s, f, q) in self._subscriptions
                if not (s is session and f in filters)
            ]
        self._session_send(session, bytes([UNSUBACK << 4, 2]) + struct.pack("!H", pid))

    def _session_send(self, session: _BrokerSession, data: bytes) -> None:
        with session.send_lock:
            session.sock.sendall(data)

    def _drop_session(self, session: _BrokerSession) -> None:
        with self._lock:
            if session in self._sessions:
                self._sessions.remove(session)
            self._subscriptions = [(s, f, q) for (s, f, q) in self._subscriptions if s is not session]
