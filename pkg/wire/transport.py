"""
Blocking, ordered frame transports: an in-process queue pair and TCP.

Both record a transcript of every frame they carry.
"""

from __future__ import annotations

import logging
import queue
import socket
import time
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config import get_settings
from utils.exceptions import TransportError
from .frame import HEADER_SIZE, Frame, MessageType, parse_header

logger = logging.getLogger(__name__)

SENT = "sent"
RECEIVED = "received"


@dataclass(frozen=True)
class TranscriptEntry:
    direction: str
    msg_type: MessageType
    length: int


@dataclass
class Transcript:
    """Ordered (direction, type, frame length) records of one endpoint."""

    entries: List[TranscriptEntry] = field(default_factory=list)

    def record(self, direction: str, msg_type: MessageType, length: int):
        self.entries.append(TranscriptEntry(direction, msg_type, length))

    def signature(self) -> List[Tuple[str, int, int]]:
        """Comparable form for transport-equivalence checks."""
        return [(e.direction, int(e.msg_type), e.length) for e in self.entries]


def transcript_bytes(t: Transcript) -> Dict[str, object]:
    """
    Byte totals per direction and per (direction, message type).

    Returns:
        {"sent": int, "received": int, "by_type": {"sent": {...}, "received": {...}}}
    """
    totals = {SENT: 0, RECEIVED: 0}
    by_type: Dict[str, Dict[str, int]] = {SENT: defaultdict(int), RECEIVED: defaultdict(int)}
    for e in t.entries:
        totals[e.direction] += e.length
        by_type[e.direction][e.msg_type.name] += e.length
    return {
        SENT: totals[SENT],
        RECEIVED: totals[RECEIVED],
        "by_type": {d: dict(v) for d, v in by_type.items()},
    }


class Transport(ABC):
    """Single-owner endpoint with a blocking send/receive contract."""

    def __init__(self, max_payload: Optional[int] = None):
        settings = get_settings()
        self.max_payload = max_payload or settings.max_frame_bytes
        self.transcript = Transcript()

    @abstractmethod
    def _send_bytes(self, data: bytes):
        ...

    @abstractmethod
    def _recv_exact(self, size: int) -> bytes:
        ...

    @abstractmethod
    def close(self):
        ...

    def send_frame(self, frame: Frame):
        data = frame.encode()
        self._send_bytes(data)
        self.transcript.record(SENT, frame.msg_type, len(data))
        logger.debug(f"sent {frame.msg_type.name} ({len(data)} bytes)")

    def recv_frame(self) -> Frame:
        """
        Raises:
            TransportError: If the channel fails or closes
            MalformedPayload: If the header is invalid
        """
        msg_type, length = parse_header(self._recv_exact(HEADER_SIZE), self.max_payload)
        payload = self._recv_exact(length) if length else b""
        self.transcript.record(RECEIVED, msg_type, HEADER_SIZE + length)
        logger.debug(f"received {msg_type.name} ({HEADER_SIZE + length} bytes)")
        return Frame(msg_type, payload)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


def send_frame(transport: Transport, frame: Frame):
    transport.send_frame(frame)


def recv_frame(transport: Transport) -> Frame:
    return transport.recv_frame()


class InProcTransport(Transport):
    """One end of a queue pair; chunks are delivered FIFO."""

    _CLOSED = None

    def __init__(self, outbox: "queue.Queue", inbox: "queue.Queue", timeout: Optional[float] = None):
        super().__init__()
        self._outbox = outbox
        self._inbox = inbox
        self._buffer = bytearray()
        self._timeout = timeout if timeout is not None else get_settings().tcp_timeout_s
        self._closed = False

    @classmethod
    def pair(cls, timeout: Optional[float] = None) -> Tuple["InProcTransport", "InProcTransport"]:
        a_to_b: queue.Queue = queue.Queue()
        b_to_a: queue.Queue = queue.Queue()
        return cls(a_to_b, b_to_a, timeout), cls(b_to_a, a_to_b, timeout)

    def _send_bytes(self, data: bytes):
        if self._closed:
            raise TransportError("Transport is closed")
        self._outbox.put(bytes(data))

    def _recv_exact(self, size: int) -> bytes:
        while len(self._buffer) < size:
            try:
                chunk = self._inbox.get(timeout=self._timeout)
            except queue.Empty:
                raise TransportError(f"No data within {self._timeout}s") from None
            if chunk is self._CLOSED:
                raise TransportError("Peer closed the channel")
            self._buffer.extend(chunk)
        out = bytes(self._buffer[:size])
        del self._buffer[:size]
        return out

    def close(self):
        if not self._closed:
            self._closed = True
            self._outbox.put(self._CLOSED)


class TcpTransport(Transport):
    """Plain stream socket endpoint."""

    def __init__(self, sock: socket.socket):
        super().__init__()
        self._sock = sock

    @classmethod
    def listen(cls, host: str, port: int, timeout: Optional[float] = None) -> "TcpTransport":
        """Bind, accept exactly one peer and stop listening."""
        with TcpListener(host, port, timeout) as listener:
            return listener.accept()

    @classmethod
    def connect(cls, host: str, port: int, timeout: Optional[float] = None,
                retry_interval: float = 0.1) -> "TcpTransport":
        """
        Connect, retrying until the timeout elapses (the peer may still be starting).

        Raises:
            TransportError: If no connection is made in time
        """
        timeout = timeout if timeout is not None else get_settings().tcp_timeout_s
        deadline = time.monotonic() + timeout
        while True:
            try:
                sock = socket.create_connection((host, port), timeout=timeout)
                break
            except OSError as e:
                if time.monotonic() >= deadline:
                    logger.error(f"Failed to connect to {host}:{port}: {e}")
                    raise TransportError(f"Connect to {host}:{port} failed: {e}") from e
                time.sleep(retry_interval)
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        logger.info(f"Connected to {host}:{port}")
        return cls(sock)

    def _send_bytes(self, data: bytes):
        try:
            self._sock.sendall(data)
        except OSError as e:
            raise TransportError(f"Send failed: {e}") from e

    def _recv_exact(self, size: int) -> bytes:
        buf = bytearray()
        while len(buf) < size:
            try:
                chunk = self._sock.recv(min(size - len(buf), 1 << 20))
            except OSError as e:
                raise TransportError(f"Receive failed: {e}") from e
            if not chunk:
                raise TransportError("Peer closed the connection")
            buf.extend(chunk)
        return bytes(buf)

    def close(self):
        try:
            self._sock.close()
            logger.info("TCP transport closed")
        except OSError:
            pass


class TcpListener:
    """Bound server socket; port 0 picks a free port (see `address`)."""

    def __init__(self, host: str, port: int, timeout: Optional[float] = None):
        self._timeout = timeout if timeout is not None else get_settings().tcp_timeout_s
        try:
            self._server = socket.create_server((host, port))
        except OSError as e:
            logger.error(f"Failed to bind {host}:{port}: {e}")
            raise TransportError(f"Bind to {host}:{port} failed: {e}") from e
        self._server.settimeout(self._timeout)
        self.address: Tuple[str, int] = self._server.getsockname()[:2]
        logger.info(f"Listening on {self.address[0]}:{self.address[1]}")

    def accept(self) -> TcpTransport:
        """
        Raises:
            TransportError: If no peer connects within the timeout
        """
        try:
            sock, peer = self._server.accept()
        except OSError as e:
            logger.error(f"Failed to accept a peer: {e}")
            raise TransportError(f"Accept failed: {e}") from e
        sock.settimeout(self._timeout)
        logger.info(f"Accepted connection from {peer[0]}:{peer[1]}")
        return TcpTransport(sock)

    def close(self):
        self._server.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
