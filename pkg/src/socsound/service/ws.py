"""Minimal WebSocket (RFC 6455) server handshake, framing, and client.

The environment this ships into cannot assume a third-party WebSocket
stack, and the console protocol only needs text frames, ping/pong and
close, so this implements exactly that on stdlib sockets. Messages are
newline-free JSON documents, one per frame.
"""

from __future__ import annotations

import base64
import hashlib
import os
import socket
import struct
import threading

_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_CONT = 0x0
OP_TEXT = 0x1
OP_BINARY = 0x2
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA


class WebSocketError(Exception):
    pass


def _apply_mask(data: bytes, key: bytes) -> bytes:
    if not data:
        return data
    reps = -(-len(data) // 4)
    mask = (key * reps)[: len(data)]
    n = int.from_bytes(data, "little") ^ int.from_bytes(mask, "little")
    return n.to_bytes(len(data), "little")


class WebSocket:
    """One established connection; safe to send from multiple threads.

    A buffered reader created during the HTTP exchange must be handed in
    and reused; a second reader on the same socket could lose bytes the
    first one read ahead.
    """

    def __init__(self, sock: socket.socket, mask_outgoing: bool, rfile=None):
        self._sock = sock
        self._rfile = rfile if rfile is not None else sock.makefile("rb")
        self._mask = mask_outgoing
        self._send_lock = threading.Lock()
        self.closed = False

    # -- frames ------------------------------------------------------------

    def _send_frame(self, opcode: int, payload: bytes):
        head = bytes([0x80 | opcode])
        mask_bit = 0x80 if self._mask else 0x00
        n = len(payload)
        if n < 126:
            head += bytes([mask_bit | n])
        elif n < 1 << 16:
            head += bytes([mask_bit | 126]) + struct.pack("!H", n)
        else:
            head += bytes([mask_bit | 127]) + struct.pack("!Q", n)
        if self._mask:
            key = os.urandom(4)
            payload = _apply_mask(payload, key)
            head += key
        with self._send_lock:
            if self.closed:
                raise WebSocketError("connection closed")
            self._sock.sendall(head + payload)

    def _read_exact(self, n: int) -> bytes:
        buf = self._rfile.read(n)
        if buf is None or len(buf) < n:
            raise WebSocketError("connection dropped mid-frame")
        return buf

    def _read_frame(self):
        b1, b2 = self._read_exact(2)
        fin = bool(b1 & 0x80)
        opcode = b1 & 0x0F
        masked = bool(b2 & 0x80)
        n = b2 & 0x7F
        if n == 126:
            n = struct.unpack("!H", self._read_exact(2))[0]
        elif n == 127:
            n = struct.unpack("!Q", self._read_exact(8))[0]
        key = self._read_exact(4) if masked else None
        payload = self._read_exact(n)
        if key:
            payload = _apply_mask(payload, key)
        return fin, opcode, payload

    # -- public API ----------------------------------------------------------

    def send_text(self, text: str):
        self._send_frame(OP_TEXT, text.encode("utf-8"))

    def recv_text(self) -> str | None:
        """Next text message, or None once the peer closes."""
        fragments = []
        while True:
            try:
                fin, opcode, payload = self._read_frame()
            except (WebSocketError, OSError, ValueError):
                self.closed = True
                return None
            if opcode == OP_CLOSE:
                try:
                    self._send_frame(OP_CLOSE, b"")
                except (WebSocketError, OSError):
                    pass
                self.closed = True
                return None
            if opcode == OP_PING:
                try:
                    self._send_frame(OP_PONG, payload)
                except (WebSocketError, OSError):
                    pass
                continue
            if opcode == OP_PONG:
                continue
            if opcode in (OP_TEXT, OP_BINARY, OP_CONT):
                fragments.append(payload)
                if fin:
                    return b"".join(fragments).decode("utf-8", errors="replace")

    def close(self):
        if not self.closed:
            try:
                self._send_frame(OP_CLOSE, b"")
            except (WebSocketError, OSError):
                pass
            self.closed = True
        try:
            self._sock.close()
        except OSError:
            pass


# -- HTTP plumbing -----------------------------------------------------------


def _read_headers(rfile) -> dict:
    headers = {}
    while True:
        line = rfile.readline(8192).decode("latin-1")
        if line in ("\r\n", "\n", ""):
            break
        if ":" in line:
            k, v = line.split(":", 1)
            headers[k.strip().lower()] = v.strip()
    return headers


def read_http_request(sock: socket.socket):
    """Parse one HTTP/1.1 request head; returns (method, path, headers, rfile).

    The returned rfile must be reused for any subsequent reads on this
    socket (it may have buffered ahead).
    """
    rfile = sock.makefile("rb")
    request_line = rfile.readline(8192).decode("latin-1").strip()
    if not request_line:
        raise WebSocketError("empty request")
    parts = request_line.split()
    if len(parts) < 3:
        raise WebSocketError(f"bad request line: {request_line!r}")
    return parts[0], parts[1], _read_headers(rfile), rfile


def accept_handshake(sock: socket.socket, headers: dict, rfile) -> WebSocket:
    """Finish a server-side upgrade and return the live WebSocket."""
    key = headers.get("sec-websocket-key")
    if headers.get("upgrade", "").lower() != "websocket" or not key:
        raise WebSocketError("not a websocket upgrade request")
    accept = base64.b64encode(hashlib.sha1((key + _GUID).encode()).digest()).decode()
    sock.sendall(
        (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
        ).encode("latin-1")
    )
    return WebSocket(sock, mask_outgoing=False, rfile=rfile)


def connect(host: str, port: int, path: str = "/ws", timeout: float = 10.0) -> WebSocket:
    """Client-side upgrade; returns the live WebSocket."""
    sock = socket.create_connection((host, port), timeout=timeout)
    sock.settimeout(timeout)
    key = base64.b64encode(os.urandom(16)).decode()
    sock.sendall(
        (
            f"GET {path} HTTP/1.1\r\n"
            f"Host: {host}:{port}\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Key: {key}\r\n"
            "Sec-WebSocket-Version: 13\r\n\r\n"
        ).encode("latin-1")
    )
    rfile = sock.makefile("rb")
    status = rfile.readline(8192).decode("latin-1")
    if "101" not in status:
        sock.close()
        raise WebSocketError(f"handshake rejected: {status.strip()!r}")
    headers = _read_headers(rfile)
    expected = base64.b64encode(hashlib.sha1((key + _GUID).encode()).digest()).decode()
    if headers.get("sec-websocket-accept") != expected:
        sock.close()
        raise WebSocketError("handshake accept key mismatch")
    sock.settimeout(None)
    return WebSocket(sock, mask_outgoing=True, rfile=rfile)
