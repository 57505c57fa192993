"""Operator console endpoint: WebSocket telemetry/control plus static assets.

On connect a client receives one snapshot message (current config, the
recent frame window, the downsampled aggregate series), then live frame
and alert messages. Client messages are control commands applied through
the session's control queue; the session state echoed in later frames is
authoritative. A subscriber that stops reading overflows its queue and
is disconnected rather than slowing anyone else down.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import socket
import threading
from pathlib import Path

from socsound.service import ws as wsproto

log = logging.getLogger(__name__)


def parse_listen(listen: str) -> tuple:
    host, _, port = listen.rpartition(":")
    return host or "127.0.0.1", int(port)


class ConsoleServer:
    """Serves /ws for the protocol and anything else from static_dir."""

    def __init__(self, session, host: str = "127.0.0.1", port: int = 0, static_dir=None):
        self.session = session
        self.host = host
        self.port = port
        self.static_dir = Path(static_dir) if static_dir else None
        self._listener = None
        self._threads = []
        self._stop = threading.Event()

    def start(self) -> "ConsoleServer":
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((self.host, self.port))
        self._listener.listen(16)
        self.port = self._listener.getsockname()[1]
        t = threading.Thread(target=self._accept_loop, name="console-accept", daemon=True)
        t.start()
        self._threads.append(t)
        log.info("console listening on %s:%d", self.host, self.port)
        return self

    def stop(self):
        self._stop.set()
        if self._listener is not None:
            try:
                self._listener.close()
            except OSError:
                pass

    # -- connection handling ------------------------------------------------

    def _accept_loop(self):
        while not self._stop.is_set():
            try:
                conn, _ = self._listener.accept()
            except OSError:
                return
            t = threading.Thread(target=self._handle, args=(conn,), daemon=True)
            t.start()

    def _handle(self, conn: socket.socket):
        try:
            method, path, headers, rfile = wsproto.read_http_request(conn)
        except wsproto.WebSocketError:
            conn.close()
            return
        if headers.get("upgrade", "").lower() == "websocket":
            try:
                websocket = wsproto.accept_handshake(conn, headers, rfile)
            except wsproto.WebSocketError as exc:
                log.warning("handshake failed: %s", exc)
                conn.close()
                return
            self._serve_ws(websocket)
        elif method == "GET":
            self._serve_static(conn, path)
        else:
            conn.sendall(b"HTTP/1.1 405 Method Not Allowed\r\nContent-Length: 0\r\n\r\n")
            conn.close()

    def _serve_ws(self, websocket: wsproto.WebSocket):
        sub, snapshot = self.session.hub.subscribe(self.session.snapshot_config())
        try:
            websocket.send_text(json.dumps(snapshot))
        except (wsproto.WebSocketError, OSError):
            self.session.hub.unsubscribe(sub)
            websocket.close()
            return

        def control_reader():
            while True:
                text = websocket.recv_text()
                if text is None:
                    sub.closed = True
                    return
                try:
                    self.session.apply_control(json.loads(text))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    log.warning("ignoring bad control message: %s", exc)

        reader = threading.Thread(target=control_reader, daemon=True)
        reader.start()
        try:
            while not self._stop.is_set():
                if sub.overflowed:
                    websocket.send_text(json.dumps(
                        {"type": "disconnect", "reason": "subscriber overflow"}))
                    break
                if sub.closed:
                    break
                msg = sub.drain(timeout=0.2)
                if msg is not None:
                    websocket.send_text(json.dumps(msg))
        except (wsproto.WebSocketError, OSError):
            pass
        finally:
            self.session.hub.unsubscribe(sub)
            websocket.close()

    def _serve_static(self, conn: socket.socket, path: str):
        try:
            if self.static_dir is None:
                conn.sendall(b"HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\n\r\n")
                return
            rel = path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (self.static_dir / rel).resolve()
            if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
                conn.sendall(b"HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\n\r\n")
                return
            body = target.read_bytes()
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            head = (
                "HTTP/1.1 200 OK\r\n"
                f"Content-Type: {ctype}\r\n"
                f"Content-Length: {len(body)}\r\n"
                "Connection: close\r\n\r\n"
            ).encode("latin-1")
            conn.sendall(head + body)
        except OSError:
            pass
        finally:
            conn.close()
