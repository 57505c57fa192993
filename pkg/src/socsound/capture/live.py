"""Live capture from a network interface via a raw packet socket.

Linux-only (AF_PACKET) and needs CAP_NET_RAW; when the backend is not
usable the CaptureUnavailable error tells the operator to fall back to
replay mode. Direction is Sent when the frame's source address belongs
to the configured local-address set, Received otherwise (so an empty set
classifies everything as Received).
"""

from __future__ import annotations

import ipaddress
import socket
import time
from typing import Iterator

from socsound.capture.logs import _ip_src, _LINKTYPE_ETHERNET
from socsound.capture.records import Direction, PacketRecord


class CaptureError(Exception):
    """Capture cannot start or continue."""


class NoSuchInterface(CaptureError):
    pass


class CapturePermissionDenied(CaptureError):
    pass


class CaptureUnavailable(CaptureError):
    """No usable capture backend on this host; use replay mode instead."""


_ETH_P_ALL = 0x0003


def _open_packet_socket(interface_name: str, poll_timeout: float):
    if not hasattr(socket, "AF_PACKET"):
        raise CaptureUnavailable("raw packet sockets unsupported on this platform")
    try:
        sock = socket.socket(socket.AF_PACKET, socket.SOCK_RAW, socket.htons(_ETH_P_ALL))
    except PermissionError as exc:
        raise CapturePermissionDenied(f"raw capture needs CAP_NET_RAW: {exc}") from exc
    except OSError as exc:
        raise CaptureUnavailable(f"cannot open packet socket: {exc}") from exc
    try:
        sock.bind((interface_name, 0))
    except OSError as exc:
        sock.close()
        raise NoSuchInterface(f"cannot bind interface {interface_name!r}: {exc}") from exc
    sock.settimeout(poll_timeout)
    return sock


def open_live_source(
    interface_name: str,
    local_addresses=(),
    stop=None,
    poll_timeout: float = 0.25,
) -> Iterator[PacketRecord]:
    """Stream PacketRecords from a live interface in arrival order.

    Timestamps are seconds since the first accepted frame. ``stop`` is an
    optional threading.Event-like object checked between frames.
    """
    local = {ipaddress.ip_address(a) for a in local_addresses}
    sock = _open_packet_socket(interface_name, poll_timeout)
    try:
        epoch = None
        while stop is None or not stop.is_set():
            try:
                frame = sock.recv(65 * 1024)
            except socket.timeout:
                continue
            now = time.monotonic()
            if epoch is None:
                epoch = now
            src = _ip_src(_LINKTYPE_ETHERNET, frame)
            direction = (
                Direction.SENT if (src is not None and src in local) else Direction.RECEIVED
            )
            yield PacketRecord(timestamp=now - epoch, direction=direction, length=len(frame))
    finally:
        sock.close()


def live_sample_stream(interface_name: str, tick: float, local_addresses=(),
                       stop=None, poll_timeout: float = 0.25):
    """Capture and aggregate in one context, yielding IntervalSamples.

    The wall clock drives interval flushes, so silent ticks still emit
    all-zero samples while the network is quiet.
    """
    from socsound.capture.aggregate import Aggregator

    local = {ipaddress.ip_address(a) for a in local_addresses}
    sock = _open_packet_socket(interface_name, poll_timeout)
    agg = Aggregator(tick, epoch=0.0)
    epoch = time.monotonic()
    try:
        while stop is None or not stop.is_set():
            try:
                frame = sock.recv(65 * 1024)
            except socket.timeout:
                frame = None
            now = time.monotonic() - epoch
            if frame is None:
                yield from agg.advance_to(now)
                continue
            src = _ip_src(_LINKTYPE_ETHERNET, frame)
            direction = (
                Direction.SENT if (src is not None and src in local) else Direction.RECEIVED
            )
            yield from agg.push(PacketRecord(timestamp=now, direction=direction,
                                             length=len(frame)))
    finally:
        sock.close()
