"""Packet-log readers: line-delimited JSON records and classic pcap files.

The JSONL format is the golden-test surface: one object per line,
``{"ts": float, "dir": "s"|"r", "len": int}``, timestamps non-decreasing.
pcap reading is best effort (classic format only, direction classified
against a local-address set).
"""

from __future__ import annotations

import ipaddress
import json
import struct
from pathlib import Path
from typing import Iterable, Iterator

from socsound.capture.records import Direction, PacketRecord


class PacketLogError(Exception):
    """Unreadable, unparseable, or non-monotonic packet log."""


def read_jsonl(path) -> Iterator[PacketRecord]:
    """Yield PacketRecords from a JSONL packet log, validating monotonic ts."""
    last_ts = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                ts = float(obj["ts"])
                direction = Direction(obj["dir"])
                length = int(obj["len"])
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise PacketLogError(f"{path}:{lineno}: bad record: {exc}") from exc
            if last_ts is not None and ts < last_ts:
                raise PacketLogError(
                    f"{path}:{lineno}: non-monotonic timestamp {ts} after {last_ts}"
                )
            last_ts = ts
            yield PacketRecord(timestamp=ts, direction=direction, length=length)


def write_jsonl(path, records: Iterable[PacketRecord]) -> int:
    """Write records as JSONL; returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps({"ts": rec.timestamp, "dir": rec.direction.value,
                                 "len": rec.length}) + "\n")
            n += 1
    return n


_PCAP_MAGICS = {
    0xA1B2C3D4: ("<", 1e-6),   # little endian, microseconds
    0xD4C3B2A1: (">", 1e-6),
    0xA1B23C4D: ("<", 1e-9),   # nanosecond variant
    0x4D3CB2A1: (">", 1e-9),
}
_LINKTYPE_ETHERNET = 1
_LINKTYPE_LINUX_SLL = 113
_LINKTYPE_RAW = 101


def _ip_src(linktype: int, data: bytes):
    """Best-effort source IP extraction from a captured frame."""
    if linktype == _LINKTYPE_ETHERNET:
        if len(data) < 14:
            return None
        ethertype = struct.unpack(">H", data[12:14])[0]
        payload = data[14:]
    elif linktype == _LINKTYPE_LINUX_SLL:
        if len(data) < 16:
            return None
        ethertype = struct.unpack(">H", data[14:16])[0]
        payload = data[16:]
    elif linktype == _LINKTYPE_RAW:
        ethertype = None
        payload = data
    else:
        return None
    if ethertype == 0x0800 or (ethertype is None and payload and payload[0] >> 4 == 4):
        if len(payload) >= 20:
            return ipaddress.ip_address(payload[12:16])
    elif ethertype == 0x86DD or (ethertype is None and payload and payload[0] >> 4 == 6):
        if len(payload) >= 40:
            return ipaddress.ip_address(payload[8:24])
    return None


def read_pcap(path, local_addresses=()) -> Iterator[PacketRecord]:
    """Yield PacketRecords from a classic pcap file.

    Direction is Sent when the frame's source IP is in local_addresses,
    Received otherwise (including when no IP header can be parsed).
    Timestamps are rebased to the first packet.
    """
    local = {ipaddress.ip_address(a) for a in local_addresses}
    with open(path, "rb") as fh:
        header = fh.read(24)
        if len(header) < 24:
            raise PacketLogError(f"{path}: truncated pcap header")
        magic = struct.unpack("<I", header[:4])[0]
        if magic not in _PCAP_MAGICS:
            magic = struct.unpack(">I", header[:4])[0]
        if magic not in _PCAP_MAGICS:
            raise PacketLogError(f"{path}: not a pcap file")
        endian, frac = _PCAP_MAGICS[magic]
        linktype = struct.unpack(endian + "I", header[20:24])[0]
        epoch = None
        last_ts = None
        while True:
            rec = fh.read(16)
            if len(rec) < 16:
                break
            sec, sub, caplen, origlen = struct.unpack(endian + "IIII", rec)
            data = fh.read(caplen)
            if len(data) < caplen:
                raise PacketLogError(f"{path}: truncated packet record")
            ts = sec + sub * frac
            if epoch is None:
                epoch = ts
            rel = ts - epoch
            if last_ts is not None and rel < last_ts:
                raise PacketLogError(
                    f"{path}: non-monotonic timestamp {rel} after {last_ts}"
                )
            last_ts = rel
            src = _ip_src(linktype, data)
            direction = Direction.SENT if (src is not None and src in local) else Direction.RECEIVED
            yield PacketRecord(timestamp=rel, direction=direction, length=int(origlen))


def open_packet_log(path, local_addresses=()) -> Iterator[PacketRecord]:
    """Open either supported packet-log format, sniffing by magic/extension."""
    p = Path(path)
    if not p.exists():
        raise PacketLogError(f"{path}: no such file")
    try:
        with open(p, "rb") as fh:
            head = fh.read(4)
    except OSError as exc:
        raise PacketLogError(f"{path}: unreadable: {exc}") from exc
    if len(head) == 4:
        for endian in ("<", ">"):
            if struct.unpack(endian + "I", head)[0] in _PCAP_MAGICS:
                return read_pcap(p, local_addresses)
    if p.suffix in (".jsonl", ".json", ".log", ".txt") or head[:1] in (b"{", b""):
        return read_jsonl(p)
    raise PacketLogError(f"{path}: unknown packet-log format")
