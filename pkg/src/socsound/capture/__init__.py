from socsound.capture.aggregate import Aggregator, aggregate
from socsound.capture.live import (
    CaptureError,
    CapturePermissionDenied,
    CaptureUnavailable,
    NoSuchInterface,
    open_live_source,
)
from socsound.capture.logs import PacketLogError, open_packet_log, read_jsonl, read_pcap, write_jsonl
from socsound.capture.records import CHANNELS, Direction, IntervalSample, PacketRecord, ReplaySpec
from socsound.capture.replay import open_replay_source

__all__ = [
    "Aggregator",
    "aggregate",
    "CaptureError",
    "CapturePermissionDenied",
    "CaptureUnavailable",
    "NoSuchInterface",
    "open_live_source",
    "PacketLogError",
    "open_packet_log",
    "read_jsonl",
    "read_pcap",
    "write_jsonl",
    "CHANNELS",
    "Direction",
    "IntervalSample",
    "PacketRecord",
    "ReplaySpec",
    "open_replay_source",
]
