"""Telemetry frames, the subscriber fan-out hub, and session-log persistence.

One frame per tick carries the raw sample, its log returns, the audio
parameters actually applied, the mixer, and the alert flag. Session logs
are JSONL: a single header line (config + hash) followed by frame lines,
so a finished log can be fed straight back through the replay path.
"""

from __future__ import annotations

import json
import queue
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from socsound.audio.engine import ChannelParams, MixerState
from socsound.capture.records import CHANNELS, IntervalSample
from socsound.metrics import LogReturnVector


@dataclass(frozen=True)
class TelemetryFrame:
    index: int
    sample: IntervalSample
    returns: LogReturnVector
    channels: dict  # channel -> ChannelParams as applied
    mixer: MixerState
    alert_firing: bool

    @property
    def aggregate(self) -> int:
        # combined traffic volume for the slow aggregate plot
        return self.sample.bs + self.sample.br

    def to_dict(self) -> dict:
        mixer_gain = dict(zip(CHANNELS, self.mixer.gains))
        return {
            "type": "frame",
            "index": self.index,
            "t_start": self.sample.t_start,
            "sample": {name: getattr(self.sample, name) for name in CHANNELS},
            "returns": {"rbs": self.returns.rbs, "rps": self.returns.rps,
                        "rbr": self.returns.rbr, "rpr": self.returns.rpr},
            "channels": {ch: {**p.to_dict(), "mixer_gain": mixer_gain[ch]}
                         for ch, p in self.channels.items()},
            "mixer": self.mixer.to_dict(),
            "alert": self.alert_firing,
            "aggregate": self.aggregate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TelemetryFrame":
        idx = int(d["index"])
        s = d["sample"]
        sample = IntervalSample(index=idx, t_start=float(d["t_start"]),
                                bs=int(s["bs"]), ps=int(s["ps"]),
                                br=int(s["br"]), pr=int(s["pr"]))
        r = d["returns"]
        returns = LogReturnVector(idx, float(r["rbs"]), float(r["rps"]),
                                  float(r["rbr"]), float(r["rpr"]))
        channels = {
            ch: ChannelParams(gain_target=float(p["gain"]), center_hz=float(p["center_hz"]),
                              q=float(p["q"]), tap_enabled=bool(p["tap"]))
            for ch, p in d["channels"].items()
        }
        return cls(index=idx, sample=sample, returns=returns, channels=channels,
                   mixer=MixerState.from_dict(d["mixer"]), alert_firing=bool(d["alert"]))


class Subscriber:
    """One telemetry consumer with a bounded queue.

    A consumer that stops draining gets disconnected (``overflowed`` set)
    instead of back-pressuring the pipeline.
    """

    def __init__(self, capacity: int = 256):
        self.queue = queue.Queue(maxsize=capacity)
        self.overflowed = False
        self.closed = False

    def offer(self, message: dict) -> bool:
        if self.closed:
            return False
        try:
            self.queue.put_nowait(message)
            return True
        except queue.Full:
            self.overflowed = True
            self.closed = True
            return False

    def drain(self, timeout: float | None = None):
        try:
            return self.queue.get(timeout=timeout)
        except queue.Empty:
            return None


class TelemetryHub:
    """Broadcasts frames and alert transitions; keeps the snapshot window."""

    def __init__(self, window: int = 300, downsample: int = 5, capacity: int = 256):
        self.window = window
        self.downsample = downsample
        self.capacity = capacity
        self._recent = deque(maxlen=window)
        self._aggregate = []  # every downsample-th tick, for the slow plot
        self._subs = []
        self._lock = threading.Lock()

    def subscribe(self, snapshot_config: dict | None = None) -> tuple:
        """Register a consumer; returns (subscriber, snapshot message)."""
        sub = Subscriber(self.capacity)
        with self._lock:
            snapshot = {
                "type": "snapshot",
                "config": snapshot_config or {},
                "frames": [f.to_dict() for f in self._recent],
                "aggregate_series": list(self._aggregate),
            }
            self._subs.append(sub)
        return sub, snapshot

    def unsubscribe(self, sub: Subscriber):
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)
        sub.closed = True

    def publish(self, frame: TelemetryFrame):
        msg = frame.to_dict()
        with self._lock:
            self._recent.append(frame)
            if frame.index % self.downsample == 0:
                self._aggregate.append({"index": frame.index, "value": frame.aggregate})
            subs = list(self._subs)
        for sub in subs:
            sub.offer(msg)

    def publish_alert(self, index: int, firing: bool):
        msg = {"type": "alert", "index": index, "firing": firing}
        with self._lock:
            subs = list(self._subs)
        for sub in subs:
            sub.offer(msg)

    @property
    def aggregate_series(self) -> list:
        with self._lock:
            return list(self._aggregate)

    def recent_frames(self) -> list:
        with self._lock:
            return list(self._recent)


class SessionLogWriter:
    """Writes the header immediately so a stopped session still leaves a valid log."""

    def __init__(self, path, config_dict: dict, config_hash: str):
        self._fh = open(path, "w", encoding="utf-8")
        self._lock = threading.Lock()
        header = {"type": "header", "config": config_dict, "config_hash": config_hash}
        self._fh.write(json.dumps(header) + "\n")

    def write(self, frame: TelemetryFrame):
        with self._lock:
            self._fh.write(json.dumps(frame.to_dict()) + "\n")

    def close(self):
        with self._lock:
            if not self._fh.closed:
                self._fh.flush()
                self._fh.close()


def read_session_log(path) -> tuple:
    """Return (header dict, list of TelemetryFrames) from a session log."""
    header = None
    frames = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if obj.get("type") == "header":
                header = obj
            elif obj.get("type") == "frame":
                frames.append(TelemetryFrame.from_dict(obj))
    if header is None:
        raise ValueError(f"{path}: missing session-log header")
    return header, frames


def is_session_log(path) -> bool:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().strip()
        return bool(first) and json.loads(first).get("type") == "header"
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, AttributeError):
        return False


def samples_from_session_log(path) -> Iterator[IntervalSample]:
    _, frames = read_session_log(path)
    for f in frames:
        yield f.sample
