"""Session orchestration: capture -> metrics -> audio -> telemetry.

Two execution styles share the same per-tick pipeline:

* ``run_offline`` pulls every sample synchronously and renders audio
  faster than real time; it is a pure function of (input, config, seed).
* ``Session`` runs live: a capture thread hands IntervalSamples over a
  bounded queue, the orchestrator (single writer of session state) turns
  them into frames and parameter updates, and the audio thread renders
  paced blocks into a sink. Slow telemetry subscribers get disconnected
  by the hub, never waited on.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from dataclasses import dataclass, replace

from socsound.audio.engine import AudioEngine, MixerState, RenderResult, render_offline
from socsound.audio.sink import NullSink
from socsound.capture.aggregate import Aggregator, aggregate
from socsound.capture.live import live_sample_stream
from socsound.capture.logs import open_packet_log
from socsound.capture.records import CHANNELS, IntervalSample, ReplaySpec
from socsound.capture.replay import open_replay_source
from socsound.metrics import AlertParams, AlertState, LogReturnVector, ScalerSpec, log_return, update_alert
from socsound.service.config import SessionConfig
from socsound.service.telemetry import (
    SessionLogWriter,
    TelemetryFrame,
    TelemetryHub,
    is_session_log,
    read_session_log,
)

log = logging.getLogger(__name__)

_SENTINEL = object()


def compute_returns(samples, mode: str = "signed"):
    """Per-tick return vectors; the first tick has no predecessor and is zero."""
    out = []
    prev = None
    for s in samples:
        out.append(LogReturnVector.zero(s.index) if prev is None else log_return(prev, s, mode))
        prev = s
    return out


def load_samples(path, config: SessionConfig):
    """Samples from a packet log (pcap/JSONL) or a finished session log."""
    if is_session_log(path):
        _, frames = read_session_log(path)
        return [f.sample for f in frames]
    return list(aggregate(open_packet_log(path, config.local_addresses), config.tick))


def load_session_config(path) -> SessionConfig:
    """Rebuild the config a session log was recorded with.

    Mixer gains changed during the session are restored from the last
    frame so a restart picks up where the operator left the faders.
    """
    header, frames = read_session_log(path)
    config = SessionConfig.from_dict(header["config"])
    if frames:
        config = replace(config, mixer=frames[-1].mixer)
    return config


def write_telemetry(path, config: SessionConfig, frames):
    writer = SessionLogWriter(path, config.to_dict(), config.config_hash())
    try:
        for f in frames:
            writer.write(f)
    finally:
        writer.close()


@dataclass
class OfflineResult:
    samples: list
    returns: list
    frames: list
    alert_transitions: list
    render: RenderResult | None = None


def run_offline(config: SessionConfig, source_path=None, samples=None,
                wav_path=None, telemetry_path=None, speed: float = 1.0,
                audio: bool = True, keep_frames: bool = True) -> OfflineResult:
    """Run the whole pipeline on recorded input, deterministically.

    ``speed`` compresses the audio timeline (tick -> tick/speed seconds)
    without touching the per-tick data or parameter sequence.
    """
    if samples is None:
        samples = load_samples(source_path, config)
    returns = compute_returns(samples, config.mode)

    frames = []
    transitions = []
    alert = AlertState(params=config.alert)
    for s, vec in zip(samples, returns):
        new_alert = update_alert(alert, vec)
        if new_alert.firing != alert.firing:
            transitions.append((s.index, new_alert.firing))
        alert = new_alert
        values = dict(zip(CHANNELS, vec.as_tuple()))
        channels = {ch: config.voices[ch].params_for(values[ch]) for ch in CHANNELS}
        frames.append(TelemetryFrame(index=s.index, sample=s, returns=vec,
                                     channels=channels, mixer=config.mixer,
                                     alert_firing=alert.firing))
    if telemetry_path is not None:
        write_telemetry(telemetry_path, config, frames)

    render = None
    if audio:
        render = render_offline(returns, voice_specs=config.voices, mixer=config.mixer,
                                config=config.engine, seed=config.seed,
                                tick_seconds=config.tick, speed=speed, out_path=wav_path,
                                keep_frames=keep_frames)
    return OfflineResult(samples=list(samples), returns=returns, frames=frames,
                         alert_transitions=transitions, render=render)


@dataclass
class SessionSource:
    """What to monitor: a live interface or a recorded log."""

    interface: str | None = None
    replay: ReplaySpec | None = None

    def __post_init__(self):
        if (self.interface is None) == (self.replay is None):
            raise ValueError("exactly one of interface/replay must be set")


class Session:
    """A running monitoring session (live capture or paced replay)."""

    def __init__(self, config: SessionConfig, source: SessionSource,
                 audio: bool = True, sink=None, log_path=None):
        self.config = config
        self.source = source
        self.audio_enabled = audio
        self.engine = AudioEngine(config.voices, mixer=config.mixer,
                                  config=config.engine, seed=config.seed)
        self.engine.initialize_params(
            {ch: config.voices[ch].params_for(0.0) for ch in CHANNELS})
        self.hub = TelemetryHub(window=config.window, downsample=config.downsample)
        self.taps = {ch: True for ch in CHANNELS}
        self.mixer = config.mixer
        self.alert_state = AlertState(params=config.alert)
        self.underruns = 0
        self.sink = sink if sink is not None else NullSink()
        self._voices = dict(config.voices)
        self._controls = queue.Queue()
        self._samples = queue.Queue(maxsize=256)
        self._stop = threading.Event()
        self._capture_done = threading.Event()
        self.finished = threading.Event()
        self._threads = []
        self._log_writer = None
        if log_path is not None:
            self._log_writer = SessionLogWriter(log_path, config.to_dict(), config.config_hash())
        self._capture_error = None

    # -- lifecycle ---------------------------------------------------------

    def start(self):
        self._threads = [
            threading.Thread(target=self._capture_loop, name="capture", daemon=True),
            threading.Thread(target=self._orchestrate_loop, name="orchestrate", daemon=True),
        ]
        if self.audio_enabled:
            self._threads.append(
                threading.Thread(target=self._audio_loop, name="audio", daemon=True))
        for t in self._threads:
            t.start()
        return self

    def join(self, timeout=None) -> bool:
        """Wait for a finite source to drain; returns True when finished."""
        return self.finished.wait(timeout)

    def stop(self, timeout: float = 5.0):
        self._stop.set()
        for t in self._threads:
            t.join(timeout)
        if self._log_writer is not None:
            self._log_writer.close()
        if self._capture_error is not None:
            raise self._capture_error

    # -- control intake ----------------------------------------------------

    def apply_control(self, message: dict):
        """Queue a control message; the orchestrator applies them in order."""
        self._controls.put(dict(message))

    def snapshot_config(self) -> dict:
        cfg = replace(self.config, mixer=self.mixer, alert=self.alert_state.params,
                      voices=dict(self._voices)).to_dict()
        cfg["taps"] = dict(self.taps)
        return cfg

    def _handle_control(self, msg: dict):
        kind = msg.get("type")
        if kind == "tap":
            ch = msg["channel"]
            if ch not in CHANNELS:
                raise ValueError(f"unknown channel {ch!r}")
            enabled = bool(msg["enabled"])
            self.taps[ch] = enabled
            self.engine.set_tap(ch, enabled)
        elif kind == "mixer":
            state = MixerState(gains=tuple(float(g) for g in msg["gains"]),
                               master=float(msg["master"]))
            self.mixer = state
            self.engine.set_mixer(state)
        elif kind == "scaler":
            ch = msg["channel"]
            spec = self._voices[ch]
            new_scaler = ScalerSpec(float(msg["in_min"]), float(msg["in_max"]),
                                    float(msg["out_min"]), float(msg["out_max"]))
            target = msg.get("target", "gain")
            if target == "gain":
                self._voices[ch] = replace(spec, gain_scaler=new_scaler)
            elif target == "center":
                self._voices[ch] = replace(spec, center_scaler=new_scaler)
            else:
                raise ValueError(f"unknown scaler target {target!r}")
        elif kind == "alert_params":
            params = AlertParams(window=int(msg["window"]),
                                 trigger_count=int(msg["trigger_count"]),
                                 threshold=float(msg["threshold"]))
            self.alert_state = AlertState(params=params)
        else:
            raise ValueError(f"unknown control type {kind!r}")

    # -- threads -----------------------------------------------------------

    def _put_sample(self, sample):
        while not self._stop.is_set():
            try:
                self._samples.put(sample, timeout=0.2)
                return
            except queue.Full:
                continue

    def _interruptible_sleep(self, seconds: float):
        # long recorded gaps must not delay shutdown
        deadline = time.monotonic() + seconds
        while not self._stop.is_set():
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                return
            time.sleep(min(remaining, 0.2))

    def _capture_loop(self):
        try:
            if self.source.interface is not None:
                for s in live_sample_stream(self.source.interface, self.config.tick,
                                            self.config.local_addresses, stop=self._stop):
                    self._put_sample(s)
            else:
                spec = self.source.replay
                if is_session_log(spec.path):
                    _, frames = read_session_log(spec.path)
                    gap = self.config.tick / spec.speed
                    for f in frames:
                        if self._stop.is_set():
                            break
                        self._put_sample(f.sample)
                        self._interruptible_sleep(gap)
                else:
                    agg = Aggregator(self.config.tick)
                    for rec in open_replay_source(spec, self.config.local_addresses,
                                                  sleep=self._interruptible_sleep):
                        if self._stop.is_set():
                            break
                        for s in agg.push(rec):
                            self._put_sample(s)
                    for s in agg.finish():
                        self._put_sample(s)
        except Exception as exc:  # propagate source failures to stop()
            self._capture_error = exc
            log.error("capture failed: %s", exc)
        finally:
            self._capture_done.set()
            self._put_sample(_SENTINEL)

    def _process_sample(self, sample: IntervalSample, prev):
        vec = (LogReturnVector.zero(sample.index) if prev is None
               else log_return(prev, sample, self.config.mode))
        new_alert = update_alert(self.alert_state, vec)
        if new_alert.firing != self.alert_state.firing:
            self.hub.publish_alert(sample.index, new_alert.firing)
        self.alert_state = new_alert
        values = dict(zip(CHANNELS, vec.as_tuple()))
        for ch in CHANNELS:
            params = self._voices[ch].params_for(values[ch], tap_enabled=self.taps[ch])
            self.engine.set_channel_params(ch, params)
        frame = TelemetryFrame(index=sample.index, sample=sample, returns=vec,
                               channels=self.engine.applied_params(), mixer=self.mixer,
                               alert_firing=self.alert_state.firing)
        self.hub.publish(frame)
        if self._log_writer is not None:
            self._log_writer.write(frame)

    def _orchestrate_loop(self):
        prev = None
        while not self._stop.is_set():
            while True:
                try:
                    self._handle_control(self._controls.get_nowait())
                except queue.Empty:
                    break
                except Exception as exc:
                    log.warning("bad control message: %s", exc)
            try:
                sample = self._samples.get(timeout=0.1)
            except queue.Empty:
                continue
            if sample is _SENTINEL:
                break
            self._process_sample(sample, prev)
            prev = sample
        self.finished.set()

    def _audio_loop(self):
        block = self.config.engine.block_size
        seconds_per_block = block / self.config.engine.sample_rate
        next_deadline = time.monotonic() + seconds_per_block
        try:
            while not self._stop.is_set():
                self.sink.submit(self.engine.render(block))
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
                elif -delay > seconds_per_block:
                    # fell a whole block behind real time
                    self.underruns += 1
                    next_deadline = time.monotonic()
                next_deadline += seconds_per_block
        finally:
            self.sink.close()
