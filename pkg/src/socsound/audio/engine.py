"""Four-voice soundscape renderer.

Each traffic variable drives one voice: the scaled log return sets the
voice's gain target and retunes its band-pass (higher values are louder
and brighter). Parameter moves ramp linearly over a short window so a
spike never lands as a click, and the stereo mix is soft-limited to
[-1, 1]. Offline rendering is a pure function of (inputs, config, seed).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from socsound.audio.filters import BandPass
from socsound.audio.voices import make_voice
from socsound.capture.records import CHANNELS
from socsound.metrics import ScalerSpec, scale

DEFAULT_GAIN_SCALER = ScalerSpec(0.0, 4.0, 0.1, 1.0)
DEFAULT_CENTER_SCALER = ScalerSpec(0.0, 4.0, 200.0, 4000.0)
DEFAULT_Q_BOUNDS = (3.0, 12.0)
DEFAULT_VOICE_KINDS = {"bs": "loop:stream", "ps": "loop:crickets",
                       "br": "loop:wind", "pr": "noise"}


@dataclass(frozen=True)
class ChannelParams:
    """Applied per-voice controls; a disabled tap mutes the voice but the
    parameter values themselves stay reported."""

    gain_target: float
    center_hz: float
    q: float
    tap_enabled: bool = True

    def validate(self, nyquist: float):
        vals = (self.gain_target, self.center_hz, self.q)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite channel params: {self}")
        if not 0.0 <= self.gain_target <= 1.0:
            raise ValueError(f"gain target {self.gain_target} outside [0, 1]")
        if not 0.0 < self.center_hz < nyquist:
            raise ValueError(f"filter center {self.center_hz} outside (0, {nyquist})")
        if not self.q > 0:
            raise ValueError(f"resonance {self.q} must be positive")

    def to_dict(self) -> dict:
        return {"gain": self.gain_target, "center_hz": self.center_hz,
                "q": self.q, "tap": self.tap_enabled}


@dataclass(frozen=True)
class VoiceSpec:
    """Binding of one traffic variable to a sound source and its scalers."""

    channel: str
    kind: str
    gain_scaler: ScalerSpec = DEFAULT_GAIN_SCALER
    center_scaler: ScalerSpec = DEFAULT_CENTER_SCALER
    q_bounds: tuple = DEFAULT_Q_BOUNDS
    pan: float = 0.0

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}")
        if not -1.0 <= self.pan <= 1.0:
            raise ValueError(f"pan {self.pan} outside [-1, 1]")
        if not (0.0 <= self.gain_scaler.out_min and self.gain_scaler.out_max <= 1.0):
            raise ValueError("gain scaler output must stay within [0, 1]")
        if not 0 < self.q_bounds[0] <= self.q_bounds[1]:
            raise ValueError(f"bad resonance bounds {self.q_bounds}")

    def params_for(self, value: float, tap_enabled: bool = True) -> ChannelParams:
        """Scale one log-return value into the voice's control targets.

        Resonance tracks the same input range as the filter center (the
        mapping is a tunable; brighter and sharper together).
        """
        q_scaler = ScalerSpec(self.center_scaler.in_min, self.center_scaler.in_max,
                              self.q_bounds[0], self.q_bounds[1])
        return ChannelParams(
            gain_target=scale(value, self.gain_scaler),
            center_hz=scale(value, self.center_scaler),
            q=scale(value, q_scaler),
            tap_enabled=tap_enabled,
        )


def default_voice_specs(pan_spread: float = 0.8) -> dict:
    """One voice per variable, panned across the stereo field."""
    pans = np.linspace(-pan_spread, pan_spread, len(CHANNELS))
    return {
        ch: VoiceSpec(channel=ch, kind=DEFAULT_VOICE_KINDS[ch], pan=float(p))
        for ch, p in zip(CHANNELS, pans)
    }


@dataclass(frozen=True)
class MixerState:
    """Operator balance: per-channel gains (bs, ps, br, pr order) and master."""

    gains: tuple = (1.0, 1.0, 1.0, 1.0)
    master: float = 0.7

    def __post_init__(self):
        if len(self.gains) != len(CHANNELS):
            raise ValueError(f"need {len(CHANNELS)} channel gains, got {len(self.gains)}")
        for g in (*self.gains, self.master):
            if not 0.0 <= g <= 1.0:
                raise ValueError(f"mixer gain {g} outside [0, 1]")

    def to_dict(self) -> dict:
        return {"gains": list(self.gains), "master": self.master}

    @classmethod
    def from_dict(cls, d: dict) -> "MixerState":
        return cls(gains=tuple(float(g) for g in d["gains"]), master=float(d["master"]))


@dataclass(frozen=True)
class EngineConfig:
    sample_rate: int = 48000
    block_size: int = 256
    ramp_ms: float = 50.0
    warmup_seconds: float = 1.0
    clip_knee: float = 0.8

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2.0

    @property
    def ramp_samples(self) -> int:
        return max(1, int(round(self.ramp_ms / 1000.0 * self.sample_rate)))


def soft_clip(x: np.ndarray, knee: float = 0.8) -> np.ndarray:
    """Identity below the knee, tanh-shaped compression above, bounded by 1."""
    ax = np.abs(x)
    over = ax > knee
    if not np.any(over):
        return x
    out = x.copy()
    span = 1.0 - knee
    out[over] = np.sign(x[over]) * (knee + span * np.tanh((ax[over] - knee) / span))
    return out


class _Ramp:
    """Linear per-sample glide toward the most recent target."""

    def __init__(self, value: float, ramp_samples: int):
        self.value = float(value)
        self.target = float(value)
        self._step = 0.0
        self._ramp_samples = ramp_samples

    def set_target(self, target: float):
        self.target = float(target)
        if self.target != self.value:
            self._step = (self.target - self.value) / self._ramp_samples
        else:
            self._step = 0.0

    def snap(self, value: float):
        self.value = self.target = float(value)
        self._step = 0.0

    def vector(self, n: int) -> np.ndarray:
        if self._step == 0.0:
            return np.full(n, self.value)
        vals = self.value + self._step * np.arange(1, n + 1)
        if self._step > 0:
            np.minimum(vals, self.target, out=vals)
        else:
            np.maximum(vals, self.target, out=vals)
        self.value = float(vals[-1])
        if self.value == self.target:
            self._step = 0.0
        return vals

    def advance(self, n: int) -> float:
        if self._step != 0.0:
            nxt = self.value + self._step * n
            if (self._step > 0 and nxt >= self.target) or (self._step < 0 and nxt <= self.target):
                nxt = self.target
                self._step = 0.0
            self.value = nxt
        return self.value


class _Channel:
    def __init__(self, spec: VoiceSpec, config: EngineConfig, seed: int):
        self.spec = spec
        self.voice = make_voice(spec.kind, config.sample_rate, seed)
        initial = spec.params_for(0.0)
        self.applied = initial
        rs = config.ramp_samples
        self.gain = _Ramp(0.0, rs)
        self.center = _Ramp(initial.center_hz, rs)
        self.q = _Ramp(initial.q, rs)
        self.filter = BandPass(config.sample_rate, initial.center_hz, initial.q)
        theta = (spec.pan + 1.0) * np.pi / 4.0
        self.pan_l = float(np.cos(theta))
        self.pan_r = float(np.sin(theta))


class AudioEngine:
    """Mixes the four modulated voices down to one stereo stream.

    Control updates only set ramp targets; the render path itself never
    blocks or allocates anything beyond its working blocks.
    """

    def __init__(self, voice_specs: dict, mixer: MixerState | None = None,
                 config: EngineConfig | None = None, seed: int = 0):
        self.config = config or EngineConfig()
        if set(voice_specs) != set(CHANNELS):
            raise ValueError(
                f"need exactly one voice per variable {CHANNELS}, got {sorted(voice_specs)}"
            )
        seeds = np.random.SeedSequence(seed).generate_state(len(CHANNELS))
        self._channels = {
            ch: _Channel(voice_specs[ch], self.config, int(seeds[i]))
            for i, ch in enumerate(CHANNELS)
        }
        rs = self.config.ramp_samples
        mixer = mixer or MixerState()
        self._mix = {ch: _Ramp(g, rs) for ch, g in zip(CHANNELS, mixer.gains)}
        self._master = _Ramp(mixer.master, rs)
        self.mixer = mixer
        # control writers and the render context exchange parameter
        # snapshots under this lock; holders are a few microseconds
        self._lock = threading.RLock()

    def set_channel_params(self, channel: str, params: ChannelParams):
        if channel not in self._channels:
            raise ValueError(f"unknown channel {channel!r}")
        params.validate(self.config.nyquist)
        with self._lock:
            c = self._channels[channel]
            c.applied = params
            c.gain.set_target(params.gain_target if params.tap_enabled else 0.0)
            c.center.set_target(params.center_hz)
            c.q.set_target(params.q)

    def initialize_params(self, params_by_channel: dict):
        """Hard-set applied params with no ramp (session start)."""
        with self._lock:
            for channel, params in params_by_channel.items():
                c = self._channels[channel]
                params.validate(self.config.nyquist)
                c.applied = params
                c.gain.snap(params.gain_target if params.tap_enabled else 0.0)
                c.center.snap(params.center_hz)
                c.q.snap(params.q)
                c.filter.retune(params.center_hz, params.q)

    def set_tap(self, channel: str, enabled: bool):
        if channel not in self._channels:
            raise ValueError(f"unknown channel {channel!r}")
        with self._lock:
            c = self._channels[channel]
            self.set_channel_params(channel, ChannelParams(
                gain_target=c.applied.gain_target, center_hz=c.applied.center_hz,
                q=c.applied.q, tap_enabled=enabled))

    def set_mixer(self, mixer: MixerState):
        with self._lock:
            self.mixer = mixer
            for ch, g in zip(CHANNELS, mixer.gains):
                self._mix[ch].set_target(g)
            self._master.set_target(mixer.master)

    def applied_params(self) -> dict:
        with self._lock:
            return {ch: self._channels[ch].applied for ch in CHANNELS}

    def render(self, n: int) -> np.ndarray:
        """Render n frames of stereo output in [-1, 1]."""
        out = np.zeros((n, 2))
        if n <= 0:
            return out
        with self._lock:
            for ch in CHANNELS:
                c = self._channels[ch]
                x = c.voice.render(n) * c.gain.vector(n)
                c.filter.retune(c.center.advance(n), c.q.advance(n))
                y = c.filter.process(x) * self._mix[ch].vector(n)
                out[:, 0] += y * c.pan_l
                out[:, 1] += y * c.pan_r
            out *= self._master.vector(n)[:, None]
        return soft_clip(out, self.config.clip_knee)

    def render_seconds(self, seconds: float) -> np.ndarray:
        frames = int(round(seconds * self.config.sample_rate))
        return self.render_frames(frames)

    def render_frames(self, frames: int) -> np.ndarray:
        chunks = []
        left = frames
        bs = self.config.block_size
        while left > 0:
            take = min(bs, left)
            chunks.append(self.render(take))
            left -= take
        if not chunks:
            return np.zeros((0, 2))
        return np.vstack(chunks)


@dataclass
class RenderResult:
    frames: np.ndarray
    sample_rate: int
    params_trace: list = field(default_factory=list)


def render_offline(returns, voice_specs: dict | None = None, mixer: MixerState | None = None,
                   config: EngineConfig | None = None, seed: int = 0,
                   tick_seconds: float = 1.0, speed: float = 1.0,
                   out_path=None, keep_frames: bool = True) -> RenderResult:
    """Deterministically render a whole session's audio from its return vectors.

    Each tick occupies tick_seconds / speed of audio (accelerated
    re-audition compresses time without changing the per-tick parameter
    sequence). A warmup stretch at the initial parameters precedes the
    first tick; an empty input renders just the warmup. With an out_path
    the WAV is streamed to disk; ``keep_frames=False`` then drops the
    in-memory copy (long sessions).
    """
    if not speed > 0:
        raise ValueError(f"speed must be positive, got {speed}")
    config = config or EngineConfig()
    voice_specs = voice_specs or default_voice_specs()
    engine = AudioEngine(voice_specs, mixer=mixer, config=config, seed=seed)
    engine.initialize_params({ch: voice_specs[ch].params_for(0.0) for ch in CHANNELS})

    sink = None
    if out_path is not None:
        from socsound.audio.sink import WavFileSink

        sink = WavFileSink(out_path, config.sample_rate)

    trace = []
    chunks = []

    def emit(block):
        if sink is not None:
            sink.submit(block)
        if keep_frames:
            chunks.append(block)

    try:
        emit(engine.render_frames(int(round(config.warmup_seconds * config.sample_rate))))
        frames_per_tick = max(1, int(round(tick_seconds / speed * config.sample_rate)))
        for vec in returns:
            values = vec.as_tuple() if hasattr(vec, "as_tuple") else tuple(vec)
            for ch, value in zip(CHANNELS, values):
                spec = voice_specs[ch]
                tap = engine.applied_params()[ch].tap_enabled
                engine.set_channel_params(ch, spec.params_for(value, tap_enabled=tap))
            trace.append({ch: engine.applied_params()[ch].to_dict() for ch in CHANNELS})
            emit(engine.render_frames(frames_per_tick))
    finally:
        if sink is not None:
            sink.close()
    frames = np.vstack(chunks) if chunks else np.zeros((0, 2))
    return RenderResult(frames=frames, sample_rate=config.sample_rate, params_trace=trace)
