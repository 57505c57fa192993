"""Session configuration: defaults, INI file loading, JSON round-tripping.

The config file is plain INI (key = value under [section] headers); any
CLI flag with the same meaning wins over the file. The console listen
address can additionally be overridden with the SOCSOUND_LISTEN
environment variable.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from dataclasses import dataclass, field, replace

from socsound.audio.engine import (
    DEFAULT_CENTER_SCALER,
    DEFAULT_GAIN_SCALER,
    DEFAULT_Q_BOUNDS,
    EngineConfig,
    MixerState,
    VoiceSpec,
    default_voice_specs,
)
from socsound.capture.records import CHANNELS
from socsound.metrics import MODES, AlertParams, ScalerSpec

LISTEN_ENV_VAR = "SOCSOUND_LISTEN"
DEFAULT_LISTEN = "127.0.0.1:8765"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SessionConfig:
    tick: float = 1.0
    mode: str = "signed"
    voices: dict = field(default_factory=default_voice_specs)
    mixer: MixerState = field(default_factory=MixerState)
    alert: AlertParams = field(default_factory=AlertParams)
    engine: EngineConfig = field(default_factory=EngineConfig)
    seed: int = 0
    listen: str = DEFAULT_LISTEN
    downsample: int = 5
    window: int = 300
    local_addresses: tuple = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown return mode {self.mode!r}")
        if not self.tick > 0:
            raise ConfigError(f"tick must be positive, got {self.tick}")
        if self.downsample < 1 or self.window < 1:
            raise ConfigError("downsample and window must be >= 1")
        if set(self.voices) != set(CHANNELS):
            raise ConfigError(
                f"exactly one voice per variable {CHANNELS} required, got {sorted(self.voices)}"
            )
        for ch, spec in self.voices.items():
            if spec.channel != ch:
                raise ConfigError(f"voice under key {ch!r} is bound to {spec.channel!r}")

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "mode": self.mode,
            "seed": self.seed,
            "listen": self.listen,
            "downsample": self.downsample,
            "window": self.window,
            "local_addresses": list(self.local_addresses),
            "mixer": self.mixer.to_dict(),
            "alert": {"window": self.alert.window, "trigger_count": self.alert.trigger_count,
                      "threshold": self.alert.threshold},
            "audio": {"sample_rate": self.engine.sample_rate, "block_size": self.engine.block_size,
                      "ramp_ms": self.engine.ramp_ms, "warmup_seconds": self.engine.warmup_seconds},
            "voices": {
                ch: {
                    "kind": v.kind,
                    "pan": v.pan,
                    "gain_scaler": _scaler_list(v.gain_scaler),
                    "center_scaler": _scaler_list(v.center_scaler),
                    "q_bounds": list(v.q_bounds),
                }
                for ch, v in sorted(self.voices.items())
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        voices = {}
        for ch, v in d.get("voices", {}).items():
            voices[ch] = VoiceSpec(
                channel=ch,
                kind=v["kind"],
                pan=float(v.get("pan", 0.0)),
                gain_scaler=_scaler_from(v.get("gain_scaler"), DEFAULT_GAIN_SCALER),
                center_scaler=_scaler_from(v.get("center_scaler"), DEFAULT_CENTER_SCALER),
                q_bounds=tuple(v.get("q_bounds", DEFAULT_Q_BOUNDS)),
            )
        alert = d.get("alert", {})
        audio = d.get("audio", {})
        return cls(
            tick=float(d.get("tick", 1.0)),
            mode=d.get("mode", "signed"),
            voices=voices or default_voice_specs(),
            mixer=MixerState.from_dict(d["mixer"]) if "mixer" in d else MixerState(),
            alert=AlertParams(
                window=int(alert.get("window", 30)),
                trigger_count=int(alert.get("trigger_count", 10)),
                threshold=float(alert.get("threshold", 2.0)),
            ),
            engine=EngineConfig(
                sample_rate=int(audio.get("sample_rate", 48000)),
                block_size=int(audio.get("block_size", 256)),
                ramp_ms=float(audio.get("ramp_ms", 50.0)),
                warmup_seconds=float(audio.get("warmup_seconds", 1.0)),
            ),
            seed=int(d.get("seed", 0)),
            listen=d.get("listen", DEFAULT_LISTEN),
            downsample=int(d.get("downsample", 5)),
            window=int(d.get("window", 300)),
            local_addresses=tuple(d.get("local_addresses", ())),
        )

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _scaler_list(s: ScalerSpec):
    return [s.in_min, s.in_max, s.out_min, s.out_max]


def _scaler_from(vals, default: ScalerSpec) -> ScalerSpec:
    if vals is None:
        return default
    return ScalerSpec(*[float(v) for v in vals])


def _parse_floats(raw: str):
    return [float(p.strip()) for p in raw.split(",") if p.strip()]


def load_config(path=None, overrides: dict | None = None) -> SessionConfig:
    """Load an INI config file; missing path means pure defaults.

    ``overrides`` (flag values) replace file values key by key; the
    SOCSOUND_LISTEN environment variable replaces the listen address
    unless a flag already did.
    """
    cfg = configparser.ConfigParser()
    if path is not None:
        read = cfg.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path}")

    def get(section, key, fallback):
        return cfg.get(section, key, fallback=fallback)

    voices = {}
    for ch in CHANNELS:
        section = f"voice.{ch}"
        default = default_voice_specs()[ch]
        if cfg.has_section(section):
            gain = _parse_floats(get(section, "gain_scaler", "")) or _scaler_list(default.gain_scaler)
            center = _parse_floats(get(section, "center_scaler", "")) or _scaler_list(default.center_scaler)
            qb = _parse_floats(get(section, "q_bounds", "")) or list(default.q_bounds)
            voices[ch] = VoiceSpec(
                channel=ch,
                kind=get(section, "kind", default.kind),
                pan=float(get(section, "pan", default.pan)),
                gain_scaler=ScalerSpec(*gain),
                center_scaler=ScalerSpec(*center),
                q_bounds=tuple(qb),
            )
        else:
            voices[ch] = default

    mixer_gains = _parse_floats(get("mixer", "gains", "")) or [1.0, 1.0, 1.0, 1.0]
    config = SessionConfig(
        tick=float(get("session", "tick", 1.0)),
        mode=get("session", "mode", "signed"),
        voices=voices,
        mixer=MixerState(gains=tuple(mixer_gains), master=float(get("mixer", "master", 0.7))),
        alert=AlertParams(
            window=int(get("alert", "window", 30)),
            trigger_count=int(get("alert", "trigger_count", 10)),
            threshold=float(get("alert", "threshold", 2.0)),
        ),
        engine=EngineConfig(
            sample_rate=int(get("audio", "sample_rate", 48000)),
            block_size=int(get("audio", "block_size", 256)),
            ramp_ms=float(get("audio", "ramp_ms", 50.0)),
            warmup_seconds=float(get("audio", "warmup_seconds", 1.0)),
        ),
        seed=int(get("session", "seed", 0)),
        listen=get("session", "listen", DEFAULT_LISTEN),
        downsample=int(get("session", "downsample", 5)),
        window=int(get("session", "window", 300)),
        local_addresses=tuple(
            p.strip() for p in get("session", "local_addresses", "").split(",") if p.strip()
        ),
    )

    overrides = dict(overrides or {})
    if LISTEN_ENV_VAR in os.environ and "listen" not in overrides:
        overrides["listen"] = os.environ[LISTEN_ENV_VAR]
    if overrides:
        config = replace(config, **overrides)
    return config
