"""Sound sources: looped assets, the seeded noise synth, and a test sine."""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

from socsound.audio.assets import load_loop


class LoopVoice:
    """Plays an asset buffer forever, wrapping seamlessly at the loop point."""

    def __init__(self, asset_id: str, sample_rate: float = 48000.0):
        self.asset_id = asset_id
        self.buffer = load_loop(asset_id, sample_rate)
        self._pos = 0

    def render(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0)
        idx = (self._pos + np.arange(n)) % self.buffer.size
        self._pos = (self._pos + n) % self.buffer.size
        return self.buffer[idx]


class NoiseVoice:
    """Seeded white-noise generator processed into a rain-like patter.

    Identical seeds give bit-identical output. ``shaped=False`` bypasses
    the patter processing and yields the raw white noise (diagnostics and
    flatness checks want that).
    """

    def __init__(self, seed: int, sample_rate: float = 48000.0, shaped: bool = True,
                 amplitude: float = 0.2):
        child = np.random.SeedSequence(seed).spawn(2)
        self._rng = np.random.default_rng(child[0])
        self._env_rng = np.random.default_rng(child[1])
        self.sample_rate = sample_rate
        self.shaped = shaped
        self.amplitude = amplitude
        # one-pole smoother for the droplet envelope
        self._env_alpha = 1.0 - np.exp(-1.0 / (0.004 * sample_rate))
        self._env_zi = np.zeros(1)

    def render(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0)
        white = self._rng.standard_normal(n)
        if not self.shaped:
            return self.amplitude * white
        # sparse bursts smoothed into droplets riding on a noise bed
        bursts = (self._env_rng.random(n) < 0.002).astype(float) * 6.0
        a = self._env_alpha
        env, self._env_zi = lfilter([a], [1.0, -(1.0 - a)], bursts, zi=self._env_zi)
        return self.amplitude * white * (0.5 + env)


class SineVoice:
    """Pure tone used to measure the channel filter chain."""

    def __init__(self, freq_hz: float, sample_rate: float = 48000.0, amplitude: float = 0.5):
        self.freq_hz = freq_hz
        self.sample_rate = sample_rate
        self.amplitude = amplitude
        self._n = 0

    def render(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0)
        t = np.arange(self._n, self._n + n) / self.sample_rate
        self._n += n
        return self.amplitude * np.sin(2.0 * np.pi * self.freq_hz * t)


def make_voice(kind: str, sample_rate: float, seed: int):
    """Build a voice from its spec string: ``loop:<asset>``, ``noise``, ``sine:<hz>``."""
    if kind.startswith("loop:"):
        return LoopVoice(kind.split(":", 1)[1], sample_rate)
    if kind == "noise":
        return NoiseVoice(seed, sample_rate)
    if kind == "noise:raw":
        return NoiseVoice(seed, sample_rate, shaped=False)
    if kind.startswith("sine:"):
        return SineVoice(float(kind.split(":", 1)[1]), sample_rate)
    raise ValueError(f"unknown voice kind {kind!r}")
