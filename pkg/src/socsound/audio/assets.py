"""Procedurally generated ambient loop assets.

The loop voices want countryside-style textures with broad noise spectra.
Rather than shipping recordings, each asset is synthesized once from a
fixed seed: noise is shaped in the frequency domain and inverted with a
periodic boundary, so the loop point is seamless by construction. Any
amplitude modulation uses whole numbers of cycles per loop for the same
reason.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

_ASSET_SEEDS = {"stream": 101, "crickets": 202, "wind": 303}

ASSET_NAMES = tuple(sorted(_ASSET_SEEDS))
DEFAULT_LOOP_SECONDS = 2.0


class AssetError(Exception):
    """Unknown or malformed loop asset."""


def _circular_noise(rng, length: int, sample_rate: float, envelope) -> np.ndarray:
    """Random-phase noise with a magnitude envelope over frequency."""
    freqs = np.fft.rfftfreq(length, d=1.0 / sample_rate)
    mag = envelope(freqs)
    spec = mag * (rng.standard_normal(freqs.size) + 1j * rng.standard_normal(freqs.size))
    spec[0] = 0.0
    return np.fft.irfft(spec, n=length)


def _normalize(x: np.ndarray, rms: float = 0.15) -> np.ndarray:
    cur = float(np.sqrt(np.mean(x**2)))
    if cur > 0:
        x = x * (rms / cur)
    return np.clip(x, -0.95, 0.95)


def _am(length: int, cycles: int, depth: float, phase: float = 0.0) -> np.ndarray:
    t = np.arange(length) / length
    return 1.0 - depth * 0.5 * (1.0 + np.sin(2.0 * np.pi * cycles * t + phase))


def _band(freqs, lo, hi, rolloff=2.0):
    mag = np.ones_like(freqs)
    below = freqs < lo
    above = freqs > hi
    with np.errstate(divide="ignore"):
        mag[below] = (freqs[below] / lo) ** rolloff
        mag[above] = (hi / freqs[above]) ** rolloff
    mag[freqs == 0] = 0.0
    return mag


def _make_stream(rng, length, rate):
    # burbling water: low-mid noise with gentle periodic wobble
    x = _circular_noise(rng, length, rate, lambda f: _band(f, 150.0, 1800.0, 1.5))
    x *= _am(length, cycles=3, depth=0.25)
    x *= _am(length, cycles=7, depth=0.15, phase=1.3)
    return _normalize(x)


def _make_crickets(rng, length, rate):
    # high narrowband chirps pulsing several times per loop
    x = _circular_noise(rng, length, rate, lambda f: _band(f, 3200.0, 5200.0, 4.0))
    x *= _am(length, cycles=12, depth=0.85)
    bed = _circular_noise(rng, length, rate, lambda f: _band(f, 400.0, 2500.0, 2.0))
    return _normalize(x + 0.25 * bed)


def _make_wind(rng, length, rate):
    # broad low rumble with a slow swell
    x = _circular_noise(rng, length, rate, lambda f: _band(f, 60.0, 700.0, 1.2))
    x *= _am(length, cycles=2, depth=0.5)
    return _normalize(x)


_BUILDERS = {"stream": _make_stream, "crickets": _make_crickets, "wind": _make_wind}


@lru_cache(maxsize=32)
def load_loop(asset_id: str, sample_rate: float = 48000.0,
              seconds: float = DEFAULT_LOOP_SECONDS) -> np.ndarray:
    """Return the mono loop buffer for an asset id; raises AssetError if unknown."""
    if asset_id not in _BUILDERS:
        raise AssetError(f"no such loop asset {asset_id!r}; have {ASSET_NAMES}")
    length = int(round(sample_rate * seconds))
    rng = np.random.default_rng(_ASSET_SEEDS[asset_id])
    buf = _BUILDERS[asset_id](rng, length, sample_rate)
    buf.setflags(write=False)
    return buf
