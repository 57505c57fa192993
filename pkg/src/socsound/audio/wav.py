"""16-bit PCM stereo WAV reading/writing (bit-exact for golden tests)."""

from __future__ import annotations

import wave

import numpy as np


def pcm16(frames: np.ndarray) -> np.ndarray:
    """Float frames in [-1, 1] to little-endian 16-bit PCM."""
    return np.rint(np.clip(frames, -1.0, 1.0) * 32767.0).astype("<i2")


def write_wav(path, stereo: np.ndarray, sample_rate: int):
    """Write float stereo frames (shape (n, 2), values in [-1, 1]) as 16-bit PCM."""
    if stereo.ndim != 2 or stereo.shape[1] != 2:
        raise ValueError(f"expected (n, 2) stereo frames, got {stereo.shape}")
    pcm = pcm16(stereo)
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(2)
        fh.setsampwidth(2)
        fh.setframerate(int(sample_rate))
        fh.writeframes(pcm.tobytes())


def read_wav(path):
    """Read a 16-bit PCM WAV back into float frames in [-1, 1]; returns (frames, rate)."""
    with wave.open(str(path), "rb") as fh:
        if fh.getsampwidth() != 2:
            raise ValueError("only 16-bit PCM supported")
        channels = fh.getnchannels()
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    data = np.frombuffer(raw, dtype="<i2").astype(float) / 32767.0
    return data.reshape(-1, channels), rate
