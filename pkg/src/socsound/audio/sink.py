"""Output sinks behind a narrow submit-block boundary.

The renderer only ever calls ``submit(block)`` and ``close()``; whether
blocks go to a host audio device, a WAV file, or nowhere is the sink's
problem. A missing device backend degrades to the file sink with a
warning rather than killing the session.
"""

from __future__ import annotations

import logging

import numpy as np

from socsound.audio.wav import pcm16

log = logging.getLogger(__name__)


class AudioDeviceUnavailable(Exception):
    pass


class NullSink:
    def submit(self, block: np.ndarray):
        pass

    def close(self):
        pass


class WavFileSink:
    """Streams submitted blocks straight into a 16-bit PCM WAV.

    Constant memory, so it can absorb hours of live fallback audio; the
    RIFF header is finalized on close.
    """

    def __init__(self, path, sample_rate: int):
        import wave

        self.path = path
        self.sample_rate = sample_rate
        self._fh = wave.open(str(path), "wb")
        self._fh.setnchannels(2)
        self._fh.setsampwidth(2)
        self._fh.setframerate(int(sample_rate))

    def submit(self, block: np.ndarray):
        self._fh.writeframes(pcm16(block).tobytes())

    def close(self):
        self._fh.close()


class DeviceSink:
    """Plays blocks on the host audio device (needs the sounddevice package)."""

    def __init__(self, sample_rate: int, block_size: int):
        try:
            import sounddevice  # optional dependency, absent on headless hosts
        except ImportError as exc:
            raise AudioDeviceUnavailable(f"no audio device backend: {exc}") from exc
        self._stream = sounddevice.OutputStream(
            samplerate=sample_rate, channels=2, blocksize=block_size, dtype="float32"
        )
        self._stream.start()

    def submit(self, block: np.ndarray):
        self._stream.write(block.astype(np.float32))

    def close(self):
        self._stream.stop()
        self._stream.close()


def open_sink(kind: str, sample_rate: int, block_size: int, wav_path=None):
    """Build a sink: "device" (falling back to file), "file", or "null"."""
    if kind == "null":
        return NullSink()
    if kind == "file":
        if wav_path is None:
            raise ValueError("file sink needs wav_path")
        return WavFileSink(wav_path, sample_rate)
    if kind == "device":
        try:
            return DeviceSink(sample_rate, block_size)
        except AudioDeviceUnavailable as exc:
            if wav_path is not None:
                log.warning("audio device unavailable (%s); rendering to %s", exc, wav_path)
                return WavFileSink(wav_path, sample_rate)
            log.warning("audio device unavailable (%s); audio disabled", exc)
            return NullSink()
    raise ValueError(f"unknown sink kind {kind!r}")
