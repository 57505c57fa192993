"""Second-order band-pass filtering with block-wise parameter updates."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter


def bandpass_coeffs(center_hz: float, q: float, sample_rate: float):
    """Biquad band-pass (constant 0 dB peak gain at the center frequency).

    Standard audio-cookbook design: alpha = sin(w0)/(2Q), numerator
    (alpha, 0, -alpha), denominator (1+alpha, -2cos(w0), 1-alpha).
    """
    nyquist = sample_rate / 2.0
    if not 0.0 < center_hz < nyquist:
        raise ValueError(f"center {center_hz} Hz outside (0, {nyquist})")
    if not q > 0:
        raise ValueError(f"resonance must be positive, got {q}")
    w0 = 2.0 * math.pi * center_hz / sample_rate
    alpha = math.sin(w0) / (2.0 * q)
    a0 = 1.0 + alpha
    b = np.array([alpha, 0.0, -alpha]) / a0
    a = np.array([1.0, -2.0 * math.cos(w0) / a0, (1.0 - alpha) / a0])
    return b, a


def design_gain(center_hz: float, q: float, sample_rate: float, at_hz: float) -> float:
    """Magnitude response of the design at a probe frequency."""
    b, a = bandpass_coeffs(center_hz, q, sample_rate)
    z = np.exp(-1j * 2.0 * math.pi * at_hz / sample_rate)
    num = b[0] + b[1] * z + b[2] * z * z
    den = a[0] + a[1] * z + a[2] * z * z
    return float(np.abs(num / den))


class BandPass:
    """Stateful band-pass; coefficients refresh whenever center/Q move.

    Parameter moves are small per block (the engine ramps them), so the
    per-block coefficient step stays click-free while state carries over.
    """

    def __init__(self, sample_rate: float, center_hz: float, q: float):
        self.sample_rate = sample_rate
        self._center = None
        self._q = None
        self._b = None
        self._a = None
        self._zi = np.zeros(2)
        self.retune(center_hz, q)

    def retune(self, center_hz: float, q: float):
        if center_hz == self._center and q == self._q:
            return
        self._b, self._a = bandpass_coeffs(center_hz, q, self.sample_rate)
        self._center = center_hz
        self._q = q

    def process(self, block: np.ndarray) -> np.ndarray:
        out, self._zi = lfilter(self._b, self._a, block, zi=self._zi)
        return out

    def reset(self):
        self._zi = np.zeros(2)
