"""FFT energy spectra of return series and the flood-likeness indicator.

Normal traffic shows roughly even energy across the band; a flood both
inflates total energy and pushes it toward the upper end of the spectrum
with a rising trend, which is what the indicator measures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SpectrumReport:
    """One-sided energy spectrum of a mean-removed series.

    ``energies[k]`` carries the total (two-sided) energy attributed to bin
    k = 0..N/2, i.e. interior bins include their conjugate pair, so
    ``sum(x**2) == sum(energies) / N`` (Parseval).
    """

    energies: np.ndarray
    total_energy: float
    high_band_fraction: float
    trend_slope: float
    length: int
    split_fraction: float
    window_fractions: list = field(default_factory=list)

    def to_dict(self, max_bins: int | None = None) -> dict:
        d = {
            "total_energy": self.total_energy,
            "high_band_fraction": self.high_band_fraction,
            "trend_slope": self.trend_slope,
            "length": self.length,
            "split_fraction": self.split_fraction,
            "window_fractions": [float(f) for f in self.window_fractions],
        }
        if max_bins is None or self.energies.size <= max_bins:
            d["energies"] = [float(e) for e in self.energies]
        else:
            d["energies_elided"] = int(self.energies.size)
        return d


def _band_energies(x: np.ndarray):
    """One-sided bin energies with conjugate-pair doubling, after mean removal."""
    n = x.size
    x = x - x.mean()
    mag2 = np.abs(np.fft.rfft(x)) ** 2
    w = np.full(mag2.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    return w * mag2


def _high_fraction(energies: np.ndarray, n: int, split_fraction: float) -> float:
    total = float(energies.sum())
    if total <= 0.0:
        return 0.0  # a constant series has no spectral energy by convention
    # bin k sits at frequency k/n cycles per sample; Nyquist is 0.5
    kmin = split_fraction * n / 2.0
    k = np.arange(energies.size)
    return float(energies[k > kmin].sum()) / total


def spectrum(series, split_fraction: float = 0.5, trend_windows: int = 8) -> SpectrumReport:
    """Energy spectrum plus the high-band fraction and its recent trend.

    Parameters
    ----------
    series : array_like
        Input series, length >= 2. The mean is removed first, so adding a
        constant never changes the report.
    split_fraction : float
        High band starts above split_fraction * Nyquist; in (0, 1).
    trend_windows : int
        The series is cut into this many equal contiguous windows and the
        trend slope is the least-squares slope of their high-band
        fractions against window index.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("series must be one-dimensional with length >= 2")
    if not 0.0 < split_fraction < 1.0:
        raise ValueError(f"split_fraction must be in (0, 1), got {split_fraction}")
    energies = _band_energies(x)
    total = float(energies.sum())
    frac = _high_fraction(energies, x.size, split_fraction)

    windows = max(1, min(int(trend_windows), x.size // 2))
    wlen = x.size // windows
    fractions = []
    for i in range(windows):
        seg = x[i * wlen : (i + 1) * wlen]
        fractions.append(_high_fraction(_band_energies(seg), seg.size, split_fraction))
    if len(fractions) >= 2:
        slope = float(np.polyfit(np.arange(len(fractions)), fractions, 1)[0])
    else:
        slope = 0.0

    return SpectrumReport(
        energies=energies,
        total_energy=total,
        high_band_fraction=frac,
        trend_slope=slope,
        length=x.size,
        split_fraction=split_fraction,
        window_fractions=fractions,
    )


@dataclass(frozen=True)
class FloodIndicator:
    """Energy ratio of current vs baseline window plus the trend direction."""

    ratio: float
    rising: bool

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "rising": self.rising}


def ddos_indicator(baseline: SpectrumReport, current: SpectrumReport) -> FloodIndicator:
    """Compare a current spectrum against a normal-traffic baseline.

    Ratio is current total energy over baseline total energy (floored at
    machine-epsilon scale so an all-quiet baseline cannot blow up);
    ``rising`` reports whether the current high-band trend slopes upward.
    """
    if baseline.length != current.length:
        raise ValueError(
            f"reports cover different window lengths: {baseline.length} vs {current.length}"
        )
    floor = float(np.finfo(float).eps)
    ratio = current.total_energy / max(baseline.total_energy, floor)
    return FloodIndicator(ratio=ratio, rising=current.trend_slope > 0.0)
