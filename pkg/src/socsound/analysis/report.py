"""Batch analysis of return series: wavelet residuals, spectra, avalanches.

The residual of a series is what remains after subtracting its wavelet
approximation (details-only reconstruction); denoising then shrinks the
residual's detail coefficients. Reports serialize to JSON, per channel,
with bin energies elided above a size cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from socsound.analysis.avalanche import AvalancheStats, avalanche_stats
from socsound.analysis.spectrum import FloodIndicator, SpectrumReport, ddos_indicator, spectrum
from socsound.analysis.wavelet import dwt, denoise, idwt, universal_threshold

DEFAULT_ENERGY_BIN_CAP = 4096


@dataclass
class ChannelAnalysis:
    channel: str
    length: int
    family: str
    levels: int
    residuals: np.ndarray
    denoised: np.ndarray
    detail_energies: list
    approximation_energy: float
    noise_threshold: float
    spectrum: SpectrumReport
    avalanches: AvalancheStats
    flood: FloodIndicator | None = None

    def to_dict(self, energy_bin_cap: int = DEFAULT_ENERGY_BIN_CAP) -> dict:
        return {
            "channel": self.channel,
            "length": self.length,
            "family": self.family,
            "levels": self.levels,
            "residuals": [float(v) for v in self.residuals],
            "denoised": [float(v) for v in self.denoised],
            "detail_energies": [float(e) for e in self.detail_energies],
            "approximation_energy": self.approximation_energy,
            "noise_threshold": self.noise_threshold,
            "spectrum": self.spectrum.to_dict(max_bins=energy_bin_cap),
            "avalanches": self.avalanches.to_dict(),
            "flood": self.flood.to_dict() if self.flood else None,
        }


def wavelet_residuals(series, family: str = "db4", levels: int = 4):
    """series minus its smooth wavelet approximation (details only)."""
    decomp = dwt(series, family=family, levels=levels)
    decomp.details = [np.zeros_like(d) for d in decomp.details]
    smooth = idwt(decomp)
    return np.asarray(series, dtype=float) - smooth


def analyze_channel(channel: str, series, family: str = "db4", levels: int = 4,
                    split_fraction: float = 0.5, activation_threshold: float = 2.0,
                    baseline_series=None) -> ChannelAnalysis:
    """Full analysis of one channel's return series.

    ``baseline_series`` (normal traffic of the same length window) enables
    the flood indicator; both series are cropped to their common tail.
    """
    series = np.asarray(series, dtype=float)
    max_levels = levels
    while max_levels > 1 and series.size < 2 * int(family[2:]) * 2 ** (max_levels - 1):
        max_levels -= 1
    decomp = dwt(series, family=family, levels=max_levels)
    residuals = wavelet_residuals(series, family=family, levels=max_levels)
    spec = spectrum(series, split_fraction=split_fraction)
    flood = None
    if baseline_series is not None:
        baseline_series = np.asarray(baseline_series, dtype=float)
        n = min(series.size, baseline_series.size)
        flood = ddos_indicator(
            spectrum(baseline_series[-n:], split_fraction=split_fraction),
            spectrum(series[-n:], split_fraction=split_fraction),
        )
    return ChannelAnalysis(
        channel=channel,
        length=int(series.size),
        family=family,
        levels=max_levels,
        residuals=residuals,
        denoised=denoise(residuals, family=family, levels=max_levels),
        detail_energies=[float(np.sum(d**2)) for d in decomp.details],
        approximation_energy=float(np.sum(decomp.approximation**2)),
        noise_threshold=universal_threshold(decomp),
        spectrum=spec,
        avalanches=avalanche_stats(series, activation_threshold),
        flood=flood,
    )
