from socsound.analysis.avalanche import AvalancheStats, avalanche_stats, fit_power_law
from socsound.analysis.spectrum import FloodIndicator, SpectrumReport, ddos_indicator, spectrum
from socsound.analysis.wavelet import WaveletDecomposition, denoise, dwt, idwt

__all__ = [
    "AvalancheStats",
    "avalanche_stats",
    "fit_power_law",
    "FloodIndicator",
    "SpectrumReport",
    "ddos_indicator",
    "spectrum",
    "WaveletDecomposition",
    "denoise",
    "dwt",
    "idwt",
]
