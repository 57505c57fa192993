"""Figure rendering for analysis reports (written next to the JSON/CSV)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _grid(n):
    fig, axes = plt.subplots(n, 1, figsize=(9, 2.2 * n), sharex=True, squeeze=False)
    return fig, axes[:, 0]


def render_figures(analyses: dict, out_dir) -> list:
    """Write residuals/denoised/spectrum/avalanche figures; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    channels = list(analyses)
    paths = []

    fig, axes = _grid(len(channels))
    for ax, ch in zip(axes, channels):
        ax.plot(analyses[ch].residuals, lw=0.6)
        ax.set_ylabel(ch)
    axes[-1].set_xlabel("tick")
    fig.suptitle("wavelet residuals of log returns")
    path = out_dir / "residuals.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    paths.append(path)

    fig, axes = _grid(len(channels))
    for ax, ch in zip(axes, channels):
        ax.plot(analyses[ch].denoised, lw=0.6, color="tab:green")
        ax.set_ylabel(ch)
    axes[-1].set_xlabel("tick")
    fig.suptitle("denoised residuals")
    path = out_dir / "denoised.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    paths.append(path)

    fig, axes = _grid(len(channels))
    for ax, ch in zip(axes, channels):
        e = analyses[ch].spectrum.energies
        freqs = np.linspace(0.0, 0.5, e.size)
        ax.semilogy(freqs, np.maximum(e, 1e-12), lw=0.7, color="tab:purple")
        ax.set_ylabel(ch)
    axes[-1].set_xlabel("frequency (cycles/tick)")
    fig.suptitle("energy spectrum")
    path = out_dir / "spectrum.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(6, 5))
    for ch in channels:
        vols = sorted(analyses[ch].avalanches.volumes, reverse=True)
        if vols:
            ax.loglog(vols, np.arange(1, len(vols) + 1), ".", label=ch)
    ax.set_xlabel("avalanche volume")
    ax.set_ylabel("complementary rank")
    if any(analyses[ch].avalanches.volumes for ch in channels):
        ax.legend()
    path = out_dir / "avalanches.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    paths.append(path)

    return paths
