"""Avalanche statistics of a return series and power-law exponent fits.

An avalanche is a maximal run of consecutive samples whose magnitude
exceeds the activation threshold; critical dynamics show up as power-law
distributed avalanche volumes, durations and inter-event times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Below this many events an exponent fit is reported as undefined.
MIN_FIT_EVENTS = 10


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares exponent from a log-log complementary-rank plot.

    ``exponent`` is the density exponent alpha (tail P(X >= x) ~ x**-(alpha-1));
    ``n`` is the number of events the fit saw; fit_range the (min, max)
    values used.
    """

    exponent: float
    n: int
    fit_range: tuple

    def to_dict(self) -> dict:
        return {"exponent": self.exponent, "n": self.n,
                "fit_range": [self.fit_range[0], self.fit_range[1]]}


@dataclass
class AvalancheStats:
    volumes: list
    durations: list
    inter_event_times: list
    volume_fit: PowerLawFit | None
    duration_fit: PowerLawFit | None
    inter_event_fit: PowerLawFit | None

    @property
    def count(self) -> int:
        return len(self.volumes)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "volumes": [float(v) for v in self.volumes],
            "durations": [int(d) for d in self.durations],
            "inter_event_times": [int(t) for t in self.inter_event_times],
            "volume_fit": self.volume_fit.to_dict() if self.volume_fit else None,
            "duration_fit": self.duration_fit.to_dict() if self.duration_fit else None,
            "inter_event_fit": self.inter_event_fit.to_dict() if self.inter_event_fit else None,
        }


def fit_power_law(values) -> PowerLawFit | None:
    """Fit an exponent by least squares on log rank vs log value.

    Values are sorted descending and ranked 1..n; the complementary rank
    approximates n * P(X >= x), so the slope b of log(rank) against
    log(value) estimates -(alpha - 1). Returns None below MIN_FIT_EVENTS
    or when the values are degenerate (all equal).
    """
    v = np.asarray(sorted(values, reverse=True), dtype=float)
    if v.size < MIN_FIT_EVENTS or v[0] <= 0 or v[0] == v[-1]:
        return None
    ranks = np.arange(1, v.size + 1, dtype=float)
    slope = float(np.polyfit(np.log(v), np.log(ranks), 1)[0])
    return PowerLawFit(exponent=1.0 - slope, n=int(v.size),
                       fit_range=(float(v[-1]), float(v[0])))


def find_avalanches(series, activation_threshold: float):
    """Return (volumes, durations, start_indices) of above-threshold runs."""
    if not activation_threshold > 0:
        raise ValueError(f"activation threshold must be positive, got {activation_threshold}")
    mag = np.abs(np.asarray(series, dtype=float))
    active = mag > activation_threshold
    volumes, durations, starts = [], [], []
    i = 0
    n = active.size
    while i < n:
        if active[i]:
            j = i
            while j < n and active[j]:
                j += 1
            starts.append(i)
            durations.append(j - i)
            volumes.append(float(mag[i:j].sum()))
            i = j
        else:
            i += 1
    return volumes, durations, starts


def avalanche_stats(series, activation_threshold: float) -> AvalancheStats:
    """Avalanche volumes, durations, inter-event times and their fits.

    Inter-event time is the gap in ticks between successive run starts.
    The sign of the series never matters (magnitudes are used throughout);
    a quiet series yields empty statistics rather than an error.
    """
    volumes, durations, starts = find_avalanches(series, activation_threshold)
    inter_event = [int(b - a) for a, b in zip(starts, starts[1:])]
    return AvalancheStats(
        volumes=volumes,
        durations=durations,
        inter_event_times=inter_event,
        volume_fit=fit_power_law(volumes),
        duration_fit=fit_power_law(durations),
        inter_event_fit=fit_power_law(inter_event),
    )
