"""Log returns of traffic variables, range scaling, and the instability alert.

The log return of two successive samples of a variable v is
``ln(v(t')) - ln(v(t))``; values near zero mean steady state, large
magnitudes mark relaxation-scale jumps.  Zero counts are floored to 1
before the log so silent intervals stay finite (silent -> silent maps
to a return of 0).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from socsound.capture.records import CHANNELS, IntervalSample

#: Return-vector modes: raw signed returns, or their squares (direction-blind).
MODES = ("signed", "squared")


@dataclass(frozen=True)
class LogReturnVector:
    """Per-tick log returns of (bs, ps, br, pr); squared mode keeps all >= 0."""

    index: int
    rbs: float
    rps: float
    rbr: float
    rpr: float

    def as_tuple(self):
        return (self.rbs, self.rps, self.rbr, self.rpr)

    @classmethod
    def zero(cls, index: int) -> "LogReturnVector":
        return cls(index, 0.0, 0.0, 0.0, 0.0)


def _floor1(v: float) -> float:
    # ln 0 is undefined; clamping counts to >= 1 keeps returns finite and
    # preserves order-of-magnitude semantics for counts >= 1.
    return v if v > 1 else 1.0


def log_return(prev: IntervalSample, next: IntervalSample, mode: str = "signed") -> LogReturnVector:
    """Log returns of the four traffic variables between consecutive samples.

    ``mode="squared"`` squares each component, discarding direction.
    Raises ValueError unless ``next`` immediately follows ``prev``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if next.index != prev.index + 1:
        raise ValueError(
            f"samples not consecutive: {prev.index} -> {next.index}"
        )
    comps = []
    for name in CHANNELS:
        r = math.log(_floor1(getattr(next, name))) - math.log(_floor1(getattr(prev, name)))
        comps.append(r * r if mode == "squared" else r)
    return LogReturnVector(next.index, *comps)


@dataclass(frozen=True)
class ScalerSpec:
    """Affine map from [in_min, in_max] onto [out_min, out_max], clamping inputs."""

    in_min: float
    in_max: float
    out_min: float
    out_max: float

    def __post_init__(self):
        if not self.in_min < self.in_max:
            raise ValueError(f"in_min must be < in_max: {self.in_min} vs {self.in_max}")
        if not self.out_min <= self.out_max:
            raise ValueError(f"out_min must be <= out_max: {self.out_min} vs {self.out_max}")


def scale(x: float, spec: ScalerSpec) -> float:
    """Map x into the output range; inputs outside the input range clamp first.

    Clamping (never extrapolating) keeps audio parameter targets in safe
    bounds no matter how wild the input value is.
    """
    x = min(max(x, spec.in_min), spec.in_max)
    t = (x - spec.in_min) / (spec.in_max - spec.in_min)
    return spec.out_min + t * (spec.out_max - spec.out_min)


@dataclass(frozen=True)
class AlertParams:
    """Sustained-instability rule: fire when >= trigger_count of the last
    window ticks had any channel with |return| > threshold."""

    window: int = 30
    trigger_count: int = 10
    threshold: float = 2.0

    def __post_init__(self):
        if not 1 <= self.trigger_count <= self.window:
            raise ValueError(
                f"trigger_count must be in [1, window]: {self.trigger_count} vs {self.window}"
            )
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive: {self.threshold}")


@dataclass
class AlertState:
    """Rolling exceedance history plus the current firing flag.

    A single isolated spike is an expected relaxation event and never
    fires; only an extended series of repeated high returns does.
    The flag is a pure function of the last ``params.window`` ticks.
    """

    params: AlertParams = field(default_factory=AlertParams)
    history: deque = field(default_factory=deque)  # per-tick tuples of per-channel bools
    firing: bool = False

    def exceedance_count(self) -> int:
        return sum(1 for flags in self.history if any(flags))


def update_alert(state: AlertState, v: LogReturnVector) -> AlertState:
    """Fold one return vector into the alert state and re-evaluate the flag."""
    p = state.params
    flags = tuple(abs(c) > p.threshold for c in v.as_tuple())
    history = deque(state.history, maxlen=p.window)
    history.append(flags)
    firing = sum(1 for f in history if any(f)) >= p.trigger_count
    return AlertState(params=p, history=history, firing=firing)
