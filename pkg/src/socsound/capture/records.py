"""Core traffic records shared by capture, replay and aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

CHANNELS = ("bs", "ps", "br", "pr")


class Direction(str, Enum):
    SENT = "s"
    RECEIVED = "r"


@dataclass(frozen=True)
class PacketRecord:
    """One observed packet: seconds since session epoch, direction, byte length."""

    timestamp: float
    direction: Direction
    length: int

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")
        if self.length < 0:
            raise ValueError(f"negative length: {self.length}")


@dataclass(frozen=True)
class IntervalSample:
    """Per-tick traffic aggregate for the half-open interval [t_start, t_start + tick).

    bs/ps: bytes and packets sent; br/pr: bytes and packets received.
    """

    index: int
    t_start: float
    bs: int
    ps: int
    br: int
    pr: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative index: {self.index}")
        for name in CHANNELS:
            if getattr(self, name) < 0:
                raise ValueError(f"negative {name}")
        if self.ps == 0 and self.bs != 0:
            raise ValueError("bs must be 0 when ps is 0")
        if self.pr == 0 and self.br != 0:
            raise ValueError("br must be 0 when pr is 0")

    def as_tuple(self):
        return (self.bs, self.ps, self.br, self.pr)


@dataclass(frozen=True)
class ReplaySpec:
    """A recorded packet log plus the speed factor to play it back at.

    speed 1.0 keeps the original timing; 10.0 compresses gaps tenfold.
    Record content never depends on speed.
    """

    path: str
    speed: float = 1.0

    def __post_init__(self):
        if not self.speed > 0:
            raise ValueError(f"speed factor must be positive, got {self.speed}")
