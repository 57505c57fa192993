"""Fixed-interval aggregation of packet streams into IntervalSamples."""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from socsound.capture.records import Direction, IntervalSample, PacketRecord


class Aggregator:
    """Accumulates packets into half-open intervals [t, t + tick).

    A packet exactly on a boundary belongs to the later interval, so every
    packet lands in exactly one sample. Silent intervals still emit
    all-zero samples. The epoch defaults to the first packet's timestamp
    floored to a tick boundary multiple of 0 (i.e. the first timestamp
    itself starts interval 0).
    """

    def __init__(self, tick: float, epoch: float | None = None):
        if not tick > 0:
            raise ValueError(f"tick must be positive, got {tick}")
        self.tick = tick
        self.epoch = epoch
        self._index = 0
        self._counts = [0, 0, 0, 0]  # bs, ps, br, pr

    def _flush(self) -> IntervalSample:
        bs, ps, br, pr = self._counts
        sample = IntervalSample(
            index=self._index,
            t_start=self.epoch + self._index * self.tick,
            bs=bs, ps=ps, br=br, pr=pr,
        )
        self._index += 1
        self._counts = [0, 0, 0, 0]
        return sample

    def push(self, record: PacketRecord) -> Iterator[IntervalSample]:
        """Add one packet; yields every interval that it proves complete."""
        if self.epoch is None:
            self.epoch = record.timestamp
        offset = record.timestamp - self.epoch
        if offset < 0:
            raise ValueError(f"packet before epoch: {record.timestamp} < {self.epoch}")
        target = math.floor(offset / self.tick)
        while self._index < target:
            yield self._flush()
        if record.direction is Direction.SENT:
            self._counts[0] += record.length
            self._counts[1] += 1
        else:
            self._counts[2] += record.length
            self._counts[3] += 1

    def advance_to(self, timestamp: float) -> Iterator[IntervalSample]:
        """Flush every interval that ends at or before ``timestamp`` (wall-clock driven)."""
        if self.epoch is None:
            return
        target = math.floor((timestamp - self.epoch) / self.tick)
        while self._index < target:
            yield self._flush()

    def finish(self) -> Iterator[IntervalSample]:
        """Flush the final partial interval so no packet is ever dropped."""
        if self.epoch is not None:
            yield self._flush()


def aggregate(stream: Iterable[PacketRecord], tick: float) -> Iterator[IntervalSample]:
    """Aggregate a finite packet stream into per-tick samples.

    Emits floor((last - first) / tick) + 1 samples, zero-filled over silent
    stretches; the byte/packet totals across all samples equal the totals
    of the input stream.
    """
    agg = Aggregator(tick)
    for record in stream:
        yield from agg.push(record)
    yield from agg.finish()
