"""Paced replay of recorded packet logs.

Emission spacing is the recorded spacing divided by the speed factor;
record content (and everything downstream of aggregation, which keys off
recorded timestamps) is identical at every speed.
"""

from __future__ import annotations

import time
from typing import Callable, Iterator

from socsound.capture.logs import open_packet_log
from socsound.capture.records import PacketRecord, ReplaySpec


def open_replay_source(
    spec: ReplaySpec,
    local_addresses=(),
    sleep: Callable[[float], None] = time.sleep,
    paced: bool = True,
) -> Iterator[PacketRecord]:
    """Yield records from ``spec.path`` with gaps scaled by 1/speed.

    ``paced=False`` drops the sleeps entirely (offline rendering and
    analysis want the records, not the waiting).
    """
    prev_ts = None
    for record in open_packet_log(spec.path, local_addresses):
        if paced and prev_ts is not None:
            gap = (record.timestamp - prev_ts) / spec.speed
            if gap > 0:
                sleep(gap)
        prev_ts = record.timestamp
        yield record
