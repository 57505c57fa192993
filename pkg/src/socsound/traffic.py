"""Synthetic traffic generators for fixtures, demos and the flood scenario.

Normal traffic draws heavy-tailed per-tick packet counts (lognormal) in
both directions. The flood overlay models a pulsing small-packet attack:
on alternating ticks the sent-packet rate multiplies, which produces the
repeated large log returns and upper-band spectral energy a flood is
known for.
"""

from __future__ import annotations

import numpy as np

from socsound.capture.logs import write_jsonl
from socsound.capture.records import Direction, PacketRecord

FLOOD_PACKET_BYTES = 64


def _tick_records(rng, tick_index, tick, sent_packets, recv_packets,
                  sent_bytes_range=(200, 1400), recv_bytes_range=(200, 1400),
                  flood_packets=0):
    offsets = np.sort(rng.random(sent_packets + recv_packets + flood_packets)) * tick
    sizes_s = rng.integers(*sent_bytes_range, size=sent_packets)
    sizes_r = rng.integers(*recv_bytes_range, size=recv_packets)
    kinds = ([(Direction.SENT, int(s)) for s in sizes_s]
             + [(Direction.RECEIVED, int(s)) for s in sizes_r]
             + [(Direction.SENT, FLOOD_PACKET_BYTES)] * flood_packets)
    rng.shuffle(kinds)
    t0 = tick_index * tick
    return [PacketRecord(timestamp=t0 + float(off), direction=d, length=n)
            for off, (d, n) in zip(offsets, kinds)]


def normal_counts(rng, base_packets: int):
    # lognormal keeps counts positive and heavy-tailed (bursty)
    return max(1, int(round(rng.lognormal(np.log(base_packets), 0.5))))


def generate_normal(seed: int, ticks: int, tick: float = 1.0, base_packets: int = 30):
    """Normal bursty traffic records for ``ticks`` intervals."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(ticks):
        records.extend(_tick_records(rng, i, tick,
                                     sent_packets=normal_counts(rng, base_packets),
                                     recv_packets=normal_counts(rng, base_packets)))
    return records


def generate_flood(seed: int, normal_ticks: int, flood_ticks: int, tick: float = 1.0,
                   base_packets: int = 30, multiplier: int = 20):
    """Normal traffic with a pulsing sent-packet flood appended.

    Returns (records, flood_onset_tick). On every other flood tick the
    sent-packet count jumps by ``multiplier`` times the base rate using
    minimum-size packets, then falls back, so successive ticks swing by
    roughly ln(multiplier) in the sent channels.
    """
    rng = np.random.default_rng(seed)
    records = []
    for i in range(normal_ticks):
        records.extend(_tick_records(rng, i, tick,
                                     sent_packets=normal_counts(rng, base_packets),
                                     recv_packets=normal_counts(rng, base_packets)))
    onset = normal_ticks
    for k in range(flood_ticks):
        i = onset + k
        pulse_on = k % 2 == 0
        flood_packets = multiplier * base_packets if pulse_on else 0
        records.extend(_tick_records(rng, i, tick,
                                     sent_packets=normal_counts(rng, base_packets),
                                     recv_packets=normal_counts(rng, base_packets),
                                     flood_packets=flood_packets))
    return records, onset


def make_demo_log(path, seed: int = 7, ticks: int = 20, tick: float = 1.0) -> int:
    """Small bundled fixture: normal traffic with one brief two-tick surge."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(ticks):
        surge = 8 if i in (12, 13) else 1
        records.extend(_tick_records(rng, i, tick,
                                     sent_packets=surge * normal_counts(rng, 25),
                                     recv_packets=normal_counts(rng, 25)))
    return write_jsonl(path, records)


def make_flood_log(path, seed: int = 11, normal_ticks: int = 600, flood_ticks: int = 60,
                   tick: float = 1.0, multiplier: int = 20):
    """Write the flood-scenario fixture; returns (record count, onset tick)."""
    records, onset = generate_flood(seed, normal_ticks, flood_ticks,
                                    tick=tick, multiplier=multiplier)
    return write_jsonl(path, records), onset
