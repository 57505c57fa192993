import json
import math
import struct

import pytest

from socsound.capture import (
    Aggregator,
    Direction,
    IntervalSample,
    PacketLogError,
    PacketRecord,
    ReplaySpec,
    aggregate,
    open_packet_log,
    open_replay_source,
    read_jsonl,
    read_pcap,
    write_jsonl,
)

from conftest import records_from


class TestRecords:
    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            PacketRecord(timestamp=0.0, direction=Direction.SENT, length=-1)

    def test_sample_invariants(self):
        with pytest.raises(ValueError, match="bs must be 0"):
            IntervalSample(index=0, t_start=0.0, bs=10, ps=0, br=0, pr=0)
        with pytest.raises(ValueError, match="br must be 0"):
            IntervalSample(index=0, t_start=0.0, bs=0, ps=0, br=10, pr=0)

    def test_replay_spec_speed(self):
        with pytest.raises(ValueError):
            ReplaySpec(path="x", speed=0.0)


class TestJsonl:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "log.jsonl"
        recs = records_from([(0.0, "s", 100), (0.5, "r", 60), (0.5, "s", 10)])
        assert write_jsonl(path, recs) == 3
        assert list(read_jsonl(path)) == recs

    def test_non_monotonic_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"ts": 1.0, "dir": "s", "len": 1}\n{"ts": 0.5, "dir": "s", "len": 1}\n')
        with pytest.raises(PacketLogError, match="non-monotonic"):
            list(read_jsonl(path))

    def test_garbage_line_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"ts": 0.0, "dir": "x", "len": 1}\n')
        with pytest.raises(PacketLogError, match="bad record"):
            list(read_jsonl(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(PacketLogError, match="no such file"):
            open_packet_log(tmp_path / "nope.jsonl")


def _build_pcap(packets, local_src=False):
    """Synthesize a classic little-endian pcap with minimal IPv4-in-Ethernet frames."""
    out = struct.pack("<IHHiIII", 0xA1B2C3D4, 2, 4, 0, 0, 65535, 1)
    for sec, usec, length, src in packets:
        eth = b"\x00" * 12 + struct.pack(">H", 0x0800)
        ip = bytes([0x45, 0]) + struct.pack(">H", 20) + b"\x00" * 8 + src + b"\x08\x08\x08\x08"
        frame = (eth + ip).ljust(34, b"\x00")
        out += struct.pack("<IIII", sec, usec, len(frame), length) + frame
    return out


class TestPcap:
    def test_reads_and_classifies(self, tmp_path):
        path = tmp_path / "t.pcap"
        local = bytes([10, 0, 0, 1])
        other = bytes([192, 168, 1, 9])
        path.write_bytes(_build_pcap([(100, 0, 500, local), (100, 250000, 700, other)]))
        recs = list(read_pcap(path, local_addresses=("10.0.0.1",)))
        assert [r.direction for r in recs] == [Direction.SENT, Direction.RECEIVED]
        assert [r.length for r in recs] == [500, 700]
        assert recs[0].timestamp == 0.0
        assert recs[1].timestamp == pytest.approx(0.25)

    def test_empty_local_set_is_all_received(self, tmp_path):
        path = tmp_path / "t.pcap"
        path.write_bytes(_build_pcap([(1, 0, 64, bytes([10, 0, 0, 1]))]))
        recs = list(read_pcap(path))
        assert recs[0].direction is Direction.RECEIVED

    def test_magic_detection(self, tmp_path):
        path = tmp_path / "t.pcap"
        path.write_bytes(_build_pcap([(1, 0, 64, bytes(4))]))
        assert [r.length for r in open_packet_log(path)] == [64]

    def test_not_a_pcap(self, tmp_path):
        path = tmp_path / "t.pcap"
        path.write_bytes(b"\x00\x01\x02\x03 not a capture")
        with pytest.raises(PacketLogError):
            list(read_pcap(path))


class TestAggregate:
    def test_summation_example(self):
        recs = records_from([
            (0.1, "s", 100), (0.2, "s", 200), (0.3, "s", 300),
            (0.4, "r", 50), (0.5, "r", 50),
        ])
        [s] = aggregate(recs, tick=1.0)
        assert (s.bs, s.ps, s.br, s.pr) == (600, 3, 100, 2)

    def test_empty_stream(self):
        assert list(aggregate([], tick=1.0)) == []

    def test_silent_intervals_emit_zeros(self):
        recs = records_from([(0.1, "s", 10), (3.5, "s", 20)])
        samples = list(aggregate(recs, tick=1.0))
        assert [s.index for s in samples] == [0, 1, 2, 3]
        assert [(s.bs, s.ps, s.br, s.pr) for s in samples[1:3]] == [(0, 0, 0, 0)] * 2

    def test_boundary_packet_goes_to_later_interval(self):
        recs = records_from([(0.0, "s", 10), (1.0, "s", 20)])
        samples = list(aggregate(recs, tick=1.0))
        assert [(s.index, s.bs) for s in samples] == [(0, 10), (1, 20)]

    def test_conservation(self, rng):
        recs = []
        t = 0.0
        for _ in range(500):
            t += float(rng.exponential(0.3))
            d = "s" if rng.random() < 0.5 else "r"
            recs.append((t, d, int(rng.integers(0, 1500))))
        records = records_from(recs)
        samples = list(aggregate(records, tick=0.7))
        sent = [r for r in records if r.direction is Direction.SENT]
        recv = [r for r in records if r.direction is Direction.RECEIVED]
        assert sum(s.bs for s in samples) == sum(r.length for r in sent)
        assert sum(s.ps for s in samples) == len(sent)
        assert sum(s.br for s in samples) == sum(r.length for r in recv)
        assert sum(s.pr for s in samples) == len(recv)

    def test_tick_count_matches_span(self, rng):
        # non-boundary timestamps: emitted samples == ceil(span / tick)
        for _ in range(20):
            times = sorted(float(t) for t in rng.uniform(0, 30, size=40))
            records = records_from([(t, "s", 100) for t in times])
            tick = float(rng.uniform(0.3, 2.0))
            samples = list(aggregate(records, tick=tick))
            span = times[-1] - times[0]
            assert len(samples) == math.ceil(span / tick)
            assert [s.index for s in samples] == list(range(len(samples)))

    def test_interval_duration_exact(self):
        recs = records_from([(0.25, "s", 1), (2.6, "r", 1)])
        samples = list(aggregate(recs, tick=0.5))
        for a, b in zip(samples, samples[1:]):
            assert b.t_start - a.t_start == pytest.approx(0.5)

    def test_bad_tick(self):
        with pytest.raises(ValueError):
            Aggregator(tick=0.0)


class TestReplay:
    def test_identity_speed_gaps(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, records_from([(0.0, "s", 1), (1.0, "s", 1), (2.0, "s", 1)]))
        sleeps = []
        list(open_replay_source(ReplaySpec(str(path), 1.0), sleep=sleeps.append))
        assert sleeps == pytest.approx([1.0, 1.0])

    def test_speed_scales_gaps(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, records_from([(0.0, "s", 1), (1.0, "s", 1), (2.0, "s", 1)]))
        sleeps = []
        list(open_replay_source(ReplaySpec(str(path), 10.0), sleep=sleeps.append))
        assert sleeps == pytest.approx([0.1, 0.1])

    def test_content_independent_of_speed(self, tmp_path, rng):
        path = tmp_path / "r.jsonl"
        t = 0.0
        recs = []
        for _ in range(100):
            t += float(rng.exponential(0.2))
            recs.append((t, "s" if rng.random() < 0.5 else "r", int(rng.integers(1, 1000))))
        write_jsonl(path, records_from(recs))
        fast = list(open_replay_source(ReplaySpec(str(path), 10.0), sleep=lambda _: None))
        slow = list(open_replay_source(ReplaySpec(str(path), 1.0), sleep=lambda _: None))
        assert fast == slow
        # identical IntervalSample sequence downstream
        assert list(aggregate(fast, 1.0)) == list(aggregate(slow, 1.0))

    def test_unpaced_skips_sleeping(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, records_from([(0.0, "s", 1), (5.0, "s", 1)]))
        sleeps = []
        list(open_replay_source(ReplaySpec(str(path), 1.0), sleep=sleeps.append, paced=False))
        assert sleeps == []
