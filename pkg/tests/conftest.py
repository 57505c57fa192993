import numpy as np
import pytest

from socsound.capture.records import Direction, IntervalSample, PacketRecord
from socsound.traffic import make_demo_log


def make_sample(index, bs=0, ps=0, br=0, pr=0, tick=1.0):
    return IntervalSample(index=index, t_start=index * tick, bs=bs, ps=ps, br=br, pr=pr)


def records_from(spec):
    """Build PacketRecords from (ts, dir, len) triples."""
    return [PacketRecord(timestamp=t, direction=Direction(d), length=n) for t, d, n in spec]


@pytest.fixture(scope="session")
def demo_log(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixtures") / "demo.jsonl"
    make_demo_log(path, seed=7, ticks=20)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
