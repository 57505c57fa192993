"""Release gate: every criterion at its pinned tolerance, one test each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion with its runtime.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from socsound.analysis.spectrum import ddos_indicator, spectrum
from socsound.analysis.wavelet import dwt, idwt
from socsound.audio.engine import EngineConfig, render_offline
from socsound.capture.aggregate import aggregate
from socsound.capture.records import CHANNELS, ReplaySpec
from socsound.metrics import ScalerSpec, log_return, scale
from socsound.service.config import SessionConfig
from socsound.service.session import Session, SessionSource, run_offline
from socsound.traffic import generate_flood, make_demo_log

from conftest import make_sample

pytestmark = pytest.mark.acceptance

REPO_ROOT = Path(__file__).resolve().parent.parent
BUNDLED_DEMO = REPO_ROOT / "fixtures" / "demo.jsonl"


class _Criterion:
    def __init__(self, name, budget_seconds):
        self.name = name
        self.budget = budget_seconds

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"{status} {self.name} ({elapsed:.2f}s / budget {self.budget:.0f}s)")
        if exc_type is None:
            assert elapsed < self.budget, f"{self.name} exceeded runtime budget"
        return False


def test_log_return_oracle():
    with _Criterion("log-return oracle (10k pairs, 1e-12)", 1.0):
        rng = np.random.default_rng(2024)
        values = rng.integers(0, 50_000, size=(10_000, 8))
        values[:100, :4] = 0  # zero-floor cases on the prev side
        values[100:200, 4:] = 0  # and on the next side
        # keep the sample invariant: no bytes without packets
        for col in (0, 2, 4, 6):
            values[values[:, col + 1] == 0, col] = 0
        worst = 0.0
        for row in values:
            prev = make_sample(0, *map(int, row[:4]))
            nxt = make_sample(1, *map(int, row[4:]))
            got = log_return(prev, nxt)
            for name, x, y in zip(("rbs", "rps", "rbr", "rpr"), row[:4], row[4:]):
                want = math.log(max(int(y), 1)) - math.log(max(int(x), 1))
                worst = max(worst, abs(getattr(got, name) - want))
        assert worst < 1e-12


def test_scaler_properties():
    with _Criterion("scaler properties (1k random specs)", 1.0):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            in_min = float(rng.uniform(-100, 99))
            in_max = in_min + float(rng.uniform(0.01, 100))
            out_min = float(rng.uniform(-100, 100))
            out_max = out_min + float(rng.uniform(0.0, 100))
            spec = ScalerSpec(in_min, in_max, out_min, out_max)
            assert scale(in_min, spec) == pytest.approx(out_min, abs=1e-9)
            assert scale(in_max, spec) == pytest.approx(out_max, abs=1e-9)
            mid = scale((in_min + in_max) / 2, spec)
            assert mid == pytest.approx((out_min + out_max) / 2, abs=1e-9)
            a, b = sorted(rng.uniform(in_min - 50, in_max + 50, size=2))
            assert scale(a, spec) <= scale(b, spec) + 1e-12
            assert scale(in_max + 10, spec) == pytest.approx(out_max, abs=1e-9)
            assert scale(in_min - 10, spec) == pytest.approx(out_min, abs=1e-9)


def test_dwt_suite():
    with _Criterion("DWT suite (PR/linearity/conservation <= 1e-8)", 30.0):
        rng = np.random.default_rng(99)
        for order in range(1, 9):
            family, flen = f"db{order}", 2 * order
            for n in (64, 256, 1024, 4096):
                for levels in (1, 2, 3, 4):
                    x = rng.standard_normal(n)
                    y = rng.standard_normal(n)
                    dx = dwt(x, family, levels)
                    assert np.max(np.abs(idwt(dx) - x)) <= 1e-8
                    dz = dwt(2.0 * x - 3.0 * y, family, levels)
                    dy = dwt(y, family, levels)
                    assert np.max(np.abs(
                        dz.approximation - (2.0 * dx.approximation - 3.0 * dy.approximation)
                    )) <= 1e-8
                    for lz, lx, ly in zip(dz.details, dx.details, dy.details):
                        assert np.max(np.abs(lz - (2.0 * lx - 3.0 * ly))) <= 1e-8
                    if n // 2 ** (levels - 1) >= flen:  # periodic feasibility
                        dp = dwt(x, family, levels, mode="periodic")
                        assert np.max(np.abs(idwt(dp) - x)) <= 1e-8
                        rel = abs(dp.coefficient_energy() - np.sum(x**2)) / np.sum(x**2)
                        assert rel <= 1e-8


def test_denoising_monte_carlo():
    with _Criterion("denoising Monte Carlo (>= 95/100 trials improve)", 30.0):
        from socsound.analysis.wavelet import denoise

        t = np.arange(1024)
        clean = np.sin(2 * np.pi * 3 * t / 1024) + 0.5 * np.cos(2 * np.pi * 7 * t / 1024)
        wins = 0
        for seed in range(100):
            noisy = clean + np.random.default_rng(seed).normal(0.0, 0.4, clean.size)
            out = denoise(noisy, "db4", levels=4)
            wins += np.mean((out - clean) ** 2) < np.mean((noisy - clean) ** 2)
        assert wins >= 95


def test_spectrum_criteria():
    with _Criterion("spectrum (Parseval 1e-6 x 1000; sinusoid bands)", 10.0):
        rng = np.random.default_rng(41)
        for _ in range(1000):
            n = int(rng.integers(2, 300))
            x = rng.standard_normal(n)
            rep = spectrum(x)
            time_energy = float(np.sum((x - x.mean()) ** 2))
            if time_energy > 0:
                assert abs(rep.total_energy / n - time_energy) / time_energy < 1e-6
        n = 200
        t = np.arange(n)
        high = spectrum(np.sin(2 * np.pi * 90 * t / n), split_fraction=0.5)
        assert high.high_band_fraction == pytest.approx(1.0, abs=1e-9)
        low = spectrum(np.sin(2 * np.pi * 10 * t / n), split_fraction=0.5)
        assert low.high_band_fraction == pytest.approx(0.0, abs=1e-9)


def test_filter_response_via_renders():
    with _Criterion("filter response (+-1.5 dB passband, >= 20 dB at 2 octaves)", 60.0):
        from test_audio import pinned_voice, rms, solo_engine

        config = EngineConfig()
        rate = config.sample_rate
        default = SessionConfig()
        drive = 2.0  # mid-range log-return drive
        for ch in CHANNELS:
            spec = default.voices[ch]
            center = scale(drive, spec.center_scaler)
            q = scale(drive, ScalerSpec(spec.center_scaler.in_min, spec.center_scaler.in_max,
                                        spec.q_bounds[0], spec.q_bounds[1]))
            measured = {}
            for probe in (center, center / 4.0, center * 4.0):
                rig = pinned_voice(ch, f"sine:{probe}", center, q, gain=1.0, pan=spec.pan)
                engine = solo_engine(ch, rig, config=config, master=1.0)
                engine.render_seconds(0.3)
                out = engine.render_seconds(1.0)
                measured[probe] = rms(out)
            from socsound.audio.filters import design_gain

            input_rms = 0.5 / np.sqrt(2.0)  # sine amplitude 0.5
            pan_pool = 1.0 / np.sqrt(2.0)   # stereo-pooled constant-power pan
            design = design_gain(center, q, rate, center)
            err_db = 20 * np.log10(measured[center] / (input_rms * pan_pool * design))
            assert abs(err_db) <= 1.5, f"{ch}: passband off design by {err_db:.2f} dB"
            for probe in (center / 4.0, center * 4.0):
                rejection = 20 * np.log10(measured[center] / measured[probe])
                assert rejection >= 20.0, f"{ch}: only {rejection:.1f} dB at {probe:.0f} Hz"


def test_end_to_end_determinism(tmp_path):
    with _Criterion("determinism (bit-identical WAV + telemetry)", 120.0):
        assert BUNDLED_DEMO.exists(), "bundled demo fixture missing"
        cfg = SessionConfig()
        outs = []
        for tag in ("a", "b"):
            wav = tmp_path / f"{tag}.wav"
            tel = tmp_path / f"{tag}.jsonl"
            run_offline(cfg, source_path=BUNDLED_DEMO, wav_path=wav, telemetry_path=tel)
            outs.append((wav.read_bytes(), tel.read_bytes()))
        assert outs[0][0] == outs[1][0], "WAV differs between runs"
        assert outs[0][1] == outs[1][1], "telemetry differs between runs"


def test_ddos_scenario():
    with _Criterion("flood scenario (ratio >= 5, rising, alert <= 15 ticks, RMS x2)", 120.0):
        records, onset = generate_flood(seed=11, normal_ticks=600, flood_ticks=60,
                                        multiplier=20)
        samples = list(aggregate(records, 1.0))
        cfg = SessionConfig()
        result = run_offline(cfg, samples=samples, audio=False)

        rps = [v.rps for v in result.returns]
        window = 120
        baseline = spectrum(rps[:window])
        current = spectrum(rps[-window:])
        indicator = ddos_indicator(baseline, current)
        assert indicator.ratio >= 5.0, f"energy ratio {indicator.ratio:.2f} < 5"
        assert indicator.rising is True

        firing = [i for i, f in result.alert_transitions if f]
        assert firing, "alert never fired"
        assert onset <= firing[0] <= onset + 15, (
            f"alert at tick {firing[0]}, onset {onset}")

        # audio check around the onset: spike second vs preceding second
        local = result.returns[onset - 4 : onset + 4]
        render = render_offline(local, voice_specs=cfg.voices, mixer=cfg.mixer,
                                config=cfg.engine, seed=cfg.seed)
        rate = cfg.engine.sample_rate
        warm = int(cfg.engine.warmup_seconds * rate)
        def second(k):
            return render.frames[warm + k * rate : warm + (k + 1) * rate]
        rms = lambda x: float(np.sqrt(np.mean(x**2)))
        pre, spike = rms(second(2)), rms(second(4))
        assert spike >= 2.0 * pre, f"spike RMS {spike:.4f} < 2x pre {pre:.4f}"


def test_replay_speed_equivalence(tmp_path):
    with _Criterion("replay equivalence (speed 1 vs 10)", 120.0):
        path = tmp_path / "replay.jsonl"
        make_demo_log(path, seed=21, ticks=4)
        sequences = {}
        for speed in (1.0, 10.0):
            cfg = SessionConfig(engine=EngineConfig(sample_rate=8000, block_size=128,
                                                    warmup_seconds=0.1))
            session = Session(cfg, SessionSource(replay=ReplaySpec(str(path), speed=speed)),
                              audio=False)
            sub, _ = session.hub.subscribe()
            session.start()
            assert session.join(timeout=60.0)
            session.stop()
            seq = []
            while (msg := sub.drain(0.05)) is not None:
                if msg["type"] == "frame":
                    seq.append((msg["index"], tuple(msg["returns"].values())))
            sequences[speed] = seq
        assert sequences[1.0] == sequences[10.0]
        assert len(sequences[1.0]) >= 3


@pytest.mark.secondary
def test_console_protocol_round_trip(tmp_path):
    """Scripted protocol client: tap + fader reflected in the next frames.

    Exercises the console's server-side contract; the browser client has
    its own suite under frontend/. Everything above runs with no console
    built.
    """
    from socsound.service import ws as wsproto
    from socsound.service.server import ConsoleServer

    path = tmp_path / "replay.jsonl"
    make_demo_log(path, seed=5, ticks=30)
    cfg = SessionConfig(engine=EngineConfig(sample_rate=8000, block_size=128,
                                            warmup_seconds=0.1))
    session = Session(cfg, SessionSource(replay=ReplaySpec(str(path), speed=8.0)), audio=False)
    server = ConsoleServer(session, host="127.0.0.1", port=0).start()
    session.start()
    try:
        sock = wsproto.connect("127.0.0.1", server.port)
        sock._sock.settimeout(10.0)
        snapshot = json.loads(sock.recv_text())
        assert snapshot["type"] == "snapshot"
        sock.send_text(json.dumps({"type": "tap", "channel": "bs", "enabled": False}))
        sock.send_text(json.dumps({"type": "mixer", "gains": [0.35, 1, 1, 1], "master": 0.9}))
        deadline = time.time() + 20
        ok = False
        while time.time() < deadline and not ok:
            msg = json.loads(sock.recv_text())
            if msg.get("type") != "frame":
                continue
            ch = msg["channels"]["bs"]
            ok = ch["tap"] is False and abs(ch["mixer_gain"] - 0.35) < 1e-9
        assert ok, "tap/fader change never reflected in telemetry"
        sock.close()
    finally:
        server.stop()
        session.stop()
