import json
import time

import pytest

from socsound.cli import main
from socsound.traffic import make_demo_log


class TestUsage:
    @pytest.mark.parametrize("cmd", ["monitor", "replay", "render", "analyze"])
    def test_help_exits_zero(self, cmd, capsys):
        assert main([cmd, "--help"]) == 0
        assert "usage" in capsys.readouterr().out

    def test_missing_subcommand(self):
        assert main([]) == 2

    def test_monitor_requires_iface(self):
        assert main(["monitor"]) == 2

    def test_replay_rejects_zero_speed(self, demo_log, capsys):
        assert main(["replay", str(demo_log), "--speed", "0"]) == 2
        assert "speed" in capsys.readouterr().err

    def test_render_rejects_negative_speed(self, demo_log):
        assert main(["render", str(demo_log), "--speed", "-2"]) == 2

    def test_default_replay_speed_is_one(self):
        from socsound.cli import _parser

        args = _parser().parse_args(["replay", "x.jsonl"])
        assert args.speed == 1.0


class TestRender:
    def test_deterministic_wav_and_telemetry(self, demo_log, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[audio]\nsample_rate = 8000\nblock_size = 128\nwarmup_seconds = 0.1\n")
        outs = []
        for tag in ("a", "b"):
            wav = tmp_path / f"{tag}.wav"
            tel = tmp_path / f"{tag}.jsonl"
            assert main(["render", str(demo_log), "--out", str(wav),
                         "--telemetry", str(tel), "--config", str(cfg)]) == 0
            outs.append((wav.read_bytes(), tel.read_bytes()))
        assert outs[0] == outs[1]

    def test_seed_changes_audio_not_telemetry(self, demo_log, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[audio]\nsample_rate = 8000\nblock_size = 128\nwarmup_seconds = 0.1\n")
        blobs = {}
        for seed in (1, 2):
            wav = tmp_path / f"{seed}.wav"
            tel = tmp_path / f"{seed}.jsonl"
            assert main(["render", str(demo_log), "--out", str(wav), "--telemetry", str(tel),
                         "--config", str(cfg), "--seed", str(seed)]) == 0
            blobs[seed] = (wav.read_bytes(), tel.read_text())
        assert blobs[1][0] != blobs[2][0]
        # telemetry frames identical; only the header records the seed
        frames1 = blobs[1][1].splitlines()[1:]
        frames2 = blobs[2][1].splitlines()[1:]
        assert frames1 == frames2 and len(frames1) > 0

    def test_runtime_error_exit_code(self, tmp_path, capsys):
        assert main(["render", str(tmp_path / "missing.jsonl"), "--out",
                     str(tmp_path / "o.wav")]) == 1
        assert "error" in capsys.readouterr().err

    def test_machine_diagnostics(self, tmp_path, capsys):
        rc = main(["render", str(tmp_path / "missing.jsonl"), "--machine",
                   "--out", str(tmp_path / "o.wav")])
        assert rc == 1
        err = capsys.readouterr().err.strip()
        diag = json.loads(err)
        assert diag["error"] == "PacketLogError"
        assert "missing.jsonl" in diag["message"]


class TestReplayTiming:
    def test_speed_ten_compresses_wall_clock(self, tmp_path):
        path = tmp_path / "r.jsonl"
        make_demo_log(path, seed=9, ticks=6)  # ~6 s recorded
        start = time.monotonic()
        rc = main(["replay", str(path), "--speed", "10", "--no-audio", "--no-console",
                   "--tick", "1.0"])
        elapsed = time.monotonic() - start
        assert rc == 0
        # ~0.6 s at speed 10, plus scheduling slack; far below real time
        assert elapsed < 3.0

    def test_replay_speed_equivalence_of_returns(self, tmp_path):
        path = tmp_path / "r.jsonl"
        make_demo_log(path, seed=10, ticks=4)
        logs = {}
        for speed in ("1", "10"):
            out = tmp_path / f"log{speed}.jsonl"
            rc = main(["replay", str(path), "--speed", speed, "--no-audio", "--no-console",
                       "--log", str(out)])
            assert rc == 0
            from socsound.service.telemetry import read_session_log

            _, frames = read_session_log(out)
            logs[speed] = [f.returns.as_tuple() for f in frames]
        assert logs["1"] == logs["10"]


class TestMonitorErrors:
    def test_nonexistent_interface_fails_cleanly(self, capsys):
        rc = main(["monitor", "--iface", "nope0", "--no-audio", "--no-console",
                   "--machine", "--duration", "2"])
        assert rc == 1
        diag = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert diag["error"] in ("NoSuchInterface", "CaptureUnavailable",
                                 "CapturePermissionDenied")


class TestMonitorSmoke:
    def test_loopback_monitor_runs_and_stops(self, tmp_path):
        from test_live_capture import RAW_OK

        if not RAW_OK:
            pytest.skip("raw packet capture not permitted here")
        log = tmp_path / "live.jsonl"
        rc = main(["monitor", "--iface", "lo", "--no-audio", "--no-console",
                   "--tick", "0.2", "--duration", "1.2", "--log", str(log)])
        assert rc == 0
        from socsound.service.telemetry import read_session_log

        header, frames = read_session_log(log)
        assert header["type"] == "header"
        assert [f.index for f in frames] == list(range(len(frames)))
        assert len(frames) >= 3  # wall clock kept ticking during the run


class TestAnalyze:
    def test_outputs_written(self, demo_log, tmp_path, capsys):
        out = tmp_path / "analysis"
        rc = main(["analyze", str(demo_log), "--out-dir", str(out), "--levels", "2"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert set(report["channels"]) == {"bs", "ps", "br", "pr"}
        csv_lines = (out / "log_returns.csv").read_text().strip().splitlines()
        assert csv_lines[0] == "index,rbs,rps,rbr,rpr"
        assert len(csv_lines) == len(report["channels"]["bs"]["residuals"]) + 1
        for name in ("residuals.png", "denoised.png", "spectrum.png", "avalanches.png"):
            assert (out / name).exists()

    def test_baseline_self_gives_ratio_one(self, demo_log, tmp_path):
        out = tmp_path / "analysis"
        rc = main(["analyze", str(demo_log), "--baseline", str(demo_log),
                   "--out-dir", str(out), "--no-figures", "--levels", "2"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        for ch in report["channels"].values():
            assert ch["flood"]["ratio"] == pytest.approx(1.0)

    def test_single_channel_restriction(self, demo_log, tmp_path):
        out = tmp_path / "one"
        rc = main(["analyze", str(demo_log), "--channel", "ps", "--out-dir", str(out),
                   "--no-figures", "--levels", "2"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert list(report["channels"]) == ["ps"]

    def test_pcap_input(self, tmp_path):
        from test_capture import _build_pcap

        path = tmp_path / "t.pcap"
        packets = [(sec, 0, 400, bytes([10, 0, 0, 1])) for sec in range(6)]
        path.write_bytes(_build_pcap(packets))
        cfg = tmp_path / "c.ini"
        cfg.write_text("[session]\nlocal_addresses = 10.0.0.1\n")
        out = tmp_path / "a"
        rc = main(["analyze", str(path), "--out-dir", str(out), "--no-figures",
                   "--levels", "1", "--family", "db1", "--config", str(cfg)])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        # boundary timestamps: the final on-boundary packet opens tick 5
        assert report["channels"]["bs"]["length"] == 6

    def test_flood_fixture_vs_normal_baseline(self, tmp_path):
        # fixture framed on the suspect window: half normal, half flood
        from socsound.capture.logs import write_jsonl
        from socsound.traffic import generate_flood, generate_normal

        flood_path = tmp_path / "flood.jsonl"
        records, _ = generate_flood(seed=11, normal_ticks=60, flood_ticks=60)
        write_jsonl(flood_path, records)
        base_path = tmp_path / "normal.jsonl"
        write_jsonl(base_path, generate_normal(seed=12, ticks=120))
        out = tmp_path / "a"
        rc = main(["analyze", str(flood_path), "--baseline", str(base_path),
                   "--out-dir", str(out), "--no-figures"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        flood = report["channels"]["ps"]["flood"]
        assert flood["ratio"] > 5.0
        assert flood["rising"] is True

    def test_all_zero_log(self, tmp_path):
        # traffic in only one direction: the other channels stay at zero
        path = tmp_path / "quiet.jsonl"
        lines = [json.dumps({"ts": float(t), "dir": "s", "len": 100}) for t in range(12)]
        path.write_text("\n".join(lines) + "\n")
        out = tmp_path / "a"
        rc = main(["analyze", str(path), "--out-dir", str(out), "--no-figures",
                   "--levels", "1", "--family", "db1"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        br = report["channels"]["br"]
        assert br["avalanches"]["count"] == 0
        assert br["spectrum"]["total_energy"] == 0.0
