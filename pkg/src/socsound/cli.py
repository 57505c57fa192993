"""Command-line front end: monitor, replay, render, analyze.

Exit codes: 0 success (including signal-driven shutdown), 1 runtime
failure, 2 usage error. With --machine, diagnostics go to stderr as one
JSON object per line instead of prose.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from socsound.capture.records import CHANNELS, ReplaySpec

log = logging.getLogger("socsound")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socsound",
        description="Monitor network traffic as an ambient soundscape of "
                    "log-return criticality indicators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI config file")
        p.add_argument("--seed", type=int, help="single seed for all randomness")
        p.add_argument("--tick", type=float, help="aggregation interval seconds")
        p.add_argument("--mode", choices=("signed", "squared"), help="return mode")
        p.add_argument("--machine", action="store_true",
                       help="machine-readable JSON diagnostics on stderr")

    def session_opts(p):
        p.add_argument("--no-audio", action="store_true", help="telemetry only, no audio device")
        p.add_argument("--wav", help="capture live audio to this WAV file "
                                     "(also the fallback when no device exists)")
        p.add_argument("--log", help="session telemetry log path (JSONL)")
        p.add_argument("--listen", help="console endpoint host:port")
        p.add_argument("--no-console", action="store_true", help="do not open the console endpoint")
        p.add_argument("--static-dir", help="serve console assets from this directory")
        p.add_argument("--duration", type=float,
                       help="stop automatically after this many seconds")

    p = sub.add_parser("monitor", help="sonify a live interface")
    p.add_argument("--iface", required=True, help="interface to capture")
    common(p)
    session_opts(p)
    p.set_defaults(func=run_monitor)

    p = sub.add_parser("replay", help="replay a recorded packet or session log")
    p.add_argument("file", help="packet log (pcap/JSONL) or session log")
    p.add_argument("--speed", type=float, default=1.0,
                   help="playback speed factor (default 1.0)")
    common(p)
    session_opts(p)
    p.set_defaults(func=run_replay)

    p = sub.add_parser("render", help="render a log offline to WAV + telemetry")
    p.add_argument("file", help="packet log (pcap/JSONL) or session log")
    p.add_argument("--out", default="out.wav", help="output WAV path")
    p.add_argument("--telemetry", help="output telemetry JSONL path")
    p.add_argument("--speed", type=float, default=1.0,
                   help="seconds of audio per tick = tick/speed")
    common(p)
    p.set_defaults(func=run_render)

    p = sub.add_parser("analyze", help="wavelet/FFT/avalanche analysis of a log")
    p.add_argument("file", help="packet log or session log")
    p.add_argument("--baseline", help="normal-traffic log for the flood indicator")
    p.add_argument("--out-dir", default="analysis", help="report output directory")
    p.add_argument("--family", default="db4", help="wavelet family db1..db8")
    p.add_argument("--levels", type=int, default=4, help="wavelet levels")
    p.add_argument("--threshold", type=float, default=2.0, help="avalanche activation threshold")
    p.add_argument("--split", type=float, default=0.5, help="high-band split fraction of Nyquist")
    p.add_argument("--channel", choices=CHANNELS, help="restrict analysis to one channel")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    common(p)
    p.set_defaults(func=run_analyze)

    return parser


def _diag(args, exc: BaseException) -> None:
    if getattr(args, "machine", False):
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"socsound: error: {exc}\n")


def _load_config(args, extra_overrides=None):
    from socsound.service.config import load_config

    overrides = dict(extra_overrides or {})
    for key in ("seed", "tick", "mode", "listen"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return load_config(args.config, overrides)


def _run_session(args, config, source) -> int:
    from socsound.audio.sink import open_sink
    from socsound.service.server import ConsoleServer, parse_listen
    from socsound.service.session import Session

    audio = not args.no_audio
    sink = None
    if audio:
        # no usable device degrades to a streamed file render, with a warning
        fallback = args.wav if args.wav else "socsound-audio.wav"
        sink = open_sink("device", config.engine.sample_rate, config.engine.block_size,
                         wav_path=fallback)
    session = Session(config, source, audio=audio, sink=sink, log_path=args.log)
    server = None
    if not args.no_console:
        host, port = parse_listen(config.listen)
        server = ConsoleServer(session, host=host, port=port,
                               static_dir=args.static_dir).start()
    session.start()
    try:
        session.join(timeout=args.duration)
    except KeyboardInterrupt:
        pass
    finally:
        if server is not None:
            server.stop()
        session.stop()
    return 0


def run_monitor(args) -> int:
    from socsound.capture.live import CaptureError
    from socsound.service.session import SessionSource

    config = _load_config(args)
    try:
        return _run_session(args, config, SessionSource(interface=args.iface))
    except CaptureError as exc:
        raise type(exc)(f"{exc} (use `socsound replay` for recorded logs)") from exc


def run_replay(args) -> int:
    from socsound.service.session import SessionSource

    if not args.speed > 0:
        sys.stderr.write("socsound replay: error: --speed must be positive\n")
        return 2
    config = _load_config(args)
    source = SessionSource(replay=ReplaySpec(path=args.file, speed=args.speed))
    return _run_session(args, config, source)


def run_render(args) -> int:
    from socsound.service.session import run_offline

    if not args.speed > 0:
        sys.stderr.write("socsound render: error: --speed must be positive\n")
        return 2
    config = _load_config(args)
    result = run_offline(config, source_path=args.file, wav_path=args.out,
                         telemetry_path=args.telemetry, speed=args.speed,
                         keep_frames=False)
    print(f"rendered {len(result.frames)} ticks -> {args.out}"
          + (f" + {args.telemetry}" if args.telemetry else ""))
    return 0


def run_analyze(args) -> int:
    from socsound.analysis.report import analyze_channel
    from socsound.service.session import compute_returns, load_samples

    config = _load_config(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    samples = load_samples(args.file, config)
    if not samples:
        raise ValueError(f"{args.file}: no samples")
    returns = compute_returns(samples, config.mode)
    series = {ch: [getattr(v, "r" + ch) for v in returns] for ch in CHANNELS}

    baseline_series = None
    if args.baseline:
        base_samples = load_samples(args.baseline, config)
        base_returns = compute_returns(base_samples, config.mode)
        baseline_series = {ch: [getattr(v, "r" + ch) for v in base_returns] for ch in CHANNELS}

    channels = [args.channel] if args.channel else list(CHANNELS)
    analyses = {}
    for ch in channels:
        analyses[ch] = analyze_channel(
            ch, series[ch], family=args.family, levels=args.levels,
            split_fraction=args.split, activation_threshold=args.threshold,
            baseline_series=baseline_series[ch] if baseline_series else None,
        )

    report_path = out_dir / "report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump({"source": str(args.file), "baseline": args.baseline,
                   "channels": {ch: a.to_dict() for ch, a in analyses.items()}},
                  fh, indent=2)

    csv_path = out_dir / "log_returns.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", *("r" + ch for ch in CHANNELS)])
        for v in returns:
            writer.writerow([v.index, v.rbs, v.rps, v.rbr, v.rpr])

    outputs = [report_path, csv_path]
    if not args.no_figures:
        from socsound.analysis.figures import render_figures

        outputs.extend(render_figures(analyses, out_dir))
    print("\n".join(str(p) for p in outputs))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 0
    except Exception as exc:  # runtime failures exit 1 with a diagnostic
        _diag(args, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
