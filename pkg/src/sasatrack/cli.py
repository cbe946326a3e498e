"""Command-line entry point: track a sequence, run benchmarks, generate
synthetic data.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bench, config
from .controller import ThresholdConfig
from .synth import SynthSpec, generate_synthetic
from .tracker import BoundingBox, TrackerConfig, run_sequence


def fast_motion_suite(seed: int = 0) -> list[bench.Sequence]:
    """Bundled accelerating scenarios tuned to outrun the smallest window."""
    seqs = []
    for i in range(3):
        spec = SynthSpec(frame_w=1200, frame_h=220, target_w=50, target_h=50,
                         n_frames=70, profile="accelerating",
                         velocity=(2.0, 0.0), accel=3.0, vmax=56.0,
                         background_contrast=0.0, target_contrast=0.9,
                         seed=seed + i)
        seqs.append(bench.synthetic_sequence(
            f"fast{i}", spec, attributes={"fast-motion"}))
    return seqs


def basic_suite(seed: int = 0) -> list[bench.Sequence]:
    specs = {
        "const": SynthSpec(profile="constant", velocity=(4.0, 2.0), seed=seed),
        "stopgo": SynthSpec(profile="stop_and_go", velocity=(6.0, 0.0),
                            seed=seed + 1),
        "blur": SynthSpec(profile="constant", velocity=(6.0, 0.0), blur=True,
                          seed=seed + 2),
    }
    attrs = {"const": set(), "stopgo": {"fast-motion"}, "blur": {"motion-blur"}}
    return [bench.synthetic_sequence(name, spec, attributes=attrs[name])
            for name, spec in specs.items()]


SUITES = {"synth-fast": fast_motion_suite, "synth-basic": basic_suite}


def _resolve_config(args) -> TrackerConfig:
    cfg = config.load_config(args.config)
    if args.set:
        cfg = config.apply_overrides(cfg, args.set)
    if args.threshold_mode:
        cfg = replace(cfg, thresholds=replace(cfg.thresholds,
                                              mode=args.threshold_mode))
    if args.resize_method:
        cfg = replace(cfg, resize_method=args.resize_method)
    if args.padding_mode:
        cfg = replace(cfg, adaptive=args.padding_mode == "sasa")
    cfg.validate()
    return cfg


def _write_manifest(out_dir: Path, args, cfg: TrackerConfig | None = None,
                    extra: dict | None = None) -> None:
    manifest = {"command": " ".join(sys.argv),
                "args": {k: v for k, v in vars(args).items() if k != "func"}}
    if cfg is not None:
        manifest["config"] = config.to_dict(cfg)
    if extra:
        manifest.update(extra)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default="dcf_sasa",
                        help="preset name or YAML config file")
    parser.add_argument("--set", action="append", default=[], metavar="K=V",
                        help="config override (thresholds.* for thresholds)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--padding-mode", choices=("fixed", "sasa"))
    parser.add_argument("--threshold-mode",
                        choices=("same", "hysteresis", "entangled"))
    parser.add_argument("--resize-method", choices=("spatial", "frequency"))


def cmd_track(args) -> int:
    try:
        cfg = _resolve_config(args)
        seq = bench.load_otb_sequence(args.sequence)
        if args.box:
            parts = args.box.split(",")
            if len(parts) != 4:
                raise ValueError(f"--box needs x,y,w,h, got {args.box!r}")
            box = BoundingBox.from_tlwh(*(float(p) for p in parts))
        else:
            box = seq.groundtruth[0]
        boxes, diags = run_sequence(seq.frames(), box, cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    _write_manifest(out_dir, args, cfg)
    with open(out_dir / "track.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["frame", "x", "y", "w", "h", "zeta", "level", "psr", "ms"])
        for d in diags:
            x, y, w, h = d.box.to_tlwh()
            wr.writerow([d.frame, f"{x:.2f}", f"{y:.2f}", f"{w:g}", f"{h:g}",
                         f"{d.zeta:.4f}", int(d.level), f"{d.psr:.2f}",
                         f"{d.ms:.2f}"])
    print(f"tracked {len(boxes)} frames -> {out_dir / 'track.csv'}")
    return 0


def cmd_bench(args) -> int:
    try:
        if args.suite:
            sequences = SUITES[args.suite](seed=args.seed)
        elif args.dataset:
            root = Path(args.dataset)
            if not root.is_dir():
                raise FileNotFoundError(f"dataset path {root} does not exist")
            dirs = sorted(d for d in root.iterdir() if d.is_dir())
            if (root / bench.GROUNDTRUTH_FILE).is_file():
                dirs = [root]  # a single-sequence directory
            sequences = [bench.load_otb_sequence(d) for d in dirs]
        else:
            raise ValueError("need --suite or --dataset")

        trackers = {}
        for name in args.configs.split(","):
            cfg = config.load_config(name.strip())
            if args.threshold_mode:
                cfg = replace(cfg, thresholds=replace(
                    cfg.thresholds, mode=args.threshold_mode))
            if args.resize_method:
                cfg = replace(cfg, resize_method=args.resize_method)
            trackers[name.strip()] = cfg
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = bench.run_ope(trackers, sequences, workers=args.workers)
    out_dir = Path(args.out)
    _write_manifest(out_dir, args,
                    extra={"configs": {n: config.to_dict(c)
                                       for n, c in trackers.items()}})
    bench.write_report(report, out_dir)

    print(f"{'tracker':<16}{'prec@20':>10}{'AUC':>10}{'fps':>10}")
    for tname, res in report.overall.items():
        print(f"{tname:<16}{res.precision_at_20:>10.3f}{res.auc:>10.3f}"
              f"{res.fps:>10.1f}")
    failed = sum(len(f) for f in report.failures.values())
    if failed:
        for tname, fails in report.failures.items():
            for sname, err in fails.items():
                print(f"FAILED {tname}/{sname}: {err}", file=sys.stderr)
        return 1
    return 0


def cmd_synth(args) -> int:
    try:
        vx, vy = (float(v) for v in args.velocity.split(","))
        spec = SynthSpec(frame_w=args.frame_w, frame_h=args.frame_h,
                         target_w=args.target_w, target_h=args.target_h,
                         n_frames=args.frames, profile=args.profile,
                         velocity=(vx, vy), accel=args.accel,
                         blur=args.blur, seed=args.seed)
        frames, boxes = generate_synthetic(spec)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    _write_manifest(out_dir, args)
    bench.save_otb_sequence(out_dir, frames, boxes)
    print(f"wrote {len(frames)} frames to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sasatrack",
        description="Correlation-filter tracker with a motion-adaptive "
                    "search area, plus benchmark tooling.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("track", help="track one sequence")
    p.add_argument("sequence", help="OTB-layout sequence directory")
    p.add_argument("--box", help="initial box as x,y,w,h (default: first "
                                 "ground-truth line)")
    _add_common(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("bench", help="run a one-pass evaluation")
    p.add_argument("--dataset", help="directory of OTB-layout sequences")
    p.add_argument("--suite", choices=sorted(SUITES),
                   help="bundled synthetic suite")
    p.add_argument("--configs", default="dcf_sasa,dcf_baseline",
                   help="comma-separated preset names or config files")
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic sequence")
    p.add_argument("--frame-w", type=int, default=320)
    p.add_argument("--frame-h", type=int, default=240)
    p.add_argument("--target-w", type=int, default=40)
    p.add_argument("--target-h", type=int, default=40)
    p.add_argument("--frames", type=int, default=60)
    p.add_argument("--profile", choices=("constant", "accelerating",
                                         "stop_and_go"), default="constant")
    p.add_argument("--velocity", default="5,0")
    p.add_argument("--accel", type=float, default=0.0)
    p.add_argument("--blur", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
