"""Sequence I/O (OTB layout), tracking metrics and the one-pass
evaluation driver.
"""

from __future__ import annotations

import csv
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .synth import SynthSpec, generate_synthetic
from .tracker import BoundingBox, TrackerConfig, run_sequence

PRECISION_THRESHOLDS = np.arange(0, 51, 1, dtype=np.float64)        # pixels
SUCCESS_THRESHOLDS = np.round(np.arange(21) * 0.05, 2)              # IoU

GROUNDTRUTH_FILE = "groundtruth_rect.txt"
ATTRIBUTES_FILE = "attributes.txt"
IMAGE_DIR = "img"


class Sequence:
    """Frames (in memory or lazily from disk) plus ground truth."""

    def __init__(self, name: str, groundtruth: list[BoundingBox],
                 images: list[np.ndarray] | None = None,
                 paths: list[Path] | None = None,
                 attributes: set[str] | None = None):
        if (images is None) == (paths is None):
            raise ValueError("provide exactly one of images or paths")
        n = len(images) if images is not None else len(paths)
        if n != len(groundtruth):
            raise ValueError(
                f"{name}: {n} frames but {len(groundtruth)} ground-truth boxes")
        if n == 0:
            raise ValueError(f"{name}: empty sequence")
        self.name = name
        self.groundtruth = groundtruth
        self.attributes = attributes or set()
        self._images = images
        self._paths = paths

    def __len__(self) -> int:
        return len(self.groundtruth)

    def frame(self, i: int) -> np.ndarray:
        if self._images is not None:
            return self._images[i]
        img = cv2.imread(str(self._paths[i]), cv2.IMREAD_GRAYSCALE)
        if img is None:
            raise IOError(f"cannot read frame {self._paths[i]}")
        return img.astype(np.float64) / 255.0

    def frames(self):
        for i in range(len(self)):
            yield self.frame(i)


def _parse_box_line(line: str, lineno: int) -> BoundingBox:
    parts = [p for p in re.split(r"[,\t ]+", line.strip()) if p]
    if len(parts) != 4:
        raise ValueError(f"line {lineno}: expected 4 fields, got {len(parts)}")
    try:
        x, y, w, h = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"line {lineno}: {exc}") from None
    if w <= 0 or h <= 0:
        raise ValueError(f"line {lineno}: non-positive box size")
    return BoundingBox.from_tlwh(x, y, w, h)


def load_otb_sequence(directory: str | Path) -> Sequence:
    """Load an OTB-layout sequence: img/ frames + groundtruth_rect.txt."""
    directory = Path(directory)
    gt_file = directory / GROUNDTRUTH_FILE
    if not gt_file.is_file():
        raise FileNotFoundError(f"missing {gt_file}")
    img_dir = directory / IMAGE_DIR
    if not img_dir.is_dir():
        subdirs = [d for d in directory.iterdir() if d.is_dir()]
        if len(subdirs) != 1:
            raise FileNotFoundError(f"no image subfolder in {directory}")
        img_dir = subdirs[0]
    paths = sorted(p for p in img_dir.iterdir()
                   if p.suffix.lower() in (".png", ".jpg", ".jpeg", ".bmp"))
    if not paths:
        raise FileNotFoundError(f"no image files in {img_dir}")

    boxes = []
    with open(gt_file) as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                boxes.append(_parse_box_line(line, lineno))
    if len(boxes) != len(paths):
        raise ValueError(f"{directory.name}: {len(paths)} frames but "
                         f"{len(boxes)} ground-truth lines")

    attributes = set()
    attr_file = directory / ATTRIBUTES_FILE
    if attr_file.is_file():
        attributes = {ln.strip() for ln in attr_file.read_text().splitlines()
                      if ln.strip()}
    return Sequence(directory.name, boxes, paths=paths, attributes=attributes)


def save_otb_sequence(seq_dir: str | Path, frames: list[np.ndarray],
                      groundtruth: list[BoundingBox],
                      attributes: set[str] | None = None) -> Path:
    """Write frames + ground truth in the layout load_otb_sequence reads."""
    seq_dir = Path(seq_dir)
    img_dir = seq_dir / IMAGE_DIR
    img_dir.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames, start=1):
        img = np.clip(frame * 255.0, 0, 255).astype(np.uint8)
        cv2.imwrite(str(img_dir / f"{i:04d}.png"), img)
    with open(seq_dir / GROUNDTRUTH_FILE, "w") as fh:
        for box in groundtruth:
            x, y, w, h = box.to_tlwh()
            fh.write(f"{x:g},{y:g},{w:g},{h:g}\n")
    if attributes:
        (seq_dir / ATTRIBUTES_FILE).write_text(
            "".join(f"{a}\n" for a in sorted(attributes)))
    return seq_dir


def synthetic_sequence(name: str, spec: SynthSpec,
                       attributes: set[str] | None = None) -> Sequence:
    frames, boxes = generate_synthetic(spec)
    return Sequence(name, boxes, images=frames, attributes=attributes)


# --- metrics ---------------------------------------------------------------

def center_error(a: BoundingBox, b: BoundingBox) -> float:
    return math.hypot(a.cx - b.cx, a.cy - b.cy)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    ix = min(a.cx + a.w / 2, b.cx + b.w / 2) - max(a.cx - a.w / 2, b.cx - b.w / 2)
    iy = min(a.cy + a.h / 2, b.cy + b.h / 2) - max(a.cy - a.h / 2, b.cy - b.h / 2)
    inter = max(0.0, ix) * max(0.0, iy)
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


@dataclass
class EvalResult:
    precision: np.ndarray       # over PRECISION_THRESHOLDS
    success: np.ndarray         # over SUCCESS_THRESHOLDS
    precision_at_20: float
    auc: float
    fps: float = float("nan")
    boxes: list[BoundingBox] = field(default_factory=list)


def evaluate(predictions: list[BoundingBox],
             groundtruth: list[BoundingBox]) -> EvalResult:
    """Precision/success curves, precision@20 and success AUC."""
    if len(predictions) != len(groundtruth):
        raise ValueError(f"{len(predictions)} predictions for "
                         f"{len(groundtruth)} ground-truth boxes")
    errors = np.array([center_error(p, g)
                       for p, g in zip(predictions, groundtruth)])
    overlaps = np.array([iou(p, g) for p, g in zip(predictions, groundtruth)])
    precision = np.array([(errors <= t).mean() for t in PRECISION_THRESHOLDS])
    success = np.array([(overlaps >= t).mean() for t in SUCCESS_THRESHOLDS])
    return EvalResult(precision=precision, success=success,
                      precision_at_20=float(precision[20]),
                      auc=float(success.mean()), boxes=list(predictions))


# --- one-pass evaluation ---------------------------------------------------

@dataclass
class OPEReport:
    overall: dict[str, EvalResult]                     # tracker -> averaged
    per_sequence: dict[str, dict[str, EvalResult]]     # tracker -> seq -> result
    per_attribute: dict[str, dict[str, EvalResult]]    # tracker -> attr -> avg
    diagnostics: dict[str, dict[str, list]]            # tracker -> seq -> diags
    failures: dict[str, dict[str, str]]                # tracker -> seq -> error


def _average(results: list[EvalResult]) -> EvalResult:
    precision = np.mean([r.precision for r in results], axis=0)
    success = np.mean([r.success for r in results], axis=0)
    fps = float(np.nanmean([r.fps for r in results]))
    return EvalResult(precision=precision, success=success,
                      precision_at_20=float(precision[20]),
                      auc=float(success.mean()), fps=fps)


def _run_one(tracker, seq: Sequence) -> tuple[EvalResult, list]:
    t0 = time.perf_counter()
    if callable(tracker):
        boxes, diags = tracker(seq), []
    else:
        boxes, diags = run_sequence(seq.frames(), seq.groundtruth[0], tracker)
    elapsed = time.perf_counter() - t0
    result = evaluate(boxes, seq.groundtruth)
    result.fps = len(seq) / elapsed if elapsed > 0 else float("inf")
    return result, diags


def run_ope(trackers: dict[str, TrackerConfig], sequences: list[Sequence],
            workers: int = 1) -> OPEReport:
    """One-pass evaluation of every tracker over every sequence.

    `trackers` values may also be callables (sequence -> box list), which
    is handy for oracle/reference entries.  Per-sequence failures are
    recorded and the run continues.
    """
    if not trackers or not sequences:
        raise ValueError("need at least one tracker and one sequence")
    report = OPEReport(overall={}, per_sequence={}, per_attribute={},
                       diagnostics={}, failures={})
    jobs = [(tname, seq) for tname in trackers for seq in sequences]

    def work(job):
        tname, seq = job
        try:
            return tname, seq, _run_one(trackers[tname], seq), None
        except Exception as exc:  # noqa: BLE001 - recorded, run continues
            return tname, seq, None, str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(work, jobs))
    else:
        outcomes = [work(j) for j in jobs]

    for tname in trackers:
        per_seq, diags, fails = {}, {}, {}
        for name, seq, outcome, err in outcomes:
            if name != tname:
                continue
            if err is not None:
                fails[seq.name] = err
                continue
            result, seq_diags = outcome
            per_seq[seq.name] = result
            diags[seq.name] = seq_diags
        # deterministic merge regardless of worker scheduling
        per_seq = dict(sorted(per_seq.items()))
        if not per_seq:
            raise RuntimeError(f"tracker {tname!r} failed on every sequence: "
                               f"{fails}")
        report.per_sequence[tname] = per_seq
        report.diagnostics[tname] = diags
        report.failures[tname] = fails
        report.overall[tname] = _average(list(per_seq.values()))

        attrs = sorted({a for s in sequences for a in s.attributes})
        by_attr = {}
        for attr in attrs:
            hits = [per_seq[s.name] for s in sequences
                    if attr in s.attributes and s.name in per_seq]
            if hits:
                by_attr[attr] = _average(hits)
        report.per_attribute[tname] = by_attr
    return report


# --- persistence -----------------------------------------------------------

def write_report(report: OPEReport, out_dir: str | Path) -> None:
    """Dump curves + per-frame diagnostics as CSV and plot SVGs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "summary.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["tracker", "scope", "precision_at_20", "auc", "fps"])
        for tname, res in report.overall.items():
            wr.writerow([tname, "overall", f"{res.precision_at_20:.4f}",
                         f"{res.auc:.4f}", f"{res.fps:.1f}"])
            for attr, ares in report.per_attribute[tname].items():
                wr.writerow([tname, f"attr:{attr}", f"{ares.precision_at_20:.4f}",
                             f"{ares.auc:.4f}", f"{ares.fps:.1f}"])

    with open(out_dir / "curves.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["tracker", "curve", "threshold", "value"])
        for tname, res in report.overall.items():
            for t, v in zip(PRECISION_THRESHOLDS, res.precision):
                wr.writerow([tname, "precision", f"{t:g}", f"{v:.6f}"])
            for t, v in zip(SUCCESS_THRESHOLDS, res.success):
                wr.writerow([tname, "success", f"{t:g}", f"{v:.6f}"])

    with open(out_dir / "frames.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["tracker", "sequence", "frame", "x", "y", "w", "h",
                     "zeta", "level", "psr", "ms"])
        for tname, by_seq in report.diagnostics.items():
            for sname, diags in sorted(by_seq.items()):
                for d in diags:
                    x, y, w, h = d.box.to_tlwh()
                    wr.writerow([tname, sname, d.frame, f"{x:.2f}", f"{y:.2f}",
                                 f"{w:g}", f"{h:g}", f"{d.zeta:.4f}",
                                 int(d.level), f"{d.psr:.2f}", f"{d.ms:.2f}"])

    _write_plots(report, out_dir)


def _write_plots(report: OPEReport, out_dir: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    for tname, res in report.overall.items():
        ax.plot(PRECISION_THRESHOLDS, res.precision,
                label=f"{tname} [{res.precision_at_20:.3f}]")
    ax.set_xlabel("center error threshold (px)")
    ax.set_ylabel("precision")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("Precision plot")
    fig.tight_layout()
    fig.savefig(out_dir / "precision.svg")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    for tname, res in report.overall.items():
        ax.plot(SUCCESS_THRESHOLDS, res.success,
                label=f"{tname} [{res.auc:.3f}]")
    ax.set_xlabel("overlap threshold")
    ax.set_ylabel("success rate")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower left", fontsize=8)
    ax.set_title("Success plot")
    fig.tight_layout()
    fig.savefig(out_dir / "success.svg")
    plt.close(fig)
