"""Tracking pipeline: localize, predict motion, adapt the search area,
resize the filter and update it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import dcf
from .controller import Level, SearchAreaState, ThresholdConfig, step
from .features import FeatureConfig, extract_patch, featurize
from .motion import InitialSize, MotionHistory, criterion, predict_velocity
from .spectral import dft2, gaussian_label


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box: subpixel center plus width/height in pixels."""
    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError("box width/height must be positive")

    @classmethod
    def from_tlwh(cls, x: float, y: float, w: float, h: float) -> "BoundingBox":
        return cls(cx=x + (w - 1) / 2.0, cy=y + (h - 1) / 2.0, w=w, h=h)

    def to_tlwh(self) -> tuple[float, float, float, float]:
        return (self.cx - (self.w - 1) / 2.0, self.cy - (self.h - 1) / 2.0,
                self.w, self.h)


@dataclass(frozen=True)
class TrackerConfig:
    paddings: tuple[float, float, float] = (1.0, 1.8, 2.6)
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    lam: float = 0.01
    eta: float = 0.025
    fit_order: int = 2
    history: int = 5
    resize_method: str = "frequency"  # spatial | frequency
    cell: int = 4
    sigma_factor: float = 0.1
    use_gray: bool = False
    confidence_gate: float | None = None  # minimum PSR to allow a resize
    adaptive: bool = True  # False pins the level to S1 (fixed-area baseline)

    def validate(self) -> None:
        s1, s2, s3 = self.paddings
        if not (0 < s1 <= s2 <= s3):
            raise ValueError("paddings must be positive and non-decreasing")
        if self.resize_method not in ("spatial", "frequency"):
            raise ValueError(f"unknown resize method {self.resize_method!r}")
        self.thresholds.validate()

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(cell=self.cell, use_gray=self.use_gray)


@dataclass
class FrameDiagnostics:
    frame: int
    box: BoundingBox
    zeta: float
    level: Level
    psr: float
    ms: float
    low_confidence: bool = False


@dataclass
class TrackerState:
    cfg: TrackerConfig
    model: dcf.FilterModel
    position: BoundingBox
    initial_size: InitialSize
    history: MotionHistory
    area: SearchAreaState
    frame_index: int
    window: tuple[int, int]  # (win_w, win_h) in pixels
    label: np.ndarray  # label spectrum for the current grid
    last_diag: FrameDiagnostics | None = None


def _window_for(cfg: TrackerConfig, size: InitialSize,
                level: Level) -> tuple[int, int]:
    """Search window in pixels for a level, quantized to whole HOG cells."""
    pad = cfg.paddings[level - 1]
    win_w = max(2, int(round(size.sz_w * (1.0 + pad) / cfg.cell))) * cfg.cell
    win_h = max(2, int(round(size.sz_h * (1.0 + pad) / cfg.cell))) * cfg.cell
    return (win_w, win_h)


def _grid_of(window: tuple[int, int], cell: int) -> tuple[int, int]:
    return (window[1] // cell, window[0] // cell)  # (rows, cols)


def _label_spectrum(cfg: TrackerConfig, size: InitialSize,
                    grid: tuple[int, int]) -> np.ndarray:
    sigma = cfg.sigma_factor * np.sqrt(
        (size.sz_w / cfg.cell) * (size.sz_h / cfg.cell))
    peak = (grid[0] // 2, grid[1] // 2)
    return dft2(gaussian_label(grid[0], grid[1], sigma, peak))


def init(frame: np.ndarray, box: BoundingBox, cfg: TrackerConfig) -> TrackerState:
    """Initialize a tracker on the first frame's ground-truth box."""
    cfg.validate()
    if box.w * box.h <= 0:
        raise ValueError("degenerate initial box")
    size = InitialSize(sz_w=box.w, sz_h=box.h)
    window = _window_for(cfg, size, Level.S1)
    grid = _grid_of(window, cfg.cell)
    label = _label_spectrum(cfg, size, grid)
    patch = extract_patch(frame, (box.cx, box.cy), window[0], window[1])
    feat = featurize(patch, cfg.feature_config())
    model = dcf.train_init(feat, label, cfg.lam, cfg.eta)
    history = MotionHistory(cfg.history)
    history.push(box.cx, box.cy)
    return TrackerState(cfg=cfg, model=model, position=box,
                        initial_size=size, history=history,
                        area=SearchAreaState(level=Level.S1),
                        frame_index=1, window=window, label=label)


def _wrap_offset(idx: int, center: int, n: int) -> int:
    """Minimal circular displacement of idx relative to center."""
    return (idx - center + n // 2) % n - n // 2


def track(state: TrackerState, frame: np.ndarray) -> tuple[TrackerState, BoundingBox]:
    """Process one frame; returns the updated state and the new box."""
    cfg = state.cfg
    t0 = time.perf_counter()
    fcfg = cfg.feature_config()

    # localize with the previous filter at the previous position
    patch = extract_patch(frame, (state.position.cx, state.position.cy),
                          state.window[0], state.window[1])
    feat = featurize(patch, fcfg)
    resp = dcf.detect(state.model, feat)
    grid = state.model.grid_size
    dr = _wrap_offset(resp.peak_pos[0], grid[0] // 2, grid[0])
    dc = _wrap_offset(resp.peak_pos[1], grid[1] // 2, grid[1])
    pos = BoundingBox(cx=state.position.cx + dc * cfg.cell,
                      cy=state.position.cy + dr * cfg.cell,
                      w=state.position.w, h=state.position.h)

    # motion criterion from the velocity history
    state.history.push(pos.cx, pos.cy)
    zeta = criterion(predict_velocity(state.history, cfg.fit_order),
                     state.initial_size)

    # search-area level and window for this frame
    low_confidence = (cfg.confidence_gate is not None
                      and resp.psr < cfg.confidence_gate)
    area = state.area
    if cfg.adaptive:
        new_area = step(area, zeta, cfg.thresholds)
        if new_area.level != area.level and low_confidence:
            new_area = area.reset_counters()  # hold the level, drop the dwell
        area = new_area

    window = _window_for(cfg, state.initial_size, area.level)
    model, label = state.model, state.label
    if window != state.window:
        new_grid = _grid_of(window, cfg.cell)
        model = dcf.resize_model(model, new_grid, cfg.resize_method)
        label = _label_spectrum(cfg, state.initial_size, new_grid)

    # appearance update at the new position on the (possibly new) grid
    patch = extract_patch(frame, (pos.cx, pos.cy), window[0], window[1])
    feat = featurize(patch, fcfg)
    model = dcf.update(model, feat, label)

    new_state = TrackerState(cfg=cfg, model=model, position=pos,
                             initial_size=state.initial_size,
                             history=state.history, area=area,
                             frame_index=state.frame_index + 1,
                             window=window, label=label)
    ms = (time.perf_counter() - t0) * 1000.0
    new_state.last_diag = FrameDiagnostics(
        frame=new_state.frame_index, box=pos, zeta=zeta, level=area.level,
        psr=resp.psr, ms=ms, low_confidence=low_confidence)
    return new_state, pos


def run_sequence(frames, init_box: BoundingBox,
                 cfg: TrackerConfig) -> tuple[list[BoundingBox], list[FrameDiagnostics]]:
    """Track through an iterable of frames; one box per frame.

    The first reported box is the initialization box itself.
    """
    boxes: list[BoundingBox] = []
    diags: list[FrameDiagnostics] = []
    state: TrackerState | None = None
    for frame in frames:
        if state is None:
            t0 = time.perf_counter()
            state = init(frame, init_box, cfg)
            boxes.append(init_box)
            diags.append(FrameDiagnostics(
                frame=1, box=init_box, zeta=0.0, level=Level.S1, psr=float("inf"),
                ms=(time.perf_counter() - t0) * 1000.0))
        else:
            state, box = track(state, frame)
            boxes.append(box)
            assert state.last_diag is not None
            diags.append(state.last_diag)
    if state is None:
        raise ValueError("empty frame sequence")
    return boxes, diags
