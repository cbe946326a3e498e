"""Seeded synthetic sequences: a textured target moving over a textured
background, with exact per-frame ground truth and optional motion blur.
"""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

from .tracker import BoundingBox

PROFILES = ("constant", "accelerating", "stop_and_go")


@dataclass(frozen=True)
class SynthSpec:
    frame_w: int = 320
    frame_h: int = 240
    target_w: int = 40
    target_h: int = 40
    n_frames: int = 60
    profile: str = "constant"
    velocity: tuple[float, float] = (5.0, 0.0)
    accel: float = 0.0          # accelerating: speed gain per frame
    vmax: float = 1e9           # accelerating: speed cap
    go_frames: int = 10         # stop_and_go: frames moving per cycle
    stop_frames: int = 10       # stop_and_go: frames resting per cycle
    blur: bool = False
    seed: int = 0
    target_contrast: float = 0.6
    background_contrast: float = 0.25

    def validate(self) -> None:
        if self.profile not in PROFILES:
            raise ValueError(f"unknown motion profile {self.profile!r}")
        if self.n_frames < 1:
            raise ValueError("need at least one frame")
        if self.target_w >= self.frame_w or self.target_h >= self.frame_h:
            raise ValueError("target does not fit inside the frame")


def _velocity_at(spec: SynthSpec, t: int, direction: np.ndarray) -> np.ndarray:
    v = np.asarray(spec.velocity, dtype=np.float64)
    if spec.profile == "constant":
        return v * direction
    if spec.profile == "accelerating":
        speed = np.hypot(*v) + spec.accel * t
        speed = min(speed, spec.vmax)
        unit = v / np.hypot(*v) if np.hypot(*v) > 0 else np.array([1.0, 0.0])
        return speed * unit * direction
    # stop_and_go
    cycle = spec.go_frames + spec.stop_frames
    return v * direction if (t % cycle) < spec.go_frames else np.zeros(2)


def trajectory(spec: SynthSpec) -> list[tuple[int, int]]:
    """Integer top-left target positions per frame; bounces off borders."""
    spec.validate()
    half_slack_x = spec.frame_w - spec.target_w
    half_slack_y = spec.frame_h - spec.target_h
    pos = np.array([spec.frame_w * 0.25, spec.frame_h * 0.5], dtype=np.float64)
    pos -= (spec.target_w / 2.0, spec.target_h / 2.0)
    direction = np.array([1.0, 1.0])
    out = []
    for t in range(spec.n_frames):
        out.append((int(round(pos[0])), int(round(pos[1]))))
        pos += _velocity_at(spec, t, direction)
        # reflect so the target stays fully inside the frame
        for ax, limit in ((0, half_slack_x), (1, half_slack_y)):
            if pos[ax] < 0:
                pos[ax] = -pos[ax]
                direction[ax] *= -1
            elif pos[ax] > limit:
                pos[ax] = 2 * limit - pos[ax]
                direction[ax] *= -1
    return out


def _texture(rng: np.random.Generator, h: int, w: int,
             contrast: float, smooth: int) -> np.ndarray:
    tex = rng.random((h, w))
    if smooth > 1:
        tex = cv2.blur(tex, (smooth, smooth))
        lo, hi = tex.min(), tex.max()
        tex = (tex - lo) / (hi - lo + 1e-12)
    return contrast * tex


def _motion_blur(frame: np.ndarray, v: np.ndarray) -> np.ndarray:
    speed = float(np.hypot(*v))
    length = max(1, int(round(speed)))
    if length == 1:
        return frame
    unit = v / speed
    acc = np.zeros_like(frame)
    h, w = frame.shape
    rr, cc = np.arange(h)[:, None], np.arange(w)[None, :]
    for s in np.linspace(-(length - 1) / 2.0, (length - 1) / 2.0, length):
        dy, dx = int(round(s * unit[1])), int(round(s * unit[0]))
        acc += frame[np.clip(rr + dy, 0, h - 1), np.clip(cc + dx, 0, w - 1)]
    return acc / length


def generate_synthetic(spec: SynthSpec) -> tuple[list[np.ndarray], list[BoundingBox]]:
    """Render the sequence; returns grayscale frames in [0, 1] and the
    exact ground-truth box per frame.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    background = 0.5 - spec.background_contrast / 2.0 + _texture(
        rng, spec.frame_h, spec.frame_w,
        contrast=spec.background_contrast, smooth=9)
    target = (1.0 - spec.target_contrast) / 2.0 + _texture(
        rng, spec.target_h, spec.target_w,
        contrast=spec.target_contrast, smooth=3)
    target = np.clip(target, 0.0, 1.0)

    positions = trajectory(spec)
    frames, boxes = [], []
    prev = positions[0]
    for t, (x, y) in enumerate(positions):
        frame = background.copy()
        frame[y:y + spec.target_h, x:x + spec.target_w] = target
        if spec.blur:
            v = np.array([x - prev[0], y - prev[1]], dtype=np.float64)
            frame = _motion_blur(frame, v)
        prev = (x, y)
        frames.append(frame)
        boxes.append(BoundingBox.from_tlwh(x, y, spec.target_w, spec.target_h))
    return frames, boxes
