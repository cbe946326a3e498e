"""Target motion history, polynomial velocity prediction and the
movement criterion.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InitialSize",
    "MotionHistory",
    "polyfit_extrapolate",
    "predict_velocity",
    "criterion",
]


@dataclass(frozen=True)
class InitialSize:
    """Target width/height at initialization; never updated afterwards."""
    sz_w: float
    sz_h: float

    def __post_init__(self):
        if self.sz_w <= 0 or self.sz_h <= 0:
            raise ValueError("initial size must be positive")


def polyfit_extrapolate(samples, order: int = 2) -> float:
    """Least-squares polynomial fit over idx = 1..n, evaluated at n + 1.

    With fewer samples than order + 1 the degree drops to n - 1 so the
    fit interpolates exactly.
    """
    y = np.asarray(samples, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("need a non-empty 1-D sample sequence")
    if not np.all(np.isfinite(y)):
        raise ValueError("samples must be finite")
    if order < 0:
        raise ValueError("order must be >= 0")
    n = y.size
    deg = min(order, n - 1)
    idx = np.arange(1, n + 1, dtype=np.float64)
    coeffs = np.polynomial.polynomial.polyfit(idx, y, deg)
    return float(np.polynomial.polynomial.polyval(n + 1.0, coeffs))


class MotionHistory:
    """Ring buffer of recent positions with derived per-frame velocities."""

    def __init__(self, capacity: int = 5):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._last: tuple[float, float] | None = None
        self._vx: deque[float] = deque(maxlen=capacity)
        self._vy: deque[float] = deque(maxlen=capacity)

    def push(self, x: float, y: float) -> None:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError("positions must be finite")
        if self._last is not None:
            self._vx.append(x - self._last[0])
            self._vy.append(y - self._last[1])
        self._last = (x, y)

    def __len__(self) -> int:
        return len(self._vx)

    @property
    def velocities_x(self) -> list[float]:
        return list(self._vx)

    @property
    def velocities_y(self) -> list[float]:
        return list(self._vy)


def predict_velocity(hist: MotionHistory, order: int = 2) -> tuple[float, float]:
    """Extrapolated next-frame velocity (vx, vy) from the history."""
    if len(hist) == 0:
        return (0.0, 0.0)
    return (polyfit_extrapolate(hist.velocities_x, order),
            polyfit_extrapolate(hist.velocities_y, order))


def criterion(velocity: tuple[float, float], init: InitialSize) -> float:
    """Movement measure: predicted speed normalized by the initial size."""
    vx, vy = velocity
    return math.hypot(vx / init.sz_w, vy / init.sz_h)
