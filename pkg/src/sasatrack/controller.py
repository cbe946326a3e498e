"""Search-area level selection from the movement criterion.

Three strategies are supported: a plain piecewise threshold map, a
hysteresis loop with disjoint bands, and the default entangled-hysteresis
variant whose grow/shrink loops overlap and which allows a direct jump
between the smallest and largest level.  Shrinking additionally requires
the qualifying condition to hold for a dwell of consecutive frames.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class Level(enum.IntEnum):
    S1 = 1
    S2 = 2
    S3 = 3


@dataclass(frozen=True)
class ThresholdConfig:
    t1: float = 0.1
    t2: float = 0.2
    t3: float = 0.5
    t4: float = 1.5
    mode: str = "entangled"  # same | hysteresis | entangled
    shrink_dwell: int = 10
    grow_dwell: int = 1

    def validate(self) -> None:
        if self.mode not in ("same", "hysteresis", "entangled"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if not self.t1 < self.t2:
            raise ValueError("need T1 < T2")
        if self.mode in ("hysteresis", "entangled") and not self.t2 < self.t3 < self.t4:
            raise ValueError("need T2 < T3 < T4 in hysteresis/entangled mode")
        if self.shrink_dwell < 1 or self.grow_dwell < 1:
            raise ValueError("dwell counts must be >= 1")


@dataclass(frozen=True)
class SearchAreaState:
    """Current level plus consecutive-qualifying counters.

    `below_weak` counts frames the weaker shrink condition has held,
    `below_strong` the stronger one (direct two-level shrink); the grow
    counters mirror them and matter only when grow_dwell > 1.
    """
    level: Level = Level.S1
    below_weak: int = 0
    below_strong: int = 0
    above_weak: int = 0
    above_strong: int = 0

    def reset_counters(self) -> "SearchAreaState":
        return SearchAreaState(level=self.level)


def _step_same(zeta: float, cfg: ThresholdConfig) -> Level:
    if zeta < cfg.t1:
        return Level.S1
    if zeta <= cfg.t2:
        return Level.S2
    return Level.S3


def step(state: SearchAreaState, zeta: float,
         cfg: ThresholdConfig) -> SearchAreaState:
    """Advance the search-area state by one frame's criterion value."""
    cfg.validate()
    if zeta < 0:
        raise ValueError("criterion value must be >= 0")

    if cfg.mode == "same":
        return SearchAreaState(level=_step_same(zeta, cfg))

    if cfg.mode == "hysteresis":
        # disjoint loops: S1<->S2 over [T1, T2], S2<->S3 over [T3, T4]
        grow_weak = state.level == Level.S1 and zeta > cfg.t2
        grow_strong = False
        grow2 = state.level == Level.S2 and zeta > cfg.t4
        shrink_weak = state.level == Level.S3 and zeta < cfg.t3
        shrink_strong = False
        shrink2 = state.level == Level.S2 and zeta < cfg.t1
    else:
        # entangled: loops [T1, T3] and [T2, T4] overlap, plus the direct
        # S1<->S3 span [T1, T4]
        grow_weak = state.level == Level.S1 and zeta > cfg.t3
        grow_strong = state.level == Level.S1 and zeta > cfg.t4
        grow2 = state.level == Level.S2 and zeta > cfg.t4
        shrink_weak = state.level == Level.S3 and zeta < cfg.t2
        shrink_strong = state.level == Level.S3 and zeta < cfg.t1
        shrink2 = state.level == Level.S2 and zeta < cfg.t1

    above_weak = state.above_weak + 1 if (grow_weak or grow2) else 0
    above_strong = state.above_strong + 1 if grow_strong else 0
    below_weak = state.below_weak + 1 if (shrink_weak or shrink2) else 0
    below_strong = state.below_strong + 1 if shrink_strong else 0

    if above_strong >= cfg.grow_dwell:
        return SearchAreaState(level=Level.S3)
    if above_weak >= cfg.grow_dwell:
        target = Level.S3 if state.level == Level.S2 else Level.S2
        return SearchAreaState(level=target)
    if below_strong >= cfg.shrink_dwell and state.level == Level.S3:
        return SearchAreaState(level=Level.S1)
    if below_weak >= cfg.shrink_dwell:
        target = Level.S1 if state.level == Level.S2 else Level.S2
        return SearchAreaState(level=target)

    return replace(state, below_weak=below_weak, below_strong=below_strong,
                   above_weak=above_weak, above_strong=above_strong)
