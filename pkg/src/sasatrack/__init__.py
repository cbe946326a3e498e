"""Correlation-filter visual tracker with a motion-adaptive search area."""

from .controller import Level, SearchAreaState, ThresholdConfig
from .tracker import BoundingBox, TrackerConfig, init, run_sequence, track

__all__ = [
    "BoundingBox",
    "Level",
    "SearchAreaState",
    "ThresholdConfig",
    "TrackerConfig",
    "init",
    "run_sequence",
    "track",
]

__version__ = "0.1.0"
