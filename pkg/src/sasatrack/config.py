"""Tracker configuration presets and YAML (de)serialization."""

from __future__ import annotations

from dataclasses import asdict, replace
from pathlib import Path

import yaml

from .controller import ThresholdConfig
from .tracker import TrackerConfig

PRESETS: dict[str, TrackerConfig] = {
    "dcf_sasa": TrackerConfig(
        paddings=(1.0, 1.8, 2.6),
        thresholds=ThresholdConfig(t1=0.1, t2=0.2, t3=0.5, t4=1.5),
    ),
    "dsst_sasa": TrackerConfig(
        paddings=(1.5, 2.0, 2.5),
        thresholds=ThresholdConfig(t1=0.1, t2=0.2, t3=0.6, t4=0.9),
    ),
    "samf_sasa": TrackerConfig(
        paddings=(1.5, 2.0, 2.5),
        thresholds=ThresholdConfig(t1=0.1, t2=0.2, t3=0.5, t4=1.3),
    ),
    # fixed-area baseline: the smallest window, controller disabled
    "dcf_baseline": TrackerConfig(
        paddings=(1.0, 1.8, 2.6),
        thresholds=ThresholdConfig(t1=0.1, t2=0.2, t3=0.5, t4=1.5),
        adaptive=False,
    ),
}


def to_dict(cfg: TrackerConfig) -> dict:
    d = asdict(cfg)
    d["paddings"] = list(cfg.paddings)
    return d


def from_dict(data: dict) -> TrackerConfig:
    data = dict(data)
    thr = data.pop("thresholds", {})
    cfg = TrackerConfig(thresholds=ThresholdConfig(**thr), **{
        k: tuple(v) if k == "paddings" else v for k, v in data.items()})
    cfg.validate()
    return cfg


def load_config(source: str | Path) -> TrackerConfig:
    """Resolve a preset name or a YAML config file path."""
    if str(source) in PRESETS:
        return PRESETS[str(source)]
    path = Path(source)
    if not path.is_file():
        raise FileNotFoundError(
            f"{source!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping of config fields")
    return from_dict(data)


def save_config(cfg: TrackerConfig, path: str | Path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(to_dict(cfg), fh, sort_keys=False)


def apply_overrides(cfg: TrackerConfig, overrides: list[str]) -> TrackerConfig:
    """Apply `key=value` overrides; threshold fields use a `thresholds.` prefix."""
    thr = cfg.thresholds
    plain: dict = {}
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        value = yaml.safe_load(raw)
        if key.startswith("thresholds."):
            thr = replace(thr, **{key.split(".", 1)[1]: value})
        elif key == "paddings":
            plain[key] = tuple(value)
        else:
            plain[key] = value
    cfg = replace(cfg, thresholds=thr, **plain)
    cfg.validate()
    return cfg
