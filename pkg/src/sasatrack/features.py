"""Patch extraction and multi-channel HOG features.

Images are float arrays in [0, 1], shaped (h, w) for grayscale or
(h, w, 3) for color.  Feature maps are (rows, cols, depth) float arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .spectral import hann_window

# block-normalization clipping value from the classic 31-channel variant
HOG_TRUNCATION = 0.2
# weight applied to the 4 texture-energy channels
HOG_TEXTURE_WEIGHT = 0.2357
_NORM_EPS = 1e-10


@dataclass(frozen=True)
class FeatureConfig:
    cell: int = 4
    use_gray: bool = False
    max_cells: int = 10_000  # pre-scale guard on the feature-grid area


def to_gray(img: np.ndarray) -> np.ndarray:
    """Collapse a color image to grayscale with luma weights."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] == 3:
        return img @ np.array([0.299, 0.587, 0.114])
    raise ValueError(f"unsupported image shape {img.shape}")


def extract_patch(img: np.ndarray, center: tuple[float, float],
                  win_w: int, win_h: int) -> np.ndarray:
    """Crop a win_h x win_w patch centered at `center` = (cx, cy).

    Pixels outside the frame replicate the nearest border pixel.
    """
    cx, cy = center
    if not (math.isfinite(cx) and math.isfinite(cy)):
        raise ValueError("patch center must be finite")
    if win_w < 1 or win_h < 1:
        raise ValueError("window dimensions must be >= 1")
    img = np.asarray(img)
    h, w = img.shape[:2]
    r0 = int(round(cy)) - win_h // 2
    c0 = int(round(cx)) - win_w // 2
    rows = np.clip(np.arange(r0, r0 + win_h), 0, h - 1)
    cols = np.clip(np.arange(c0, c0 + win_w), 0, w - 1)
    return img[np.ix_(rows, cols)]


def _cell_orientation_hist(gray: np.ndarray, cell: int,
                           n_orient: int = 18) -> np.ndarray:
    """Per-cell histogram of gradient magnitudes over n_orient directions.

    Gradients are centered differences with clamped borders; each pixel's
    magnitude goes to the nearest of the n_orient signed orientations.
    """
    h, w = gray.shape
    rows, cols = h // cell, w // cell
    h, w = rows * cell, cols * cell
    gray = gray[:h, :w]

    padded = np.pad(gray, 1, mode="edge")
    gx = 0.5 * (padded[1:-1, 2:] - padded[1:-1, :-2])
    gy = 0.5 * (padded[2:, 1:-1] - padded[:-2, 1:-1])
    mag = np.hypot(gx, gy)
    theta = np.mod(np.arctan2(gy, gx), 2.0 * np.pi)
    bins = np.mod(np.round(theta / (2.0 * np.pi / n_orient)).astype(np.intp),
                  n_orient)

    hist = np.zeros((rows, cols, n_orient))
    cell_r = np.repeat(np.arange(rows), cell)[:, None]
    cell_c = np.repeat(np.arange(cols), cell)[None, :]
    flat = (cell_r * cols + cell_c) * n_orient + bins
    np.add.at(hist.reshape(-1), flat.ravel(), mag.ravel())
    return hist


def hog(patch: np.ndarray, cell: int = 4) -> np.ndarray:
    """31-channel HOG: 18 signed + 9 unsigned orientations + 4 texture.

    Returns a (h//cell, w//cell, 31) feature map.  Block normalization
    uses the 4 diagonal 2x2 cell neighborhoods with truncation at 0.2.
    """
    gray = to_gray(patch)
    h, w = gray.shape
    if h < 2 * cell or w < 2 * cell:
        raise ValueError("patch must cover at least 2x2 cells")

    sensitive = _cell_orientation_hist(gray, cell)  # (rows, cols, 18)
    insensitive = sensitive[:, :, :9] + sensitive[:, :, 9:]

    energy = np.sum(insensitive ** 2, axis=2)
    # 2x2 block energies toward each diagonal neighbor, borders clamped
    e = np.pad(energy, 1, mode="edge")
    blocks = np.stack([
        e[:-2, :-2] + e[:-2, 1:-1] + e[1:-1, :-2] + e[1:-1, 1:-1],  # NW
        e[:-2, 1:-1] + e[:-2, 2:] + e[1:-1, 1:-1] + e[1:-1, 2:],    # NE
        e[1:-1, :-2] + e[1:-1, 1:-1] + e[2:, :-2] + e[2:, 1:-1],    # SW
        e[1:-1, 1:-1] + e[1:-1, 2:] + e[2:, 1:-1] + e[2:, 2:],      # SE
    ], axis=2)
    inv_norm = 1.0 / np.sqrt(blocks + _NORM_EPS)  # (rows, cols, 4)

    sens_n = np.minimum(sensitive[:, :, :, None] * inv_norm[:, :, None, :],
                        HOG_TRUNCATION)
    insens_n = np.minimum(insensitive[:, :, :, None] * inv_norm[:, :, None, :],
                          HOG_TRUNCATION)

    out = np.empty(sensitive.shape[:2] + (31,))
    out[:, :, :18] = 0.5 * sens_n.sum(axis=3)
    out[:, :, 18:27] = 0.5 * insens_n.sum(axis=3)
    out[:, :, 27:] = HOG_TEXTURE_WEIGHT * sens_n.sum(axis=2)
    return out


def _cell_mean_gray(gray: np.ndarray, cell: int) -> np.ndarray:
    rows, cols = gray.shape[0] // cell, gray.shape[1] // cell
    g = gray[:rows * cell, :cols * cell]
    g = g.reshape(rows, cell, cols, cell).mean(axis=(1, 3))
    return g - g.mean()


def featurize(patch: np.ndarray, cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Assemble the windowed feature map for a patch.

    HOG channels, optionally plus a mean-subtracted cell-averaged gray
    channel; every spatial slice is multiplied by a Hann window so border
    cells are exactly zero.
    """
    gray = to_gray(patch)
    rows, cols = gray.shape[0] // cfg.cell, gray.shape[1] // cfg.cell
    if rows * cols > cfg.max_cells:
        scale = math.sqrt(cfg.max_cells / (rows * cols))
        gray = cv2.resize(gray, None, fx=scale, fy=scale,
                          interpolation=cv2.INTER_AREA)

    feat = hog(gray, cfg.cell)
    if cfg.use_gray:
        gray_ch = _cell_mean_gray(gray, cfg.cell)
        feat = np.concatenate([feat, gray_ch[:, :, None]], axis=2)
    win = hann_window(feat.shape[0], feat.shape[1])
    return feat * win[:, :, None]
