"""Multi-channel correlation filter: training, update, resize, detection.

The filter is kept as separate numerator/denominator spectra so the
running average can be maintained per frame and the regularizer added
only at the division.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .spectral import resize_grid_spatial

PSR_EXCLUSION = 11  # side of the window masked out around the peak

_SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class FilterModel:
    """Numerator stack A (depth, rows, cols) and shared denominator B."""
    A: np.ndarray
    B: np.ndarray
    lam: float
    eta: float

    @property
    def depth(self) -> int:
        return self.A.shape[0]

    @property
    def grid_size(self) -> tuple[int, int]:
        return self.B.shape


@dataclass(frozen=True)
class ResponseMap:
    values: np.ndarray
    peak_pos: tuple[int, int]
    peak_value: float
    psr: float


def _spectra(feat: np.ndarray) -> np.ndarray:
    """Per-channel forward transforms of a (rows, cols, depth) feature map."""
    return np.fft.fft2(np.moveaxis(feat.astype(np.float64), 2, 0), axes=(1, 2))


def _check_match(model: FilterModel, feat: np.ndarray) -> None:
    if feat.shape[:2] != model.grid_size:
        raise ValueError(
            f"feature grid {feat.shape[:2]} does not match model {model.grid_size}")
    if feat.shape[2] != model.depth:
        raise ValueError(
            f"feature depth {feat.shape[2]} does not match model {model.depth}")


def train_init(feat: np.ndarray, label: np.ndarray,
               lam: float = 0.01, eta: float = 0.025) -> FilterModel:
    """Closed-form single-sample filter from a feature map and label spectrum."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if feat.shape[:2] != label.shape:
        raise ValueError(
            f"label grid {label.shape} does not match features {feat.shape[:2]}")
    F = _spectra(feat)
    A = np.conj(label)[None] * F
    B = np.sum(np.conj(F) * F, axis=0)
    return FilterModel(A=A, B=B, lam=float(lam), eta=float(eta))


def update(model: FilterModel, feat: np.ndarray, label: np.ndarray) -> FilterModel:
    """Running-average update of the filter statistics with rate eta."""
    _check_match(model, feat)
    if feat.shape[:2] != label.shape:
        raise ValueError("label grid does not match features")
    eta = model.eta
    if eta == 0.0:
        return model
    new = train_init(feat, label, model.lam, eta)
    return FilterModel(A=(1.0 - eta) * model.A + eta * new.A,
                       B=(1.0 - eta) * model.B + eta * new.B,
                       lam=model.lam, eta=eta)


def _psr(values: np.ndarray, peak: tuple[int, int]) -> float:
    mask = np.ones(values.shape, dtype=bool)
    half = PSR_EXCLUSION // 2
    rows = np.mod(np.arange(peak[0] - half, peak[0] + half + 1), values.shape[0])
    cols = np.mod(np.arange(peak[1] - half, peak[1] + half + 1), values.shape[1])
    mask[np.ix_(rows, cols)] = False
    side = values[mask]
    if side.size == 0:
        return float("inf")
    std = side.std()
    if std == 0:
        return float("inf")
    return float((values[peak] - side.mean()) / std)


def detect(model: FilterModel, feat: np.ndarray) -> ResponseMap:
    """Correlation response of the filter over a candidate feature map."""
    _check_match(model, feat)
    Z = _spectra(feat)
    num = np.sum(np.conj(model.A) * Z, axis=0)
    y = np.fft.ifft2(num / (model.B + model.lam)).real
    peak = np.unravel_index(np.argmax(y), y.shape)
    peak = (int(peak[0]), int(peak[1]))
    return ResponseMap(values=y, peak_pos=peak,
                       peak_value=float(y[peak]), psr=_psr(y, peak))


def _spatial_resize_spectrum(spec: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Pad/crop the spatial form of a spectrum around its wrap origin.

    The spatial signal is viewed DC-centered (fftshift) so the filter
    content, which lives around the circular origin, gets zeros added
    around it (grow) or its tails cropped (shrink).
    """
    spatial = np.fft.fftshift(np.fft.ifft2(spec))
    spatial = resize_grid_spatial(spatial, rows, cols)
    return np.fft.fft2(np.fft.ifftshift(spatial))


@lru_cache(maxsize=32)
def _dirichlet_matrix(n_old: int, n_new: int) -> np.ndarray:
    """Exact 1-D frequency-grid resampling operator (n_new x n_old).

    Interpolates the DFT bins of a length-n_old signal onto the bin grid
    of the length-n_new signal whose spatial form is the centered
    zero-pad/crop of the original; equals fft . embed . ifft applied to
    the identity, so the two resize routes agree to round-off.
    """
    spatial = np.fft.fftshift(np.fft.ifft(np.eye(n_old), axis=0), axes=0)
    if n_new >= n_old:
        pad = np.zeros((n_new, n_old), dtype=complex)
        off = n_new // 2 - n_old // 2
        pad[off:off + n_old] = spatial
        embedded = pad
    else:
        off = n_old // 2 - n_new // 2
        embedded = spatial[off:off + n_new]
    return np.fft.fft(np.fft.ifftshift(embedded, axes=0), axis=0)


def resize_model(model: FilterModel, new_size: tuple[int, int],
                 method: str = "frequency") -> FilterModel:
    """Carry the filter over to a new grid size.

    Both methods realize the same map (the transform-pair duality of
    centered spatial zero-padding): `spatial` round-trips each channel
    through the spatial domain and pads/crops there, `frequency`
    resamples the spectrum bins directly with Dirichlet interpolation
    matrices.  Growing then shrinking back is the identity.
    """
    rows, cols = new_size
    if rows < 1 or cols < 1:
        raise ValueError("target grid must be >= 1x1")
    if (rows, cols) == model.grid_size:
        return model
    if method == "frequency":
        mr = _dirichlet_matrix(model.grid_size[0], rows)
        mc = _dirichlet_matrix(model.grid_size[1], cols)

        def resample(spec: np.ndarray) -> np.ndarray:
            return mr @ spec @ mc.T

        A = np.stack([resample(ch) for ch in model.A])
        B = resample(model.B)
    elif method == "spatial":
        A = np.stack([_spatial_resize_spectrum(ch, rows, cols)
                      for ch in model.A])
        B = _spatial_resize_spectrum(model.B, rows, cols)
    else:
        raise ValueError(f"unknown resize method {method!r}")
    return FilterModel(A=A, B=B, lam=model.lam, eta=model.eta)


def save_model(model: FilterModel, path: str | Path) -> None:
    """Snapshot the model to an .npz file; round-trips bit-exactly."""
    np.savez(path, version=_SNAPSHOT_VERSION, A=model.A, B=model.B,
             lam=model.lam, eta=model.eta)


def load_model(path: str | Path) -> FilterModel:
    with np.load(path) as data:
        version = int(data["version"])
        if version != _SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        return FilterModel(A=data["A"], B=data["B"],
                           lam=float(data["lam"]), eta=float(data["eta"]))
