"""2-D transforms, Gaussian labels, cosine windows and spectrum resizing.

Grids are real 2-D numpy arrays (rows x cols); spectra are complex 2-D
arrays with the DC bin at index (0, 0).  The forward transform is
unnormalized, the inverse carries the 1/(M*N) factor.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "dft2",
    "idft2",
    "gaussian_label",
    "hann_window",
    "resize_spectrum",
    "resize_grid_spatial",
]


def dft2(grid: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2-D DFT of a real grid."""
    grid = np.asarray(grid)
    if grid.size == 0:
        raise ValueError("empty grid")
    return np.fft.fft2(grid.astype(np.float64))


def idft2(spec: np.ndarray, imag_tol: float = 1e-6) -> np.ndarray:
    """Inverse 2-D DFT returning a real grid.

    Raises ValueError if the imaginary residue exceeds `imag_tol` times
    the peak magnitude (i.e. the spectrum was not conjugate-symmetric).
    """
    spec = np.asarray(spec, dtype=np.complex128)
    if spec.size == 0:
        raise ValueError("empty spectrum")
    out = np.fft.ifft2(spec)
    scale = np.abs(out).max()
    if scale > 0 and np.abs(out.imag).max() > imag_tol * scale:
        raise ValueError("inverse transform has non-negligible imaginary part")
    return out.real


def gaussian_label(rows: int, cols: int, sigma: float,
                   peak_at: tuple[int, int]) -> np.ndarray:
    """Gaussian response grid with peak value 1 at `peak_at`.

    Distances wrap circularly, consistent with the circular-shift sample
    model, so a peak near the border tapers toward the opposite edge.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    pr, pc = peak_at
    if not (0 <= pr < rows and 0 <= pc < cols):
        raise ValueError("peak_at outside grid")
    r = np.arange(rows)[:, None]
    c = np.arange(cols)[None, :]
    dr = np.minimum(np.abs(r - pr), rows - np.abs(r - pr))
    dc = np.minimum(np.abs(c - pc), cols - np.abs(c - pc))
    return np.exp(-(dr ** 2 + dc ** 2) / (2.0 * sigma ** 2))


def hann_window(rows: int, cols: int) -> np.ndarray:
    """Separable raised-cosine window, zero on the border ring."""
    if rows < 1 or cols < 1:
        raise ValueError("window dimensions must be >= 1")
    return np.outer(np.hanning(rows), np.hanning(cols))


def _centered_embed(shifted: np.ndarray, new_rows: int, new_cols: int) -> np.ndarray:
    """Pad/crop a DC-centered spectrum so DC stays on the center bin."""
    rows, cols = shifted.shape
    out = np.zeros((new_rows, new_cols), dtype=shifted.dtype)
    # align DC bins (index N//2 in a shifted spectrum); even-size Nyquist
    # bins ride along intact on the low-frequency side
    dr = new_rows // 2 - rows // 2
    dc = new_cols // 2 - cols // 2
    src_r = slice(max(0, -dr), min(rows, new_rows - dr))
    src_c = slice(max(0, -dc), min(cols, new_cols - dc))
    dst_r = slice(src_r.start + dr, src_r.stop + dr)
    dst_c = slice(src_c.start + dc, src_c.stop + dc)
    out[dst_r, dst_c] = shifted[src_r, src_c]
    return out


def resize_spectrum(spec: np.ndarray, new_rows: int, new_cols: int) -> np.ndarray:
    """Resample a spectrum onto a new grid by trigonometric interpolation.

    Zero-pads (grow) or crops (shrink) the DC-centered spectrum, then
    rescales by (new_rows*new_cols)/(rows*cols) so spatial amplitudes are
    preserved.  Growing and shrinking back is the identity.
    """
    spec = np.asarray(spec, dtype=np.complex128)
    rows, cols = spec.shape
    if new_rows < 1 or new_cols < 1:
        raise ValueError("target dimensions must be >= 1")
    if (new_rows, new_cols) == (rows, cols):
        return spec.copy()
    shifted = np.fft.fftshift(spec)
    embedded = _centered_embed(shifted, new_rows, new_cols)
    out = np.fft.ifftshift(embedded)
    out *= (new_rows * new_cols) / (rows * cols)
    return out


def resize_grid_spatial(grid: np.ndarray, new_rows: int, new_cols: int) -> np.ndarray:
    """Center-place a grid in a new extent: zero-pad around, or crop centrally."""
    grid = np.asarray(grid)
    rows, cols = grid.shape
    if new_rows < 1 or new_cols < 1:
        raise ValueError("target dimensions must be >= 1")
    out = np.zeros((new_rows, new_cols), dtype=grid.dtype)
    # align center bins (index N//2) so grow/shrink pairs invert exactly
    # even when the two extents have different parity
    dr = new_rows // 2 - rows // 2
    dc = new_cols // 2 - cols // 2
    src_r = slice(max(0, -dr), min(rows, new_rows - dr))
    src_c = slice(max(0, -dc), min(cols, new_cols - dc))
    out[src_r.start + dr:src_r.stop + dr,
        src_c.start + dc:src_c.stop + dc] = grid[src_r, src_c]
    return out
