"""Image preprocessing for occluded exports: resize, normalize, flip.

resize_bilinear follows the half-pixel sampling convention (source
coordinate of output pixel i is (i + 0.5) * in/out - 0.5, clamped), which
preserves constant images and makes same-size resizes exact copies. It is
written out in numpy rather than delegated to an imaging library so the
sampling arithmetic is part of this package's contract.
"""

from __future__ import annotations

import numpy as np

from .geometry import as_landmarks

# iBUG 68 mirror permutation: new index i takes old point MIRROR_68[i]
# (jaw reversed, brows/eyes/nostrils/mouth swapped left<->right).
MIRROR_68 = np.array(
    [
        16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0,      # jaw
        26, 25, 24, 23, 22, 21, 20, 19, 18, 17,                        # brows
        27, 28, 29, 30, 35, 34, 33, 32, 31,                            # nose
        45, 44, 43, 42, 47, 46, 39, 38, 37, 36, 41, 40,                # eyes
        54, 53, 52, 51, 50, 49, 48, 59, 58, 57, 56, 55,                # outer mouth
        64, 63, 62, 61, 60, 67, 66, 65,                                # inner mouth
    ]
)


def _axis_samples(out_n: int, in_n: int):
    scale = in_n / out_n
    src = (np.arange(out_n, dtype=np.float64) + 0.5) * scale - 0.5
    src = np.clip(src, 0.0, in_n - 1.0)
    i0 = np.floor(src).astype(np.intp)
    i1 = np.minimum(i0 + 1, in_n - 1)
    frac = src - i0
    return i0, i1, frac


def resize_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize with pixel-center sampling.

    uint8 input yields uint8 output (values rounded half-to-even); float
    input yields float64. Resizing to the input size returns a bit-exact
    copy, and constant images stay constant.
    """
    img = np.asarray(img)
    if out_w < 1 or out_h < 1:
        raise ValueError("output size must be >= 1 in both dimensions")
    in_h, in_w = img.shape[:2]

    x0, x1, fx = _axis_samples(out_w, in_w)
    y0, y1, fy = _axis_samples(out_h, in_h)

    src = img.astype(np.float64)
    if img.ndim == 3:
        wx = fx[None, :, None]
        wy = fy[:, None, None]
    else:
        wx = fx[None, :]
        wy = fy[:, None]
    v00 = src[np.ix_(y0, x0)]
    v01 = src[np.ix_(y0, x1)]
    v10 = src[np.ix_(y1, x0)]
    v11 = src[np.ix_(y1, x1)]
    # nested lerp form: the delta terms vanish exactly on constant input,
    # so constancy is preserved bit-exactly for float images too
    top = v00 + (v01 - v00) * wx
    bot = v10 + (v11 - v10) * wx
    out = top + (bot - top) * wy
    if img.dtype == np.uint8:
        return np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return out


def minmax_normalize(img: np.ndarray) -> np.ndarray:
    """Stretch to [0, 1] jointly over all channels; constant maps to zeros."""
    img = np.asarray(img)
    lo = float(img.min())
    hi = float(img.max())
    if hi == lo:
        return np.zeros(img.shape, dtype=np.float64)
    return (img.astype(np.float64) - lo) / (hi - lo)


def hflip(img: np.ndarray) -> np.ndarray:
    """Mirror columns: x -> width-1-x in every row and channel."""
    return np.asarray(img)[:, ::-1].copy()


def mirror_landmarks(landmarks, width: float) -> np.ndarray:
    """Landmarks matching hflip of the image: x -> width - x plus the
    left/right index swap, so eye/brow/mouth semantics stay correct.

    The index permutation is exactly involutive; the coordinate reflection
    is involutive up to one float rounding at the width's magnitude (exact
    whenever width - x is representable, e.g. quarter-pixel coordinates)."""
    pts = as_landmarks(landmarks)
    out = pts[MIRROR_68].copy()
    out[:, 0] = width - out[:, 0]
    return out


def replicate_channels(img: np.ndarray) -> np.ndarray:
    """Grayscale (H, W) -> (H, W, 3) by channel replication; 3-channel
    input passes through untouched."""
    img = np.asarray(img)
    if img.ndim == 2:
        return np.repeat(img[:, :, None], 3, axis=2)
    return img
