"""Convex quadrilateral fill on pixel buffers.

Coverage rule: a pixel at integer cell (i, j) is covered iff its center
(i + 0.5, j + 0.5) lies inside or on the quad, where "on" is decided by
four half-plane tests with a 1e-9 signed-area slack plus a slack-expanded
bounding-box test (the box test only matters for zero-area quads, whose
edge cross-products vanish identically). No anti-aliasing: the fill is a
hard binary paint, so outputs are bit-reproducible.

point_in_quad is the scalar reference predicate; rasterize_quad and
occluded_fraction evaluate the same arithmetic vectorized over a
bbox-clipped window, which keeps them bit-identical to testing every
pixel center with point_in_quad.
"""

from __future__ import annotations

import numpy as np

EDGE_EPS = 1e-9

# uint8 buffers are 8-bit sources, float buffers are unit-interval images
_VALUE_RANGE = {"uint8": (0, 255), "float": (0.0, 1.0)}


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] in (1, 3):
        return img
    raise ValueError(f"expected HxW or HxWx{{1,3}} image, got shape {img.shape}")


def _check_fill(img: np.ndarray, fill) -> np.ndarray:
    channels = 1 if img.ndim == 2 else img.shape[2]
    vals = np.asarray(fill, dtype=np.float64).reshape(-1)
    if vals.size == 1:
        vals = np.repeat(vals, channels)
    if vals.size != channels:
        raise ValueError(f"fill needs 1 or {channels} values, got {vals.size}")
    lo, hi = _VALUE_RANGE["uint8" if img.dtype == np.uint8 else "float"]
    if np.any(vals < lo) or np.any(vals > hi):
        raise ValueError(f"fill {fill!r} outside buffer range [{lo}, {hi}]")
    if img.dtype == np.uint8 and np.any(vals != np.rint(vals)):
        raise ValueError(f"fill {fill!r} is not an integer value for an 8-bit buffer")
    return vals.astype(img.dtype)


def _quad_arrays(corners) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray(corners, dtype=np.float64)
    if c.shape != (4, 2):
        raise ValueError(f"corners must have shape (4, 2), got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("corners contain non-finite coordinates")
    edges = np.roll(c, -1, axis=0) - c
    return c, edges


def point_in_quad(p, corners) -> bool:
    """Inclusive containment test for a convex quad in either winding."""
    c, edges = _quad_arrays(corners)
    px, py = float(p[0]), float(p[1])
    cross = [
        edges[k, 0] * (py - c[k, 1]) - edges[k, 1] * (px - c[k, 0])
        for k in range(4)
    ]
    if not (all(v >= -EDGE_EPS for v in cross) or all(v <= EDGE_EPS for v in cross)):
        return False
    return (
        c[:, 0].min() - EDGE_EPS <= px <= c[:, 0].max() + EDGE_EPS
        and c[:, 1].min() - EDGE_EPS <= py <= c[:, 1].max() + EDGE_EPS
    )


def _coverage_window(width: int, height: int, corners):
    """Pixel index ranges whose centers can possibly pass point_in_quad,
    plus the vectorized inside-mask for that window."""
    c, edges = _quad_arrays(corners)
    xmin, xmax = c[:, 0].min(), c[:, 0].max()
    ymin, ymax = c[:, 1].min(), c[:, 1].max()
    # centers are at integer + 0.5; clip the candidate range to the image
    x0 = max(0, int(np.floor(xmin - EDGE_EPS - 0.5)))
    x1 = min(width - 1, int(np.ceil(xmax + EDGE_EPS - 0.5)))
    y0 = max(0, int(np.floor(ymin - EDGE_EPS - 0.5)))
    y1 = min(height - 1, int(np.ceil(ymax + EDGE_EPS - 0.5)))
    if x0 > x1 or y0 > y1:
        return x0, x1, y0, y1, None

    px = np.arange(x0, x1 + 1, dtype=np.float64) + 0.5
    py = np.arange(y0, y1 + 1, dtype=np.float64) + 0.5
    PX, PY = np.meshgrid(px, py)

    pos = np.ones(PX.shape, dtype=bool)
    neg = np.ones(PX.shape, dtype=bool)
    for k in range(4):
        cross = edges[k, 0] * (PY - c[k, 1]) - edges[k, 1] * (PX - c[k, 0])
        pos &= cross >= -EDGE_EPS
        neg &= cross <= EDGE_EPS
    mask = pos | neg
    mask &= (PX >= xmin - EDGE_EPS) & (PX <= xmax + EDGE_EPS)
    mask &= (PY >= ymin - EDGE_EPS) & (PY <= ymax + EDGE_EPS)
    return x0, x1, y0, y1, mask


def rasterize_quad(img, corners, fill=0) -> np.ndarray:
    """Return a copy of img with the quad painted in the fill value.

    Parts of the quad outside the image are clipped silently; pixels whose
    centers are not covered are bit-identical to the input.
    """
    img = _check_image(img)
    fill_vals = _check_fill(img, fill)
    out = img.copy()
    h, w = img.shape[:2]
    x0, x1, y0, y1, mask = _coverage_window(w, h, corners)
    if mask is None or not mask.any():
        return out
    window = out[y0 : y1 + 1, x0 : x1 + 1]
    if img.ndim == 2:
        window[mask] = fill_vals[0]
    else:
        window[mask] = fill_vals
    return out


def occluded_fraction(width: int, height: int, corners) -> float:
    """Share of the width x height pixel grid whose centers the quad covers."""
    if width < 1 or height < 1:
        raise ValueError("width and height must be >= 1")
    _, _, _, _, mask = _coverage_window(width, height, corners)
    covered = 0 if mask is None else int(mask.sum())
    return covered / (width * height)
