"""Synthetic faces with known 68-point landmarks.

Used by the test suite and the bundled demo fixtures: a canonical,
left/right symmetric landmark template (unit half-width) that can be
scaled, rolled and jittered, plus a crude renderer that paints a
recognizable face around the landmarks. The template's index semantics
follow the iBUG 68-point scheme, so eye/brow/mouth groups land where the
geometry module expects them.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw

from .geometry import rotate_about


def _template() -> np.ndarray:
    pts = np.zeros((68, 2))
    # jaw 0-16: ellipse arc, temples level at y=0, chin at the bottom
    t = np.arange(17) * np.pi / 16.0
    pts[0:17, 0] = -np.cos(t) * 1.0
    pts[0:17, 1] = np.sin(t) * 1.12
    # brows 17-26
    pts[17:22] = [(-0.62, -0.46), (-0.50, -0.52), (-0.38, -0.55), (-0.26, -0.52), (-0.16, -0.46)]
    pts[22:27] = [(0.16, -0.46), (0.26, -0.52), (0.38, -0.55), (0.50, -0.52), (0.62, -0.46)]
    # nose 27-35
    pts[27:31] = [(0.0, -0.34), (0.0, -0.20), (0.0, -0.06), (0.0, 0.10)]
    pts[31:36] = [(-0.12, 0.20), (-0.06, 0.23), (0.0, 0.24), (0.06, 0.23), (0.12, 0.20)]
    # eyes 36-47 (image-left ring then image-right ring)
    pts[36:42] = [(-0.58, -0.30), (-0.50, -0.36), (-0.34, -0.36), (-0.26, -0.30), (-0.34, -0.24), (-0.50, -0.24)]
    pts[42:48] = [(0.26, -0.30), (0.34, -0.36), (0.50, -0.36), (0.58, -0.30), (0.50, -0.24), (0.34, -0.24)]
    # mouth 48-67, outer ring then inner ring
    pts[48:60] = [
        (-0.35, 0.55), (-0.22, 0.47), (-0.08, 0.44), (0.0, 0.45), (0.08, 0.44), (0.22, 0.47),
        (0.35, 0.55), (0.22, 0.64), (0.08, 0.68), (0.0, 0.67), (-0.08, 0.68), (-0.22, 0.64),
    ]
    pts[60:68] = [
        (-0.28, 0.55), (-0.10, 0.50), (0.0, 0.51), (0.10, 0.50),
        (0.28, 0.55), (0.10, 0.61), (0.0, 0.62), (-0.10, 0.61),
    ]
    return pts


TEMPLATE_68 = _template()


def synth_landmarks(center=(48.0, 48.0), scale=30.0, roll=0.0, jitter=0.0, rng=None) -> np.ndarray:
    """Place the template at a pixel center/scale, optionally rolled and
    with per-point jitter (jitter is a pixel std-dev; needs an rng)."""
    pts = TEMPLATE_68 * scale
    if jitter > 0.0:
        if rng is None:
            raise ValueError("jitter requires an rng")
        pts = pts + rng.normal(0.0, jitter, size=pts.shape)
    if roll != 0.0:
        pts = rotate_about(pts, (0.0, 0.0), roll)
    return pts + np.asarray(center, dtype=np.float64)


def random_landmarks(rng: np.random.Generator, size: int = 96) -> np.ndarray:
    """A plausible random face inside a size x size frame."""
    scale = rng.uniform(0.22, 0.38) * size
    cx = size / 2 + rng.uniform(-0.08, 0.08) * size
    cy = size / 2 + rng.uniform(-0.08, 0.08) * size
    roll = rng.uniform(-0.45, 0.45)
    return synth_landmarks((cx, cy), scale=scale, roll=roll, jitter=0.01 * size, rng=rng)


def _ellipse_box(center, rx, ry):
    return [center[0] - rx, center[1] - ry, center[0] + rx, center[1] + ry]


def render_face(landmarks: np.ndarray, size: int = 96, channels: int = 1) -> np.ndarray:
    """Paint a simple face consistent with the landmarks: head disc, dark
    eyes and brows, nose line, mouth. Deterministic for equal inputs."""
    img = Image.new("L", (size, size), color=40)
    draw = ImageDraw.Draw(img)
    # vertical background gradient for some texture
    for y in range(size):
        draw.line([(0, y), (size - 1, y)], fill=40 + (50 * y) // max(size - 1, 1))

    jaw = landmarks[0:17]
    head_cx = float(jaw[:, 0].mean())
    head_cy = float(landmarks[:, 1].mean())
    rx = float(jaw[:, 0].max() - jaw[:, 0].min()) / 2 * 1.05
    ry = float(landmarks[:, 1].max() - landmarks[:, 1].min()) / 2 * 1.25
    draw.ellipse(_ellipse_box((head_cx, head_cy), rx, ry), fill=190, outline=120)

    for ring in (landmarks[36:42], landmarks[42:48]):
        draw.polygon([tuple(p) for p in ring], fill=25)
    for brow in (landmarks[17:22], landmarks[22:27]):
        draw.line([tuple(p) for p in brow], fill=60, width=2)
    draw.line([tuple(p) for p in landmarks[27:31]], fill=120, width=1)
    draw.line([tuple(p) for p in landmarks[31:36]], fill=100, width=1)
    draw.polygon([tuple(p) for p in landmarks[48:60]], fill=70)

    arr = np.asarray(img)
    if channels == 3:
        return np.repeat(arr[:, :, None], 3, axis=2)
    return arr
