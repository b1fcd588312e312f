"""Headset occlusion geometry.

Computes the rotated rectangular patch a head-mounted display leaves on a
face image, from 68-point iBUG landmarks and the physical headset size.
All coordinates live in image space: origin top-left, x right, y down,
units are pixels. Everything here is a pure function; nothing mutates
its inputs.

Placement recipe: the patch is centered on the midpoint between the two
eye centers, tilted to the interocular axis, and scaled from millimeters
to pixels using the temple-to-temple landmark distance as the reference
length for the wearer's head breadth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEyes, DegenerateFace

# iBUG 68-point index groups used here
LEFT_EYE_IDX = range(36, 42)    # image-left eye (subject's right)
RIGHT_EYE_IDX = range(42, 48)
LEFT_TEMPLE_IDX = 0             # uppermost jaw-contour points, temple level
RIGHT_TEMPLE_IDX = 16

# Distances below these thresholds mean the landmarks are garbage.
DEGENERATE_EYE_DIST_PX = 1e-6
DEGENERATE_TEMPORAL_PX = 1e-6


@dataclass(frozen=True)
class HeadsetSpec:
    """Physical headset footprint plus the anthropometric scale reference.

    Defaults model the Samsung Gear VR (207.1 x 98.6 mm). head_breadth_mm
    is the assumed real-world distance between the two temple landmarks;
    it is not a property of the headset but of the wearer, and is exposed
    so the mm->px scaling assumption stays auditable. vertical_offset_mm
    shifts the patch along its own vertical axis (positive = down the
    face); the default keeps the patch centered exactly on the eye line.
    """

    width_mm: float = 207.1
    height_mm: float = 98.6
    head_breadth_mm: float = 152.0
    vertical_offset_mm: float = 0.0

    def __post_init__(self):
        for name in ("width_mm", "height_mm", "head_breadth_mm"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
        if not math.isfinite(self.vertical_offset_mm):
            raise ValueError("vertical_offset_mm must be finite")


GEAR_VR = HeadsetSpec()


@dataclass(frozen=True)
class OcclusionPatch:
    """A placed occlusion rectangle.

    corners are ordered top-left, top-right, bottom-right, bottom-left in
    the patch's own (pre-rotation) frame; their centroid equals center and
    angle_rad is the rotation of the long axis from the image x-axis.
    """

    center: tuple[float, float]
    width_px: float
    height_px: float
    angle_rad: float
    corners: np.ndarray = field(repr=False)  # (4, 2) float64


def as_landmarks(points) -> np.ndarray:
    """Coerce to a validated (68, 2) float64 landmark array."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape != (68, 2):
        raise ValueError(f"landmarks must have shape (68, 2), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("landmarks contain non-finite coordinates")
    return pts


def eye_centers(landmarks) -> tuple[np.ndarray, np.ndarray]:
    """Mean of the six contour points of each eye.

    Returns (left, right) where "left" is the image-left eye (smaller x on
    an upright frontal face), i.e. the subject's right eye.
    """
    pts = as_landmarks(landmarks)
    left = pts[LEFT_EYE_IDX.start:LEFT_EYE_IDX.stop].mean(axis=0)
    right = pts[RIGHT_EYE_IDX.start:RIGHT_EYE_IDX.stop].mean(axis=0)
    return left, right


def interocular_angle(left, right) -> float:
    """In-plane roll of the eye line, via atan2(dy, dx), range (-pi, pi].

    Positive when the image-right eye sits lower in the image (y-down).
    Raises DegenerateEyes when the centers are closer than 1e-6 px.
    """
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    delta = right - left
    if float(np.hypot(delta[0], delta[1])) <= DEGENERATE_EYE_DIST_PX:
        raise DegenerateEyes(
            f"eye centers {tuple(left)} and {tuple(right)} are coincident"
        )
    angle = math.atan2(delta[1], delta[0])
    if angle == -math.pi:  # keep the documented (-pi, pi] range exact
        angle = math.pi
    return angle


def temporal_reference_px(landmarks) -> float:
    """Euclidean distance between the temple landmarks (points 0 and 16)."""
    pts = as_landmarks(landmarks)
    d = pts[RIGHT_TEMPLE_IDX] - pts[LEFT_TEMPLE_IDX]
    dist = float(np.hypot(d[0], d[1]))
    if dist <= DEGENERATE_TEMPORAL_PX:
        raise DegenerateFace("temporal landmarks 0 and 16 are coincident")
    return dist


def mm_to_px(temporal_px: float, spec: HeadsetSpec = GEAR_VR) -> float:
    """Pixels per millimeter implied by the temple distance."""
    if not temporal_px > 0:
        raise ValueError(f"temporal_px must be > 0, got {temporal_px!r}")
    return temporal_px / spec.head_breadth_mm


def rotate_about(p, pivot, angle_rad: float) -> np.ndarray:
    """Rotate point(s) about a pivot in the y-down image frame.

    Accepts a single (2,) point or an (N, 2) array. Rotation by +pi/2
    maps (1, 0) to (0, 1), i.e. visually clockwise on screen.
    """
    p = np.asarray(p, dtype=np.float64)
    pivot = np.asarray(pivot, dtype=np.float64)
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    d = p - pivot
    x = d[..., 0]
    y = d[..., 1]
    out = np.empty_like(d)
    out[..., 0] = x * c - y * s
    out[..., 1] = x * s + y * c
    return out + pivot


def build_patch(landmarks, spec: HeadsetSpec = GEAR_VR) -> OcclusionPatch:
    """Place the headset rectangle on a face.

    Raises DegenerateEyes / DegenerateFace on corrupt landmarks; those are
    the only failure modes for finite, well-shaped input.
    """
    pts = as_landmarks(landmarks)
    left, right = eye_centers(pts)
    angle = interocular_angle(left, right)
    scale = mm_to_px(temporal_reference_px(pts), spec)

    center = (left + right) / 2.0
    if spec.vertical_offset_mm != 0.0:
        # offset along the patch's own vertical axis, which tilts with the face
        off = spec.vertical_offset_mm * scale
        center = center + off * np.array([-math.sin(angle), math.cos(angle)])

    w = spec.width_mm * scale
    h = spec.height_mm * scale
    hw, hh = w / 2.0, h / 2.0
    # top-left, top-right, bottom-right, bottom-left before rotation
    rect = np.array(
        [
            [center[0] - hw, center[1] - hh],
            [center[0] + hw, center[1] - hh],
            [center[0] + hw, center[1] + hh],
            [center[0] - hw, center[1] + hh],
        ]
    )
    corners = rotate_about(rect, center, angle)
    return OcclusionPatch(
        center=(float(center[0]), float(center[1])),
        width_px=w,
        height_px=h,
        angle_rad=angle,
        corners=corners,
    )
