"""Landmark sidecar files: the contract between any face detector and the
occlusion pipeline.

Format: UTF-8, one JSON object per line, keys `image_id` (string), `box`
(optional [x, y, w, h]), `points` (exactly 68 [x, y] pairs), `detector`
(string naming what produced the record). One face per image; coordinates
are in the frame of the stored image at its stored resolution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import geometry
from .errors import (
    DuplicateImageId,
    MalformedLine,
    NonFiniteCoordinate,
    WrongPointCount,
)

# validate_for_occlusion thresholds (non-fatal; fatal cases surface in build_patch)
MIN_EYE_SEPARATION_PX = 2.0
MIN_TEMPORAL_WIDTH_PX = 8.0
MAX_OUTSIDE_BOX_SHARE = 0.5


@dataclass(frozen=True)
class LandmarkRecord:
    image_id: str
    points: np.ndarray = field(repr=False)  # (68, 2) float64
    box: tuple[float, float, float, float] | None = None  # x, y, w, h
    detector: str = ""


@dataclass
class LandmarkSet:
    """Immutable-by-convention map image_id -> LandmarkRecord."""

    records: dict[str, LandmarkRecord] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def __contains__(self, image_id):
        return image_id in self.records

    def get(self, image_id) -> LandmarkRecord | None:
        return self.records.get(image_id)


def _parse_line(line_no: int, obj) -> LandmarkRecord:
    if not isinstance(obj, dict):
        raise MalformedLine(line_no, "record is not a JSON object")
    image_id = obj.get("image_id")
    if not isinstance(image_id, str) or not image_id:
        raise MalformedLine(line_no, "missing or empty image_id")

    points = obj.get("points")
    if not isinstance(points, list):
        raise MalformedLine(line_no, "missing points array")
    if len(points) != 68:
        raise WrongPointCount(line_no, f"expected 68 points, got {len(points)}")
    pts = np.empty((68, 2), dtype=np.float64)
    for i, pair in enumerate(points):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise MalformedLine(line_no, f"point {i} is not an [x, y] number pair")
        x, y = float(pair[0]), float(pair[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteCoordinate(line_no, f"point {i} is not finite")
        pts[i] = (x, y)

    box = None
    if obj.get("box") is not None:
        raw = obj["box"]
        if (
            not isinstance(raw, list)
            or len(raw) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
            or not all(math.isfinite(float(v)) for v in raw)
        ):
            raise MalformedLine(line_no, "box is not [x, y, w, h] finite numbers")
        box = tuple(float(v) for v in raw)
        if box[2] <= 0 or box[3] <= 0:
            raise MalformedLine(line_no, "box width/height must be > 0")

    detector = obj.get("detector", "")
    if not isinstance(detector, str):
        raise MalformedLine(line_no, "detector must be a string")
    return LandmarkRecord(image_id=image_id, points=pts, box=box, detector=detector)


def parse_landmark_file(path) -> LandmarkSet:
    """Parse a sidecar file; raises the sidecar error family with 1-based
    line numbers. Blank lines are not tolerated (one record per line)."""
    records: dict[str, LandmarkRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                raise MalformedLine(line_no, "blank line")
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"invalid JSON ({exc.msg})") from exc
            rec = _parse_line(line_no, obj)
            if rec.image_id in records:
                raise DuplicateImageId(line_no, f"duplicate image_id {rec.image_id!r}")
            records[rec.image_id] = rec
    return LandmarkSet(records)


def record_to_json(rec: LandmarkRecord) -> str:
    obj = {
        "image_id": rec.image_id,
        "box": list(rec.box) if rec.box is not None else None,
        "points": [[float(x), float(y)] for x, y in rec.points],
        "detector": rec.detector,
    }
    return json.dumps(obj, separators=(",", ":"))


def serialize_landmark_set(landmark_set: LandmarkSet, path) -> None:
    """Write records sorted by image_id, one JSON object per line."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for image_id in sorted(landmark_set.records):
            fh.write(record_to_json(landmark_set.records[image_id]) + "\n")


def validate_for_occlusion(rec: LandmarkRecord) -> list[str]:
    """Non-fatal sanity warnings for one record; empty list means clean."""
    warnings = []
    left, right = geometry.eye_centers(rec.points)
    if float(np.hypot(*(right - left))) < MIN_EYE_SEPARATION_PX:
        warnings.append("eye centers less than 2 px apart")
    d = rec.points[geometry.RIGHT_TEMPLE_IDX] - rec.points[geometry.LEFT_TEMPLE_IDX]
    if float(np.hypot(d[0], d[1])) < MIN_TEMPORAL_WIDTH_PX:
        warnings.append("temporal width under 8 px, patch would be sub-pixel")
    if rec.box is not None:
        x, y, w, h = rec.box
        inside = (
            (rec.points[:, 0] >= x)
            & (rec.points[:, 0] <= x + w)
            & (rec.points[:, 1] >= y)
            & (rec.points[:, 1] <= y + h)
        )
        if (~inside).sum() > MAX_OUTSIDE_BOX_SHARE * len(rec.points):
            warnings.append("more than half of the points lie outside the face box")
    return warnings
