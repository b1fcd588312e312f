"""Dataset adapters: FER+ CSV pair, RAF-DB root + label list, AffectNet
CSV + image root. Each loader yields a manifest (id, label, split, status)
plus the decoded images, with rows outside the basic-emotion classes
excluded and counted.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import (
    BadPixelString,
    DatasetError,
    MissingImageFile,
    RowMisalignment,
    UnknownLabelCode,
)

EMOTIONS_8 = (
    "neutral",
    "happiness",
    "surprise",
    "sadness",
    "anger",
    "disgust",
    "fear",
    "contempt",
)
EMOTIONS_7 = EMOTIONS_8[:7]  # RAF-DB has no contempt

SPLITS = ("train", "val", "test")
STATUSES = ("pending", "occluded", "skipped_no_landmarks", "failed_degenerate")

# FER+ usage column -> split
_FERPLUS_USAGE = {"training": "train", "publictest": "val", "privatetest": "test"}
_FERPLUS_VOTE_COLUMNS = EMOTIONS_8 + ("unknown", "nf")

# RAF-DB basic emotion codes (list_patition_label.txt)
RAFDB_CODES = {
    1: "surprise",
    2: "fear",
    3: "disgust",
    4: "happiness",
    5: "sadness",
    6: "anger",
    7: "neutral",
}

# AffectNet expression codes; the non-emotion categories get excluded
AFFECTNET_CODES = {
    0: "neutral",
    1: "happiness",
    2: "sadness",
    3: "surprise",
    4: "fear",
    5: "disgust",
    6: "anger",
    7: "contempt",
    8: "none",
    9: "uncertain",
    10: "non-face",
}
AFFECTNET_EXCLUDED = ("none", "uncertain", "non-face")


@dataclass
class ManifestEntry:
    image_id: str
    source: str
    label: str
    split: str
    status: str = "pending"


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry] = field(default_factory=list)
    excluded: Counter = field(default_factory=Counter)

    def __len__(self):
        return len(self.entries)

    def split_counts(self) -> Counter:
        return Counter(e.split for e in self.entries)


def _read_csv_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        return [], []
    return rows[0], rows[1:]


def _column(header: list[str], name: str, path) -> int:
    lowered = [h.strip().lower() for h in header]
    if name not in lowered:
        raise DatasetError(f"{path}: required column {name!r} not found")
    return lowered.index(name)


def load_ferplus(pixels_csv, labels_csv) -> tuple[DatasetManifest, dict[str, np.ndarray]]:
    """FER+ adapter: fer2013-style pixels CSV plus the crowd-vote labels CSV.

    Rows are keyed ferplus_<row index>; the label is the argmax of the ten
    vote columns with ties broken by column order, and rows won by
    unknown/NF are dropped and counted.
    """
    px_header, px_rows = _read_csv_rows(pixels_csv)
    lb_header, lb_rows = _read_csv_rows(labels_csv)
    if len(px_rows) != len(lb_rows):
        raise RowMisalignment(
            f"{len(px_rows)} pixel rows vs {len(lb_rows)} label rows"
        )
    usage_col = _column(px_header, "usage", pixels_csv)
    pixels_col = _column(px_header, "pixels", pixels_csv)
    vote_cols = [_column(lb_header, name, labels_csv) for name in _FERPLUS_VOTE_COLUMNS]
    lb_lower = [h.strip().lower() for h in lb_header]
    name_col = lb_lower.index("image name") if "image name" in lb_lower else None

    manifest = DatasetManifest()
    images: dict[str, np.ndarray] = {}
    for idx, (px_row, lb_row) in enumerate(zip(px_rows, lb_rows)):
        usage = px_row[usage_col].strip().lower()
        if usage not in _FERPLUS_USAGE:
            raise DatasetError(f"{pixels_csv}: row {idx}: unknown usage {px_row[usage_col]!r}")
        split = _FERPLUS_USAGE[usage]

        values = px_row[pixels_col].split()
        if len(values) != 48 * 48:
            raise BadPixelString(f"row {idx}: expected 2304 pixel values, got {len(values)}")
        try:
            pixels = np.array([int(v) for v in values], dtype=np.int64)
        except ValueError as exc:
            raise BadPixelString(f"row {idx}: non-integer pixel value") from exc
        if pixels.min() < 0 or pixels.max() > 255:
            raise BadPixelString(f"row {idx}: pixel value outside [0, 255]")

        try:
            votes = [int(lb_row[c]) for c in vote_cols]
        except (ValueError, IndexError) as exc:
            raise DatasetError(f"{labels_csv}: row {idx}: bad vote values") from exc
        winner = max(range(len(votes)), key=lambda i: (votes[i], -i))
        if winner >= len(EMOTIONS_8):
            manifest.excluded[_FERPLUS_VOTE_COLUMNS[winner]] += 1
            continue

        image_id = f"ferplus_{idx:08d}"
        source = lb_row[name_col].strip() if name_col is not None and lb_row[name_col].strip() else f"row {idx}"
        manifest.entries.append(
            ManifestEntry(image_id=image_id, source=source, label=EMOTIONS_8[winner], split=split)
        )
        images[image_id] = pixels.astype(np.uint8).reshape(48, 48)
    return manifest, images


def _load_image(path: Path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode in ("L", "I;16"):
            return np.asarray(im.convert("L"))
        return np.asarray(im.convert("RGB"))


def load_rafdb(image_root, label_list) -> tuple[DatasetManifest, dict[str, np.ndarray]]:
    """RAF-DB adapter: image directory plus the `<name> <code>` label list;
    the train_/test_ filename prefix decides the split."""
    root = Path(image_root)
    manifest = DatasetManifest()
    images: dict[str, np.ndarray] = {}
    with open(label_list, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise DatasetError(f"{label_list}: line {line_no}: expected '<name> <code>'")
            name, code_str = parts
            try:
                code = int(code_str)
            except ValueError as exc:
                raise UnknownLabelCode(f"line {line_no}: non-integer label code {code_str!r}") from exc
            if code not in RAFDB_CODES:
                raise UnknownLabelCode(f"line {line_no}: label code {code} outside 1-7")
            if name.startswith("train_"):
                split = "train"
            elif name.startswith("test_"):
                split = "test"
            else:
                raise DatasetError(f"{label_list}: line {line_no}: {name!r} has no train_/test_ prefix")
            path = root / name
            if not path.is_file():
                raise MissingImageFile(str(path))
            image_id = Path(name).stem
            manifest.entries.append(
                ManifestEntry(image_id=image_id, source=name, label=RAFDB_CODES[code], split=split)
            )
            images[image_id] = _load_image(path)
    return manifest, images


def load_affectnet(
    manifest_csv,
    image_root,
    codes: dict[int, str] | None = None,
    path_column: str = "subdirectory_filepath",
    label_column: str = "expression",
    split: str = "train",
) -> tuple[DatasetManifest, dict[str, np.ndarray]]:
    """AffectNet adapter. Column names and the code table are parameters
    because layouts differ between releases; defaults match the common
    manually-annotated CSVs. Non-emotion categories (none/uncertain/
    non-face) are excluded and counted."""
    codes = AFFECTNET_CODES if codes is None else codes
    root = Path(image_root)
    header, rows = _read_csv_rows(manifest_csv)
    manifest = DatasetManifest()
    images: dict[str, np.ndarray] = {}
    if not header:
        return manifest, images
    path_col = _column(header, path_column.lower(), manifest_csv)
    label_col = _column(header, label_column.lower(), manifest_csv)
    for idx, row in enumerate(rows):
        rel = row[path_col].strip()
        try:
            code = int(row[label_col])
        except ValueError as exc:
            raise UnknownLabelCode(f"row {idx}: non-integer expression code") from exc
        if code not in codes:
            raise UnknownLabelCode(f"row {idx}: expression code {code} not in mapping")
        label = codes[code]
        if label in AFFECTNET_EXCLUDED:
            manifest.excluded[label] += 1
            continue
        path = root / rel
        if not path.is_file():
            raise MissingImageFile(str(path))
        stem = rel.rsplit(".", 1)[0] if "." in Path(rel).name else rel
        # ids must be path-safe: they become single filename components
        image_id = stem.replace("/", "_").replace("\\", "_")
        manifest.entries.append(
            ManifestEntry(image_id=image_id, source=rel, label=label, split=split)
        )
        images[image_id] = _load_image(path)
    return manifest, images
