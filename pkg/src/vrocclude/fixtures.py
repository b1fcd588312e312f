"""Synthetic dataset fixtures in each supported input layout.

`python -m vrocclude.fixtures OUTDIR` writes a small demo tree; the test
suite calls the same builders with different sizes. Every fixture ships a
matching landmark sidecar whose ids line up with the loader's ids.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from .sidecar import LandmarkRecord, LandmarkSet, serialize_landmark_set
from .synthfaces import random_landmarks, render_face

FERPLUS_LABEL_HEADER = [
    "usage", "Image name", "neutral", "happiness", "surprise", "sadness",
    "anger", "disgust", "fear", "contempt", "unknown", "NF",
]
_USAGE = {"train": "Training", "val": "PublicTest", "test": "PrivateTest"}


def _pixels_string(img: np.ndarray) -> str:
    return " ".join(str(int(v)) for v in img.reshape(-1))


def _votes(label_idx: int) -> list[int]:
    votes = [0] * 10
    votes[label_idx] = 7
    votes[(label_idx + 1) % 8] = 2
    votes[8] = 1
    return votes


def make_ferplus_fixture(
    out_dir,
    counts=(6, 2, 2),
    size: int = 48,
    seed: int = 7,
    drop_landmarks_for=(),
    unknown_rows: int = 0,
):
    """Write a FER+-layout fixture: pixels.csv + labels.csv + landmarks.jsonl.

    counts = (train, val, test) clean rows; unknown_rows adds rows whose
    vote argmax is `unknown` (the loader must exclude them).
    drop_landmarks_for lists row indices left out of the sidecar.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    pixels_rows = []
    label_rows = []
    records = {}
    idx = 0
    for split, n in zip(("train", "val", "test"), counts):
        for _ in range(n):
            pts = random_landmarks(rng, size=size)
            img = render_face(pts, size=size)
            pixels_rows.append([_USAGE[split], _pixels_string(img)])
            label_rows.append([_USAGE[split], ""] + [str(v) for v in _votes(idx % 8)])
            if idx not in drop_landmarks_for:
                image_id = f"ferplus_{idx:08d}"
                records[image_id] = LandmarkRecord(
                    image_id=image_id, points=pts, box=None, detector="synthetic"
                )
            idx += 1
    for _ in range(unknown_rows):
        pts = random_landmarks(rng, size=size)
        img = render_face(pts, size=size)
        votes = [0] * 10
        votes[8] = 9
        pixels_rows.append([_USAGE["train"], _pixels_string(img)])
        label_rows.append([_USAGE["train"], ""] + [str(v) for v in votes])
        idx += 1

    pixels_csv = out / "pixels.csv"
    with open(pixels_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Usage", "pixels"])
        writer.writerows(pixels_rows)
    labels_csv = out / "labels.csv"
    with open(labels_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(FERPLUS_LABEL_HEADER)
        writer.writerows(label_rows)
    landmarks_path = out / "landmarks.jsonl"
    serialize_landmark_set(LandmarkSet(records), landmarks_path)
    return {"pixels": pixels_csv, "labels": labels_csv, "landmarks": landmarks_path}


def make_rafdb_fixture(out_dir, n_train: int = 2, n_test: int = 2, size: int = 96, seed: int = 11):
    """RAF-DB layout: image dir + `<name> <code>` list + landmarks.jsonl."""
    out = Path(out_dir)
    images_dir = out / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    lines = []
    records = {}
    for prefix, n in (("train", n_train), ("test", n_test)):
        for i in range(n):
            name = f"{prefix}_{i:05d}.png"
            pts = random_landmarks(rng, size=size)
            img = render_face(pts, size=size, channels=3)
            Image.fromarray(img, mode="RGB").save(images_dir / name)
            code = rng.integers(1, 8)
            lines.append(f"{name} {code}")
            image_id = Path(name).stem
            records[image_id] = LandmarkRecord(
                image_id=image_id, points=pts, box=None, detector="synthetic"
            )
    label_list = out / "list_patition_label.txt"
    label_list.write_text("\n".join(lines) + "\n", encoding="utf-8")
    landmarks_path = out / "landmarks.jsonl"
    serialize_landmark_set(LandmarkSet(records), landmarks_path)
    return {"image_root": images_dir, "label_list": label_list, "landmarks": landmarks_path}


def make_affectnet_fixture(out_dir, n_basic: int = 5, n_excluded: int = 2, size: int = 96, seed: int = 13):
    """AffectNet layout: manifest CSV + image root + landmarks.jsonl.
    n_excluded rows carry non-face/uncertain codes and stay unlisted."""
    out = Path(out_dir)
    images_dir = out / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    rows = []
    records = {}
    for i in range(n_basic + n_excluded):
        rel = f"images/{i:05d}.png"
        pts = random_landmarks(rng, size=size)
        img = render_face(pts, size=size, channels=3)
        Image.fromarray(img, mode="RGB").save(out / rel)
        if i < n_basic:
            code = int(rng.integers(0, 8))
            image_id = rel.rsplit(".", 1)[0].replace("/", "_")
            records[image_id] = LandmarkRecord(
                image_id=image_id, points=pts, box=None, detector="synthetic"
            )
        else:
            code = 10 if (i - n_basic) % 2 == 0 else 9
        rows.append([rel, str(code)])

    manifest_csv = out / "training.csv"
    with open(manifest_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subDirectory_filePath", "expression"])
        writer.writerows(rows)
    landmarks_path = out / "landmarks.jsonl"
    serialize_landmark_set(LandmarkSet(records), landmarks_path)
    return {"manifest_csv": manifest_csv, "image_root": out, "landmarks": landmarks_path}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m vrocclude.fixtures OUTDIR", file=sys.stderr)
        return 2
    root = Path(argv[0])
    make_ferplus_fixture(root / "ferplus", unknown_rows=1)
    make_rafdb_fixture(root / "rafdb")
    make_affectnet_fixture(root / "affectnet")
    print(f"fixtures written under {root}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
