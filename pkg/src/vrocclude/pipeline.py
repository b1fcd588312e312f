"""Batch occlusion runner: geometry + raster + preprocessing over a
dataset manifest, with deterministic outputs for any worker count.

Per image: place the headset patch at native resolution (the sidecar
coordinates are native), paint it, then resize / replicate channels /
normalize. Per-image geometric failures mark the entry and never abort
the batch. Flip augmentation (train split only) occludes the mirrored
image with mirrored landmarks, which equals flipping the occluded
original bit-for-bit.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .datasets import DatasetManifest, ManifestEntry
from .errors import DegenerateEyes, DegenerateFace
from .geometry import GEAR_VR, HeadsetSpec, build_patch
from .preprocess import hflip, minmax_normalize, mirror_landmarks, replicate_channels, resize_bilinear
from .raster import occluded_fraction, rasterize_quad
from .sidecar import LandmarkSet

HISTOGRAM_BINS = 10


@dataclass(frozen=True)
class RunOptions:
    headset: HeadsetSpec = GEAR_VR
    fill: int = 0
    out_size: tuple[int, int] = (224, 224)  # (width, height)
    normalize: bool = True
    flip_train: bool = True
    replicate: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.out_size[0] < 1 or self.out_size[1] < 1:
            raise ValueError("out_size must be >= 1x1")

    def config_snapshot(self) -> dict:
        # worker count deliberately omitted: report.json must be identical
        # for any parallelism level
        return {
            "headset": {
                "width_mm": self.headset.width_mm,
                "height_mm": self.headset.height_mm,
                "head_breadth_mm": self.headset.head_breadth_mm,
                "vertical_offset_mm": self.headset.vertical_offset_mm,
            },
            "fill": self.fill,
            "out_size": list(self.out_size),
            "normalize": self.normalize,
            "flip_train": self.flip_train,
            "replicate": self.replicate,
        }


@dataclass
class OutputRecord:
    output_id: str
    source_id: str
    label: str
    split: str
    fraction: float
    augmented: bool


@dataclass
class RunReport:
    status_counts: dict[str, int]
    split_counts: dict[str, int]
    label_counts: dict[str, dict[str, int]]
    excluded: dict[str, int]
    augmented: int
    fraction_mean: float | None
    fraction_percentiles: dict[str, float] | None
    fraction_histogram: dict
    config: dict

    def to_dict(self) -> dict:
        return {
            "status_counts": dict(self.status_counts),
            "split_counts": dict(self.split_counts),
            "label_counts": {s: dict(l) for s, l in self.label_counts.items()},
            "excluded": dict(self.excluded),
            "augmented": self.augmented,
            "occluded_fraction": {
                "mean": self.fraction_mean,
                "percentiles": self.fraction_percentiles,
                "histogram": self.fraction_histogram,
            },
            "config": self.config,
        }


@dataclass
class OcclusionResult:
    entries: list[ManifestEntry]
    outputs: dict[str, np.ndarray] = field(repr=False)
    records: list[OutputRecord]
    report: RunReport


def _finalize(img: np.ndarray, options: RunOptions) -> np.ndarray:
    out_w, out_h = options.out_size
    img = resize_bilinear(img, out_w, out_h)
    if options.replicate:
        img = replicate_channels(img)
    if options.normalize:
        img = minmax_normalize(img)
    return img


def _process_entry(entry: ManifestEntry, img: np.ndarray, rec, options: RunOptions):
    """Returns (status, [(output_id, array, fraction, augmented), ...])."""
    if rec is None:
        return "skipped_no_landmarks", []
    try:
        patch = build_patch(rec.points, options.headset)
    except (DegenerateEyes, DegenerateFace):
        return "failed_degenerate", []
    h, w = img.shape[:2]
    occluded = rasterize_quad(img, patch.corners, options.fill)
    frac = occluded_fraction(w, h, patch.corners)
    outputs = [(entry.image_id, _finalize(occluded, options), frac, False)]

    if options.flip_train and entry.split == "train":
        flipped_pts = mirror_landmarks(rec.points, float(w))
        flipped_patch = build_patch(flipped_pts, options.headset)
        flipped = rasterize_quad(hflip(img), flipped_patch.corners, options.fill)
        flipped_frac = occluded_fraction(w, h, flipped_patch.corners)
        outputs.append(
            (entry.image_id + "_hflip", _finalize(flipped, options), flipped_frac, True)
        )
    return "occluded", outputs


def occlude_dataset(
    manifest: DatasetManifest,
    images: dict[str, np.ndarray],
    landmarks: LandmarkSet,
    options: RunOptions = RunOptions(),
) -> OcclusionResult:
    """Run the occlusion pipeline over a loaded dataset.

    Results are bit-identical for any worker count: per-image work is pure
    and aggregation happens in manifest order.
    """
    def job(entry: ManifestEntry):
        return _process_entry(entry, images[entry.image_id], landmarks.get(entry.image_id), options)

    entries = manifest.entries
    if options.workers == 1:
        results = [job(e) for e in entries]
    else:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            results = list(pool.map(job, entries))

    outputs: dict[str, np.ndarray] = {}
    records: list[OutputRecord] = []
    fractions: list[float] = []
    label_counts: dict[str, dict[str, int]] = {}
    augmented = 0
    for entry, (status, outs) in zip(entries, results):
        entry.status = status
        for output_id, arr, frac, is_aug in outs:
            outputs[output_id] = arr
            records.append(
                OutputRecord(
                    output_id=output_id,
                    source_id=entry.image_id,
                    label=entry.label,
                    split=entry.split,
                    fraction=frac,
                    augmented=is_aug,
                )
            )
            per_split = label_counts.setdefault(entry.split, {})
            per_split[entry.label] = per_split.get(entry.label, 0) + 1
            if is_aug:
                augmented += 1
            else:
                fractions.append(frac)

    counts, edges = np.histogram(fractions, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
    percentiles = None
    if fractions:
        qs = np.percentile(np.asarray(fractions, dtype=np.float64), [25, 50, 75, 90])
        percentiles = {f"p{p}": float(v) for p, v in zip((25, 50, 75, 90), qs)}
    report = RunReport(
        status_counts=dict(Counter(e.status for e in entries)),
        split_counts=dict(manifest.split_counts()),
        label_counts=label_counts,
        excluded=dict(manifest.excluded),
        augmented=augmented,
        fraction_mean=(sum(fractions) / len(fractions)) if fractions else None,
        fraction_percentiles=percentiles,
        fraction_histogram={
            "bin_edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        },
        config=options.config_snapshot(),
    )
    return OcclusionResult(entries=entries, outputs=outputs, records=records, report=report)


def to_uint8(img: np.ndarray) -> np.ndarray:
    """Storage encoding: unit-interval floats become round(255 * v)."""
    if img.dtype == np.uint8:
        return img
    return np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)


def save_png(img: np.ndarray, path: Path) -> None:
    arr = to_uint8(img)
    mode = "L" if arr.ndim == 2 else "RGB"
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(arr, mode=mode).save(path, format="PNG")


def export_run(result: OcclusionResult, out_dir) -> dict:
    """Write <out>/<split>/<label>/<id>.png plus manifest.tsv and report.json.

    Returns {"manifest": path, "report": path}. Output bytes depend only on
    inputs and options, never on worker count or timing.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for rec in result.records:
        save_png(result.outputs[rec.output_id], out / rec.split / rec.label / f"{rec.output_id}.png")

    manifest_path = out / "manifest.tsv"
    by_source: dict[str, list[OutputRecord]] = {}
    for rec in result.records:
        by_source.setdefault(rec.source_id, []).append(rec)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write("image_id\tlabel\tsplit\tstatus\toccluded_fraction\n")
        for entry in result.entries:
            if entry.status == "occluded":
                for rec in by_source[entry.image_id]:
                    fh.write(
                        f"{rec.output_id}\t{rec.label}\t{rec.split}\t{entry.status}\t{rec.fraction!r}\n"
                    )
            else:
                fh.write(f"{entry.image_id}\t{entry.label}\t{entry.split}\t{entry.status}\t\n")

    report_path = out / "report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(result.report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"manifest": manifest_path, "report": report_path}
