"""VR-headset occlusion simulation for face-image datasets."""

__version__ = "0.1.0"

from .geometry import GEAR_VR, HeadsetSpec, OcclusionPatch, build_patch
from .pipeline import OcclusionResult, RunOptions, RunReport, export_run, occlude_dataset
from .raster import occluded_fraction, point_in_quad, rasterize_quad
from .sidecar import LandmarkRecord, LandmarkSet, parse_landmark_file, validate_for_occlusion

__all__ = [
    "GEAR_VR",
    "HeadsetSpec",
    "OcclusionPatch",
    "build_patch",
    "point_in_quad",
    "rasterize_quad",
    "occluded_fraction",
    "LandmarkRecord",
    "LandmarkSet",
    "parse_landmark_file",
    "validate_for_occlusion",
    "RunOptions",
    "RunReport",
    "OcclusionResult",
    "occlude_dataset",
    "export_run",
    "__version__",
]
