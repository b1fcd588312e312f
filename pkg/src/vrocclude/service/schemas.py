"""Request/response models for the occlusion service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

Point = tuple[float, float]


class HeadsetModel(BaseModel):
    width_mm: float = 207.1
    height_mm: float = 98.6
    head_breadth_mm: float = 152.0
    vertical_offset_mm: float = 0.0


class PatchRequest(BaseModel):
    landmarks: list[Point] = Field(min_length=68, max_length=68)
    headset: HeadsetModel = HeadsetModel()


class PatchResponse(BaseModel):
    center: Point
    width_px: float
    height_px: float
    angle_rad: float
    corners: list[Point]


class PreviewRequest(BaseModel):
    image_png_b64: str
    landmarks: list[Point] = Field(min_length=68, max_length=68)
    headset: HeadsetModel = HeadsetModel()
    fill: int = 0


class FerplusSource(BaseModel):
    kind: Literal["ferplus"] = "ferplus"
    pixels_csv: str
    labels_csv: str


class RafdbSource(BaseModel):
    kind: Literal["rafdb"] = "rafdb"
    image_root: str
    label_list: str


class AffectnetSource(BaseModel):
    kind: Literal["affectnet"] = "affectnet"
    manifest_csv: str
    image_root: str
    split: str = "train"


DatasetSource = Union[FerplusSource, RafdbSource, AffectnetSource]


class RunOptionsModel(BaseModel):
    headset: HeadsetModel = HeadsetModel()
    fill: int = 0
    out_width: int = 224
    out_height: int = 224
    normalize: bool = True
    flip_train: bool = True
    replicate: bool = True
    workers: int = Field(default=1, ge=1)


class RunRequest(BaseModel):
    dataset: DatasetSource = Field(discriminator="kind")
    landmarks_path: str
    out_dir: str
    options: RunOptionsModel = RunOptionsModel()


class RunResponse(BaseModel):
    report: dict
    out_dir: str
    manifest_path: str
    report_path: str


class ValidateRequest(BaseModel):
    landmarks_path: str
    dataset: Optional[DatasetSource] = Field(default=None, discriminator="kind")


class RecordWarnings(BaseModel):
    image_id: str
    warnings: list[str]


class ValidateResponse(BaseModel):
    records: int
    warnings: list[RecordWarnings]
    covered: Optional[int] = None
    missing: Optional[list[str]] = None


class HealthResponse(BaseModel):
    status: str
    version: str
