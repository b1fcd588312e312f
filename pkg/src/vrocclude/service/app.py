"""Occlusion service: HTTP surface over the core package.

Path-taking endpoints (/run, /validate) resolve paths on the server's own
filesystem; this service is meant to run next to the data, with the CLI
or another client driving it. Single-image payloads (/patch, /preview)
travel in the request body instead.
"""

from __future__ import annotations

import base64
import io

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import Response
from PIL import Image, ImageDraw

from .. import __version__, datasets, geometry, pipeline, raster, sidecar
from ..errors import DatasetError, DegenerateEyes, DegenerateFace, SidecarError
from .schemas import (
    DatasetSource,
    HealthResponse,
    PatchRequest,
    PatchResponse,
    PreviewRequest,
    RecordWarnings,
    RunRequest,
    RunResponse,
    ValidateRequest,
    ValidateResponse,
)

OUTLINE_COLOR = (255, 0, 40)


def _headset(model) -> geometry.HeadsetSpec:
    try:
        return geometry.HeadsetSpec(
            width_mm=model.width_mm,
            height_mm=model.height_mm,
            head_breadth_mm=model.head_breadth_mm,
            vertical_offset_mm=model.vertical_offset_mm,
        )
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _build_patch(points, spec) -> geometry.OcclusionPatch:
    try:
        return geometry.build_patch(np.asarray(points, dtype=np.float64), spec)
    except (DegenerateEyes, DegenerateFace) as exc:
        raise HTTPException(status_code=400, detail=f"{type(exc).__name__}: {exc}")
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _load_dataset(source: DatasetSource):
    try:
        if source.kind == "ferplus":
            return datasets.load_ferplus(source.pixels_csv, source.labels_csv)
        if source.kind == "rafdb":
            return datasets.load_rafdb(source.image_root, source.label_list)
        return datasets.load_affectnet(
            source.manifest_csv, source.image_root, split=source.split
        )
    except (DatasetError, OSError) as exc:
        raise HTTPException(status_code=400, detail=f"{type(exc).__name__}: {exc}")


def _parse_sidecar(path) -> sidecar.LandmarkSet:
    try:
        return sidecar.parse_landmark_file(path)
    except SidecarError as exc:
        raise HTTPException(
            status_code=400,
            detail={"error": type(exc).__name__, "line": exc.line_no, "message": str(exc)},
        )
    except OSError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="vrocclude", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/patch", response_model=PatchResponse)
    def patch(req: PatchRequest):
        p = _build_patch(req.landmarks, _headset(req.headset))
        return PatchResponse(
            center=p.center,
            width_px=p.width_px,
            height_px=p.height_px,
            angle_rad=p.angle_rad,
            corners=[(float(x), float(y)) for x, y in p.corners],
        )

    @app.post("/preview")
    def preview(req: PreviewRequest):
        try:
            raw = base64.b64decode(req.image_png_b64)
            with Image.open(io.BytesIO(raw)) as im:
                img = np.asarray(im.convert("RGB"))
        except Exception:
            raise HTTPException(status_code=400, detail="image_png_b64 is not a decodable image")
        p = _build_patch(req.landmarks, _headset(req.headset))
        occluded = raster.rasterize_quad(img, p.corners, req.fill)
        left = Image.fromarray(img, mode="RGB")
        draw = ImageDraw.Draw(left)
        draw.polygon([tuple(c) for c in p.corners], outline=OUTLINE_COLOR, width=1)
        panel = Image.new("RGB", (img.shape[1] * 2, img.shape[0]))
        panel.paste(left, (0, 0))
        panel.paste(Image.fromarray(occluded, mode="RGB"), (img.shape[1], 0))
        buf = io.BytesIO()
        panel.save(buf, format="PNG")
        return Response(content=buf.getvalue(), media_type="image/png")

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest):
        manifest, images = _load_dataset(req.dataset)
        landmarks = _parse_sidecar(req.landmarks_path)
        opt = req.options
        options = pipeline.RunOptions(
            headset=_headset(opt.headset),
            fill=opt.fill,
            out_size=(opt.out_width, opt.out_height),
            normalize=opt.normalize,
            flip_train=opt.flip_train,
            replicate=opt.replicate,
            workers=opt.workers,
        )
        result = pipeline.occlude_dataset(manifest, images, landmarks, options)
        try:
            paths = pipeline.export_run(result, req.out_dir)
        except OSError as exc:
            raise HTTPException(status_code=400, detail=f"export failed: {exc}")
        return RunResponse(
            report=result.report.to_dict(),
            out_dir=req.out_dir,
            manifest_path=str(paths["manifest"]),
            report_path=str(paths["report"]),
        )

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        landmarks = _parse_sidecar(req.landmarks_path)
        warnings = []
        for image_id in sorted(landmarks.records):
            w = sidecar.validate_for_occlusion(landmarks.records[image_id])
            if w:
                warnings.append(RecordWarnings(image_id=image_id, warnings=w))
        covered = None
        missing = None
        if req.dataset is not None:
            manifest, _ = _load_dataset(req.dataset)
            ids = [e.image_id for e in manifest.entries]
            missing = sorted(i for i in ids if i not in landmarks)
            covered = len(ids) - len(missing)
        return ValidateResponse(
            records=len(landmarks),
            warnings=warnings,
            covered=covered,
            missing=missing,
        )

    return app


app = create_app()
