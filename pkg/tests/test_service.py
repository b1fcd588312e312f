import base64
import io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from conftest import make_golden_landmarks
from vrocclude import __version__
from vrocclude.fixtures import make_ferplus_fixture
from vrocclude.geometry import build_patch
from vrocclude.service import create_app
from vrocclude.service.app import OUTLINE_COLOR
from vrocclude.sidecar import LandmarkRecord, record_to_json
from vrocclude.synthfaces import render_face, synth_landmarks


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": __version__}


class TestPatch:
    def test_matches_library(self, client):
        pts = make_golden_landmarks()
        resp = client.post("/patch", json={"landmarks": pts.tolist()})
        assert resp.status_code == 200
        body = resp.json()
        p = build_patch(pts)
        assert body["center"] == [100.0, 80.0]
        assert body["width_px"] == p.width_px
        assert body["height_px"] == p.height_px
        assert body["angle_rad"] == 0.0
        assert np.allclose(body["corners"], p.corners, atol=1e-12)

    def test_headset_override(self, client):
        pts = make_golden_landmarks()
        resp = client.post(
            "/patch",
            json={"landmarks": pts.tolist(), "headset": {"width_mm": 100.0, "height_mm": 50.0}},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["width_px"] == pytest.approx(100.0 * (152.0 / 152.0), abs=1e-9)
        assert body["height_px"] == pytest.approx(50.0, abs=1e-9)

    def test_degenerate_eyes_400(self, client):
        pts = make_golden_landmarks()
        pts[36:48] = (50.0, 50.0)
        resp = client.post("/patch", json={"landmarks": pts.tolist()})
        assert resp.status_code == 400
        assert "DegenerateEyes" in resp.json()["detail"]

    def test_wrong_point_count_422(self, client):
        resp = client.post("/patch", json={"landmarks": [[0.0, 0.0]] * 67})
        assert resp.status_code == 422

    def test_invalid_headset_400(self, client):
        pts = make_golden_landmarks()
        resp = client.post(
            "/patch", json={"landmarks": pts.tolist(), "headset": {"width_mm": -1.0}}
        )
        assert resp.status_code == 400


class TestPreview:
    def _payload(self, size=96):
        pts = synth_landmarks(center=(size / 2, size / 2), scale=size * 0.3)
        img = render_face(pts, size=size)
        buf = io.BytesIO()
        Image.fromarray(img, mode="L").save(buf, format="PNG")
        return {
            "image_png_b64": base64.b64encode(buf.getvalue()).decode(),
            "landmarks": pts.tolist(),
        }, pts, img

    def test_side_by_side_png(self, client):
        payload, pts, img = self._payload()
        resp = client.post("/preview", json=payload)
        assert resp.status_code == 200
        assert resp.headers["content-type"] == "image/png"
        out = np.asarray(Image.open(io.BytesIO(resp.content)))
        h, w = img.shape
        assert out.shape == (h, 2 * w, 3)
        # left panel carries the outline, right panel the filled patch
        left, right = out[:, :w], out[:, w:]
        assert np.any(np.all(left == OUTLINE_COLOR, axis=-1))
        corners = build_patch(pts).corners
        cx = int(corners[:, 0].mean())
        cy = int(corners[:, 1].mean())
        assert np.all(right[cy, cx] == 0)

    def test_fill_value(self, client):
        payload, pts, img = self._payload()
        payload["fill"] = 200
        resp = client.post("/preview", json=payload)
        out = np.asarray(Image.open(io.BytesIO(resp.content)))
        right = out[:, img.shape[1]:]
        corners = build_patch(pts).corners
        cx = int(corners[:, 0].mean())
        cy = int(corners[:, 1].mean())
        assert np.all(right[cy, cx] == 200)

    def test_bad_image_400(self, client):
        pts = make_golden_landmarks()
        resp = client.post(
            "/preview",
            json={"image_png_b64": base64.b64encode(b"nope").decode(), "landmarks": pts.tolist()},
        )
        assert resp.status_code == 400
        assert "decodable" in resp.json()["detail"]


class TestRun:
    def test_full_run(self, client, tmp_path):
        paths = make_ferplus_fixture(tmp_path / "fx", counts=(3, 1, 1))
        out = tmp_path / "out"
        resp = client.post(
            "/run",
            json={
                "dataset": {
                    "kind": "ferplus",
                    "pixels_csv": str(paths["pixels"]),
                    "labels_csv": str(paths["labels"]),
                },
                "landmarks_path": str(paths["landmarks"]),
                "out_dir": str(out),
                "options": {"out_width": 32, "out_height": 32},
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["report"]["status_counts"] == {"occluded": 5}
        assert body["report"]["augmented"] == 3
        assert (out / "manifest.tsv").is_file()
        report = json.loads((out / "report.json").read_text())
        assert report == body["report"]
        pngs = sorted(p.relative_to(out).as_posix() for p in out.rglob("*.png"))
        assert len(pngs) == 8  # 5 occluded + 3 train flips

    def test_missing_sidecar_400(self, client, tmp_path):
        paths = make_ferplus_fixture(tmp_path / "fx", counts=(1, 0, 0))
        resp = client.post(
            "/run",
            json={
                "dataset": {
                    "kind": "ferplus",
                    "pixels_csv": str(paths["pixels"]),
                    "labels_csv": str(paths["labels"]),
                },
                "landmarks_path": str(tmp_path / "nothing.jsonl"),
                "out_dir": str(tmp_path / "out"),
            },
        )
        assert resp.status_code == 400

    def test_malformed_sidecar_400_with_line(self, client, tmp_path):
        paths = make_ferplus_fixture(tmp_path / "fx", counts=(1, 0, 0))
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"image_id": "x"}\n')
        resp = client.post(
            "/run",
            json={
                "dataset": {
                    "kind": "ferplus",
                    "pixels_csv": str(paths["pixels"]),
                    "labels_csv": str(paths["labels"]),
                },
                "landmarks_path": str(bad),
                "out_dir": str(tmp_path / "out"),
            },
        )
        assert resp.status_code == 400
        detail = resp.json()["detail"]
        assert detail["line"] == 1
        assert detail["error"] == "MalformedLine"

    def test_missing_pixels_csv_400(self, client, tmp_path):
        resp = client.post(
            "/run",
            json={
                "dataset": {
                    "kind": "ferplus",
                    "pixels_csv": str(tmp_path / "no.csv"),
                    "labels_csv": str(tmp_path / "no2.csv"),
                },
                "landmarks_path": str(tmp_path / "lm.jsonl"),
                "out_dir": str(tmp_path / "out"),
            },
        )
        assert resp.status_code == 400

    def test_unknown_dataset_kind_422(self, client, tmp_path):
        resp = client.post(
            "/run",
            json={
                "dataset": {"kind": "imagenet"},
                "landmarks_path": "x",
                "out_dir": "y",
            },
        )
        assert resp.status_code == 422


class TestValidate:
    def test_counts_and_warnings(self, client, tmp_path):
        good = make_golden_landmarks()
        tight = make_golden_landmarks()
        tight[36:48] = [(50.0, 50.0), (50.5, 50.0)] * 6  # eyes under 2 px apart
        path = tmp_path / "lm.jsonl"
        path.write_text(
            record_to_json(LandmarkRecord("a", good))
            + "\n"
            + record_to_json(LandmarkRecord("b", tight))
            + "\n"
        )
        resp = client.post("/validate", json={"landmarks_path": str(path)})
        assert resp.status_code == 200
        body = resp.json()
        assert body["records"] == 2
        assert body["covered"] is None
        assert [w["image_id"] for w in body["warnings"]] == ["b"]
        assert any("eye centers" in w for w in body["warnings"][0]["warnings"])

    def test_coverage_against_dataset(self, client, tmp_path):
        paths = make_ferplus_fixture(tmp_path / "fx", counts=(2, 1, 0), drop_landmarks_for=(1,))
        resp = client.post(
            "/validate",
            json={
                "landmarks_path": str(paths["landmarks"]),
                "dataset": {
                    "kind": "ferplus",
                    "pixels_csv": str(paths["pixels"]),
                    "labels_csv": str(paths["labels"]),
                },
            },
        )
        body = resp.json()
        assert body["records"] == 2
        assert body["covered"] == 2
        assert body["missing"] == ["ferplus_00000001"]

    def test_parse_error_400(self, client, tmp_path):
        path = tmp_path / "lm.jsonl"
        path.write_text("not json\n")
        resp = client.post("/validate", json={"landmarks_path": str(path)})
        assert resp.status_code == 400
        assert resp.json()["detail"]["line"] == 1
