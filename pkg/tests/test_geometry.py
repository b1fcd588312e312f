import math

import numpy as np
import pytest

from vrocclude import geometry
from vrocclude.errors import DegenerateEyes, DegenerateFace
from vrocclude.geometry import (
    GEAR_VR,
    HeadsetSpec,
    as_landmarks,
    build_patch,
    eye_centers,
    interocular_angle,
    mm_to_px,
    rotate_about,
    temporal_reference_px,
)
from vrocclude.synthfaces import random_landmarks


def hexagon(center, r=3.0):
    return [
        (center[0] + r * math.cos(2 * math.pi * k / 6),
         center[1] + r * math.sin(2 * math.pi * k / 6))
        for k in range(6)
    ]


class TestEyeCenters:
    def test_hexagon_centroid(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[36:42] = hexagon((50.0, 60.0))
        left, _ = eye_centers(pts)
        assert left == pytest.approx((50.0, 60.0), abs=1e-9)

    def test_identical_points_degenerate_center(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[36:48] = (10.0, 10.0)
        left, right = eye_centers(pts)
        assert tuple(left) == (10.0, 10.0)
        assert tuple(right) == (10.0, 10.0)

    def test_right_eye_mean(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[42:48] = [(98, 40), (100, 38), (102, 38), (104, 40), (102, 42), (100, 42)]
        _, right = eye_centers(pts)
        assert tuple(right) == (101.0, 40.0)

    def test_golden_centers_exact(self, golden_landmarks):
        left, right = eye_centers(golden_landmarks)
        assert tuple(left) == (60.0, 80.0)
        assert tuple(right) == (140.0, 80.0)


class TestInterocularAngle:
    def test_level_eyes(self):
        assert interocular_angle((0.0, 0.0), (10.0, 0.0)) == 0.0

    def test_quarter_pi(self):
        assert interocular_angle((0.0, 0.0), (10.0, 10.0)) == pytest.approx(math.pi / 4, abs=1e-12)

    def test_coincident_raises(self):
        with pytest.raises(DegenerateEyes):
            interocular_angle((0.0, 0.0), (0.0, 0.0))

    def test_below_threshold_raises(self):
        with pytest.raises(DegenerateEyes):
            interocular_angle((0.0, 0.0), (5e-7, 0.0))

    def test_range_excludes_minus_pi(self):
        # pointing along -x with dy = -0.0 would give -pi from a raw atan2
        assert interocular_angle((10.0, 10.0), (5.0, 10.0)) == math.pi
        assert interocular_angle((10.0, -0.0), (5.0, 0.0)) == math.pi

    def test_positive_when_right_eye_lower(self):
        assert interocular_angle((0.0, 0.0), (10.0, 2.0)) > 0


class TestTemporalReference:
    def test_horizontal(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[0] = (0.0, 100.0)
        pts[16] = (200.0, 100.0)
        assert temporal_reference_px(pts) == 200.0

    def test_3_4_5(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[0] = (0.0, 0.0)
        pts[16] = (3.0, 4.0)
        assert temporal_reference_px(pts) == 5.0

    def test_coincident_raises(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[16] = pts[0]
        with pytest.raises(DegenerateFace):
            temporal_reference_px(pts)


class TestMmToPx:
    def test_identity_scale(self):
        assert mm_to_px(152.0, GEAR_VR) == 1.0

    def test_doubling(self):
        assert mm_to_px(304.0, GEAR_VR) == 2.0

    def test_fractional(self):
        assert mm_to_px(200.0, GEAR_VR) == pytest.approx(1.3157894736842106, abs=0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            mm_to_px(0.0, GEAR_VR)


class TestRotateAbout:
    def test_quarter_turn_y_down(self):
        out = rotate_about((1.0, 0.0), (0.0, 0.0), math.pi / 2)
        assert out == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_identity(self):
        assert tuple(rotate_about((5.0, 7.0), (3.0, -2.0), 0.0)) == (5.0, 7.0)

    def test_eighth_turn(self):
        out = rotate_about((1.0, 1.0), (0.0, 0.0), math.pi / 4)
        assert out == pytest.approx((0.0, math.sqrt(2.0)), abs=1e-12)

    def test_inverse_roundtrip(self, rng):
        for _ in range(1000):
            p = rng.uniform(-50, 50, size=2)
            c = rng.uniform(-50, 50, size=2)
            theta = rng.uniform(-math.pi, math.pi)
            back = rotate_about(rotate_about(p, c, theta), c, -theta)
            assert np.allclose(back, p, atol=1e-9)

    def test_composition_adds_angles(self, rng):
        p = np.array([3.0, 4.0])
        c = np.array([1.0, 1.0])
        a, b = 0.7, -1.2
        two_step = rotate_about(rotate_about(p, c, a), c, b)
        one_step = rotate_about(p, c, a + b)
        assert np.allclose(two_step, one_step, atol=1e-9)

    def test_array_input(self):
        pts = np.array([[1.0, 0.0], [0.0, 1.0]])
        out = rotate_about(pts, (0.0, 0.0), math.pi / 2)
        assert np.allclose(out, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12)


class TestHeadsetSpec:
    def test_defaults(self):
        assert (GEAR_VR.width_mm, GEAR_VR.height_mm) == (207.1, 98.6)
        assert GEAR_VR.head_breadth_mm == 152.0
        assert GEAR_VR.vertical_offset_mm == 0.0
        assert GEAR_VR.width_mm >= GEAR_VR.height_mm

    @pytest.mark.parametrize("kwargs", [
        {"width_mm": 0.0},
        {"height_mm": -1.0},
        {"head_breadth_mm": float("nan")},
        {"vertical_offset_mm": float("inf")},
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            HeadsetSpec(**kwargs)


class TestAsLandmarks:
    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            as_landmarks(np.zeros((67, 2)))

    def test_non_finite(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[5, 0] = float("nan")
        with pytest.raises(ValueError):
            as_landmarks(pts)


class TestBuildPatch:
    def test_golden_frontal(self, golden_landmarks):
        patch = build_patch(golden_landmarks, GEAR_VR)
        assert patch.center == pytest.approx((100.0, 80.0), abs=1e-9)
        assert patch.angle_rad == pytest.approx(0.0, abs=1e-12)
        assert patch.width_px == pytest.approx(207.1, abs=1e-9)
        assert patch.height_px == pytest.approx(98.6, abs=1e-9)
        expected = [(-3.55, 30.7), (203.55, 30.7), (203.55, 129.3), (-3.55, 129.3)]
        assert np.allclose(patch.corners, expected, atol=1e-6)

    def test_translation_equivariance(self, golden_landmarks):
        t = np.array([13.0, -7.0])
        base = build_patch(golden_landmarks)
        moved = build_patch(golden_landmarks + t)
        assert np.allclose(moved.corners, base.corners + t, atol=1e-9)
        assert moved.angle_rad == base.angle_rad
        assert moved.width_px == base.width_px

    def test_rotation_equivariance(self, golden_landmarks):
        phi = math.pi / 6
        pivot = np.array([100.0, 80.0])
        base = build_patch(golden_landmarks)
        rotated = build_patch(rotate_about(golden_landmarks, pivot, phi))
        assert rotated.center == pytest.approx(base.center, abs=1e-9)
        assert rotated.angle_rad == pytest.approx(base.angle_rad + phi, abs=1e-12)
        assert rotated.width_px == pytest.approx(base.width_px, abs=1e-9)
        assert np.allclose(
            rotated.corners, rotate_about(base.corners, pivot, phi), atol=1e-9
        )

    def test_scale_equivariance(self, golden_landmarks):
        s = 2.5
        base = build_patch(golden_landmarks)
        scaled = build_patch(golden_landmarks * s)
        assert np.allclose(scaled.corners, np.asarray(base.corners) * s, atol=1e-9 * s)
        assert scaled.width_px == pytest.approx(base.width_px * s, abs=1e-9 * s)
        assert scaled.angle_rad == base.angle_rad

    def test_patch_invariants(self, rng):
        for _ in range(50):
            pts = random_landmarks(rng, size=96)
            patch = build_patch(pts)
            corners = np.asarray(patch.corners)
            assert np.allclose(corners.mean(axis=0), patch.center, atol=1e-9)
            edges = np.roll(corners, -1, axis=0) - corners
            lengths = np.hypot(edges[:, 0], edges[:, 1])
            assert lengths[0] == pytest.approx(lengths[2], abs=1e-9)
            assert lengths[1] == pytest.approx(lengths[3], abs=1e-9)
            assert lengths[0] == pytest.approx(patch.width_px, abs=1e-9)
            assert lengths[1] == pytest.approx(patch.height_px, abs=1e-9)
            assert patch.width_px / patch.height_px == pytest.approx(
                207.1 / 98.6, abs=1e-9
            )

    def test_vertical_offset_moves_along_patch_axis(self, golden_landmarks):
        spec = HeadsetSpec(vertical_offset_mm=10.0)
        patch = build_patch(golden_landmarks, spec)
        # frontal face, scale 1 px/mm: straight down by 10 px
        assert patch.center == pytest.approx((100.0, 90.0), abs=1e-9)
        base = build_patch(golden_landmarks)
        assert np.allclose(patch.corners, np.asarray(base.corners) + [0.0, 10.0], atol=1e-9)

    def test_propagates_degenerate_eyes(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[36:48] = (10.0, 10.0)
        with pytest.raises(DegenerateEyes):
            build_patch(pts)

    def test_propagates_degenerate_face(self, golden_landmarks):
        pts = golden_landmarks.copy()
        pts[16] = pts[0]
        with pytest.raises(DegenerateFace):
            build_patch(pts)
