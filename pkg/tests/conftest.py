"""Shared fixtures: deterministic synthetic faces and tree hashing."""

from __future__ import annotations

import hashlib
import math
from pathlib import Path

import numpy as np
import pytest

# Zero-sum offsets for the six eye-contour points, so the arithmetic mean
# of each eye ring is exactly the intended center (all values are small
# integers, every partial sum is exact in float64).
EYE_RING = [(-2, 0), (-1, -1), (1, -1), (2, 0), (1, 1), (-1, 1)]


def make_golden_landmarks() -> np.ndarray:
    """Frontal face with eye centers exactly (60,80)/(140,80) and temples
    exactly (20,120)/(172,120); every other point is plausible filler."""
    pts = np.zeros((68, 2), dtype=np.float64)
    for i in range(17):  # jaw arc
        pts[i] = (20.0 + 9.5 * i, 120.0 + 30.0 * math.sin(math.pi * i / 16))
    pts[0] = (20.0, 120.0)
    pts[16] = (172.0, 120.0)
    for k in range(5):  # brows
        pts[17 + k] = (40.0 + 10.0 * k, 62.0)
        pts[22 + k] = (120.0 + 10.0 * k, 62.0)
    for k in range(4):  # nose bridge
        pts[27 + k] = (100.0, 85.0 + 8.0 * k)
    for k in range(5):  # nostrils
        pts[31 + k] = (90.0 + 5.0 * k, 115.0)
    for k, (dx, dy) in enumerate(EYE_RING):
        pts[36 + k] = (60.0 + dx, 80.0 + dy)
        pts[42 + k] = (140.0 + dx, 80.0 + dy)
    for k in range(12):  # outer mouth ring
        a = 2 * math.pi * k / 12
        pts[48 + k] = (100.0 + 22.0 * math.cos(a), 150.0 + 10.0 * math.sin(a))
    for k in range(8):  # inner mouth ring
        a = 2 * math.pi * k / 8
        pts[60 + k] = (100.0 + 12.0 * math.cos(a), 150.0 + 5.0 * math.sin(a))
    return pts


@pytest.fixture
def golden_landmarks() -> np.ndarray:
    return make_golden_landmarks()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)


def hash_tree(root) -> str:
    """Digest of every file's relative path and bytes under root."""
    root = Path(root)
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode())
        digest.update(b"\0")
        digest.update(path.read_bytes())
        digest.update(b"\0")
    return digest.hexdigest()


@pytest.fixture
def tree_hash():
    return hash_tree
