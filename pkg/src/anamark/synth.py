"""Synthetic frame generator: the ground-truth oracle for detection tests.

Renders markers under known poses by per-pixel inverse mapping through each
marker's plane homography, deliberately NOT sharing the projection or
rasterization code it helps validate. 2x2 supersampling box-filters cell
and outline edges; output is bit-deterministic for a fixed seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InvalidSpecError
from .imaging import Frame
from .kernels import get_backend
from .marker import MarkerPattern
from .pose import CameraIntrinsics, Pose


@dataclass(frozen=True)
class SynthSpec:
    cam: CameraIntrinsics
    placements: Sequence[tuple[MarkerPattern, Pose]] = ()
    background: Union[tuple[int, int, int], Frame] = (128, 128, 128)
    marker_dark: float = 20.0
    marker_light: float = 235.0
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.marker_dark < self.marker_light:
            raise InvalidSpecError("marker_dark must be below marker_light")
        if self.noise_sigma < 0:
            raise InvalidSpecError("noise_sigma must be >= 0")


@dataclass(frozen=True)
class GroundTruthMarker:
    pattern_id: int
    pose: Pose
    corners_px: np.ndarray  # (4, 2): TL, TR, BR, BL in canonical order


def _plane_homography(cam: CameraIntrinsics, pose: Pose) -> np.ndarray:
    """Marker plane (meters) to image map, written independently of pose.project."""
    k = np.array([[cam.fx, 0.0, cam.cx],
                  [0.0, cam.fy, cam.cy],
                  [0.0, 0.0, 1.0]])
    rt = np.column_stack([pose.rotation[:, 0], pose.rotation[:, 1], pose.translation])
    return k @ rt


def ground_truth_corners(cam: CameraIntrinsics, pattern: MarkerPattern,
                         pose: Pose) -> np.ndarray:
    h = _plane_homography(cam, pose)
    obj = pattern.corners_object()
    ph = np.column_stack([obj, np.ones(4)]) @ h.T
    return ph[:, :2] / ph[:, 2:3]


def render_synthetic(spec: SynthSpec) -> tuple[Frame, list[GroundTruthMarker]]:
    """Render the spec's markers over the background; return frame + truth.

    Raises InvalidSpecError when a placement is not front-facing or its
    printed square is not fully inside the image.
    """
    cam = spec.cam
    h, w = cam.height, cam.width
    if isinstance(spec.background, Frame):
        if spec.background.height != h or spec.background.width != w:
            raise InvalidSpecError("background frame dimensions must match the camera")
        bg = spec.background.pixels.astype(np.float64)
    else:
        bg = np.broadcast_to(np.asarray(spec.background, dtype=np.float64),
                             (h, w, 3)).copy()

    acc = np.zeros((h, w), dtype=np.float64)
    cnt = np.zeros((h, w), dtype=np.float64)
    backend = get_backend()
    truth = []
    for pattern, pose in spec.placements:
        t = pose.translation
        dist = float(np.linalg.norm(t))
        if dist <= 0 or t[2] <= 0:
            raise InvalidSpecError("marker must sit in front of the camera")
        facing = float(pose.rotation[:, 2] @ (t / dist))
        if facing <= 0.05:
            raise InvalidSpecError("marker is not front-facing")
        corners = ground_truth_corners(cam, pattern, pose)
        if (corners[:, 0].min() < 1 or corners[:, 1].min() < 1
                or corners[:, 0].max() > w - 1 or corners[:, 1].max() > h - 1):
            raise InvalidSpecError("marker must be fully inside the image")

        hom = _plane_homography(cam, pose)
        hinv = np.linalg.inv(hom)
        n = pattern.grid_size
        full_grid = np.ones((n + 2, n + 2), dtype=bool)
        full_grid[1:-1, 1:-1] = pattern.grid
        jlo = max(int(np.floor(corners[:, 0].min())) - 2, 0)
        jhi = min(int(np.ceil(corners[:, 0].max())) + 2, w - 1)
        ilo = max(int(np.floor(corners[:, 1].min())) - 2, 0)
        ihi = min(int(np.ceil(corners[:, 1].max())) + 2, h - 1)
        ox, oy = pattern.center_offset
        backend.splat_marker(acc, cnt, hinv, full_grid, float(ox), float(oy),
                             pattern.physical_width / 2.0,
                             float(spec.marker_dark), float(spec.marker_light),
                             jlo, jhi, ilo, ihi)
        truth.append(GroundTruthMarker(pattern_id=pattern.id, pose=pose,
                                       corners_px=corners))

    out = (acc[:, :, None] + bg * (4.0 - cnt[:, :, None])) / 4.0
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        out = out + rng.normal(0.0, spec.noise_sigma, size=(h, w))[:, :, None]
    frame = Frame(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))
    return frame, truth


def ground_truth_json(truth: list[GroundTruthMarker]) -> str:
    return json.dumps({
        "markers": [
            {
                "id": gt.pattern_id,
                "rotation": [float(v) for v in gt.pose.rotation.ravel()],
                "translation": [float(v) for v in gt.pose.translation],
                "corners_px": [[float(u), float(v)] for u, v in gt.corners_px],
            }
            for gt in truth
        ]
    }, indent=2)
