"""Camera model, planar pose recovery, matrix packing, stereo eye offsets.

Camera convention throughout the engine: X right, Y down, Z forward; a
marker in front of the camera has translation.z > 0. The column-major
16-element packing mirrors a GL-style modelview load; no axis flip is
applied internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (BehindCameraError, DegenerateGeometryError, InvalidInputError,
                     LowQualityPoseError, PoseFailureError)
from .geometry import Homography, estimate_homography
from .marker import DetectedMarker, MarkerPattern

NEAR_PLANE = 1e-4


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise InvalidInputError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise InvalidInputError("principal point must lie inside the image")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.fx, 0.0, self.cx],
                         [0.0, self.fy, self.cy],
                         [0.0, 0.0, 1.0]])

    @classmethod
    def from_json(cls, text: str) -> "CameraIntrinsics":
        doc = json.loads(text)
        return cls(fx=float(doc["fx"]), fy=float(doc["fy"]),
                   cx=float(doc["cx"]), cy=float(doc["cy"]),
                   width=int(doc["width"]), height=int(doc["height"]))

    @classmethod
    def load(cls, path: str) -> "CameraIntrinsics":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> str:
        return json.dumps({"fx": self.fx, "fy": self.fy, "cx": self.cx,
                           "cy": self.cy, "width": self.width, "height": self.height})


@dataclass(frozen=True)
class Pose:
    """Camera-from-marker rigid transform."""

    rotation: np.ndarray  # (3, 3)
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if r.shape != (3, 3):
            raise InvalidInputError("rotation must be 3x3")
        if np.abs(r.T @ r - np.eye(3)).max() > 1e-6:
            raise InvalidInputError("rotation must be orthonormal")
        if np.linalg.det(r) < 0:
            raise InvalidInputError("rotation must be proper (det +1)")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    def transform(self, pts: np.ndarray) -> np.ndarray:
        """Map (n, 3) object-space points into camera space."""
        return np.asarray(pts, dtype=np.float64) @ self.rotation.T + self.translation


@dataclass(frozen=True)
class ModelView16:
    """Column-major 4x4 homogeneous matrix as a flat 16-vector."""

    elements: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=np.float64).reshape(16)
        if not (e[3] == 0 and e[7] == 0 and e[11] == 0 and e[15] == 1):
            raise InvalidInputError("bottom row must be (0, 0, 0, 1)")
        object.__setattr__(self, "elements", e)

    def serialize(self) -> str:
        return " ".join(repr(float(v)) for v in self.elements)


def project(cam: CameraIntrinsics, p_cam, near: float = NEAR_PLANE) -> np.ndarray:
    """Pinhole projection of one camera-space point to pixel coordinates."""
    p = np.asarray(p_cam, dtype=np.float64).reshape(3)
    if p[2] <= near:
        raise BehindCameraError(f"point depth {p[2]} is at or behind the near plane")
    return np.array([cam.fx * p[0] / p[2] + cam.cx,
                     cam.fy * p[1] / p[2] + cam.cy])


def project_many(cam: CameraIntrinsics, pts: np.ndarray, near: float = NEAR_PLANE) -> np.ndarray:
    p = np.asarray(pts, dtype=np.float64).reshape(-1, 3)
    if np.any(p[:, 2] <= near):
        raise BehindCameraError("a point is at or behind the near plane")
    return np.column_stack([cam.fx * p[:, 0] / p[:, 2] + cam.cx,
                            cam.fy * p[:, 1] / p[:, 2] + cam.cy])


def pose_from_homography(h: Homography, cam: CameraIntrinsics) -> Pose:
    """Decompose a marker-plane-to-image homography into a rigid pose.

    M = K^-1 H; the rotation scale is the mean of the first two column
    norms; r3 = r1 x r2; the result is projected to the nearest rotation
    via SVD and the sign fixed so the marker sits in front of the camera.
    """
    m = np.linalg.solve(cam.matrix, h.matrix)
    n1 = np.linalg.norm(m[:, 0])
    n2 = np.linalg.norm(m[:, 1])
    if n1 < 1e-15 or n2 < 1e-15:
        raise PoseFailureError("homography columns vanish under K^-1")
    lam = 2.0 / (n1 + n2)
    t = lam * m[:, 2]
    r1 = lam * m[:, 0]
    r2 = lam * m[:, 1]
    if t[2] < 0:
        r1, r2, t = -r1, -r2, -t
    r3 = np.cross(r1, r2)
    r0 = np.column_stack([r1, r2, r3])
    u, _, vt = np.linalg.svd(r0)
    d = np.linalg.det(u @ vt)
    r = u @ np.diag([1.0, 1.0, d]) @ vt
    return Pose(rotation=r, translation=t)


def pose_from_marker(det: DetectedMarker, pattern: MarkerPattern,
                     cam: CameraIntrinsics, max_reproj_px: float = 3.0) -> Pose:
    """Recover the camera-from-marker pose from canonical detection corners."""
    obj = pattern.corners_object()
    try:
        h = estimate_homography(obj, det.corners)
    except DegenerateGeometryError as exc:
        raise PoseFailureError(f"degenerate corner configuration: {exc}") from exc
    pose = pose_from_homography(h, cam)
    obj3 = np.column_stack([obj, np.zeros(4)])
    try:
        reproj = project_many(cam, pose.transform(obj3))
    except BehindCameraError as exc:
        raise PoseFailureError(f"recovered pose places corners behind camera: {exc}") from exc
    err = float(np.linalg.norm(reproj - det.corners, axis=1).mean())
    if err > max_reproj_px:
        raise LowQualityPoseError(f"mean corner reprojection error {err:.3f} px exceeds {max_reproj_px}")
    return pose


def to_modelview16(pose: Pose) -> ModelView16:
    """Pack a pose column-major: rotation columns, then translation."""
    e = np.zeros(16)
    e[0:3] = pose.rotation[:, 0]
    e[4:7] = pose.rotation[:, 1]
    e[8:11] = pose.rotation[:, 2]
    e[12:15] = pose.translation
    e[15] = 1.0
    return ModelView16(e)


def from_modelview16(mv: ModelView16) -> Pose:
    e = mv.elements
    r = np.column_stack([e[0:3], e[4:7], e[8:11]])
    return Pose(rotation=r, translation=e[12:15].copy())


def eye_offset(pose: Pose, side: Literal["left", "right"], separation: float) -> Pose:
    """Shift a pose for one eye of a parallel-axis stereo pair.

    Moving the camera to its left eye position shifts scene points to the
    right in that eye's frame: translation.x gains +separation/2 for the
    left eye and -separation/2 for the right. Rotation is unchanged.
    """
    if separation < 0:
        raise InvalidInputError("separation must be >= 0")
    if side not in ("left", "right"):
        raise InvalidInputError(f"unknown side {side!r}")
    sign = 1.0 if side == "left" else -1.0
    t = pose.translation.copy()
    t[0] += sign * separation / 2.0
    return Pose(rotation=pose.rotation, translation=t)
