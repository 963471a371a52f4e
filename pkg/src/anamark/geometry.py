"""Planar projective geometry: 4-point DLT homography estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError


@dataclass(frozen=True)
class Homography:
    """3x3 projective map, normalized so matrix[2,2] = 1 when well scaled."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (3, 3):
            raise ValueError("homography must be 3x3")
        if abs(m[2, 2]) > 1e-12:
            m = m / m[2, 2]
        object.__setattr__(self, "matrix", m)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        """Map (n, 2) points through the homography."""
        pts = np.asarray(pts, dtype=np.float64)
        ph = np.column_stack([pts, np.ones(len(pts))]) @ self.matrix.T
        return ph[:, :2] / ph[:, 2:3]

    def inverse(self) -> "Homography":
        return Homography(np.linalg.inv(self.matrix))


def _collinear3(pts: np.ndarray, tol: float = 1e-9) -> bool:
    p = np.asarray(pts, dtype=np.float64)
    scale = max(float(np.abs(p - p.mean(axis=0)).max()), 1e-30)
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                a, b, c = p[i], p[j], p[k]
                cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
                if abs(cross) < tol * scale * scale:
                    return True
    return False


def _normalization(pts: np.ndarray) -> np.ndarray:
    """Hartley normalization: centroid to origin, mean distance sqrt(2)."""
    centroid = pts.mean(axis=0)
    d = np.linalg.norm(pts - centroid, axis=1).mean()
    s = np.sqrt(2.0) / max(d, 1e-30)
    return np.array([[s, 0, -s * centroid[0]],
                     [0, s, -s * centroid[1]],
                     [0, 0, 1.0]])


def estimate_homography(object_pts, image_pts) -> Homography:
    """DLT on Hartley-normalized 4-point correspondences.

    Raises DegenerateGeometryError when any 3 points on either side are
    collinear or the linear system is rank-deficient.
    """
    src = np.asarray(object_pts, dtype=np.float64).reshape(4, 2)
    dst = np.asarray(image_pts, dtype=np.float64).reshape(4, 2)
    if _collinear3(src) or _collinear3(dst):
        raise DegenerateGeometryError("3 of the 4 correspondences are collinear")

    t_src = _normalization(src)
    t_dst = _normalization(dst)
    sn = (np.column_stack([src, np.ones(4)]) @ t_src.T)[:, :2]
    dn = (np.column_stack([dst, np.ones(4)]) @ t_dst.T)[:, :2]

    a = np.zeros((8, 9))
    for i in range(4):
        x, y = sn[i]
        u, v = dn[i]
        a[2 * i] = [-x, -y, -1, 0, 0, 0, u * x, u * y, u]
        a[2 * i + 1] = [0, 0, 0, -x, -y, -1, v * x, v * y, v]
    _, s, vt = np.linalg.svd(a)
    # 8x9 system: a second vanishing singular value means a degenerate config
    if s[-1] < 1e-10 * max(s[0], 1e-30):
        raise DegenerateGeometryError("DLT system is rank deficient")
    hn = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_dst) @ hn @ t_src
    if abs(np.linalg.det(h)) < 1e-15:
        raise DegenerateGeometryError("homography is rank deficient")
    return Homography(h)
