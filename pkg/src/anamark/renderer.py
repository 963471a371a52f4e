"""Software rasterizer: per-eye color + coverage + depth render targets.

Perspective-correct interpolation, near-plane clipping, top-left fill rule,
back-face culling on counterclockwise-front winding (positive shoelace in
y-down image coordinates), single directional light with an ambient floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .imaging import GrayImage
from .kernels import get_backend
from .pose import CameraIntrinsics, Pose

NEAR_PLANE = 1e-4
DEFAULT_LIGHT = (0.0, 0.0, 1.0)
WHITE_TEXEL = np.ones((1, 1, 3), dtype=np.float64)


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n, 3) meters, object space
    normals: np.ndarray  # (n, 3) unit vectors
    triangles: np.ndarray  # (m, 3) indices
    uvs: Optional[np.ndarray] = None  # (n, 2) in [0,1]^2

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        nrm = np.asarray(self.normals, dtype=np.float64).reshape(-1, 3)
        tri = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if len(nrm) != len(v):
            raise InvalidInputError("one normal per vertex required")
        lens = np.linalg.norm(nrm, axis=1)
        if len(nrm) and np.abs(lens - 1.0).max() > 1e-6:
            raise InvalidInputError("normals must be unit length")
        if len(tri) and (tri.min() < 0 or tri.max() >= len(v)):
            raise InvalidInputError("triangle index out of range")
        uv = self.uvs
        if uv is not None:
            uv = np.asarray(uv, dtype=np.float64).reshape(-1, 2)
            if len(uv) != len(v):
                raise InvalidInputError("one uv per vertex required")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "normals", nrm)
        object.__setattr__(self, "triangles", tri)
        object.__setattr__(self, "uvs", uv)

    def scaled(self, s: float) -> "Mesh":
        if s == 1.0:
            return self
        return Mesh(vertices=self.vertices * s, normals=self.normals,
                    triangles=self.triangles, uvs=self.uvs)


@dataclass(frozen=True)
class Material:
    diffuse: tuple[float, float, float] = (1.0, 1.0, 1.0)
    ambient: float = 0.2
    texture: Optional[np.ndarray] = None  # (th, tw, 3) float in [0,1]

    def __post_init__(self):
        d = tuple(float(c) for c in self.diffuse)
        if any(c < 0 or c > 1 for c in d) or not (0 <= self.ambient <= 1):
            raise InvalidInputError("material channels must be in [0, 1]")
        tex = self.texture
        if tex is not None:
            tex = np.asarray(tex, dtype=np.float64)
            if tex.ndim != 3 or tex.shape[2] != 3 or tex.shape[0] < 1 or tex.shape[1] < 1:
                raise InvalidInputError("texture must be (h, w, 3) with h, w >= 1")
        object.__setattr__(self, "diffuse", d)
        object.__setattr__(self, "texture", tex)


@dataclass(frozen=True)
class RenderTarget:
    color: np.ndarray  # (h, w, 3) uint8
    coverage: np.ndarray  # (h, w) bool
    depth: np.ndarray  # (h, w) float64, +inf where uncovered

    @property
    def height(self) -> int:
        return self.color.shape[0]

    @property
    def width(self) -> int:
        return self.color.shape[1]

    @classmethod
    def empty(cls, width: int, height: int) -> "RenderTarget":
        return cls(color=np.zeros((height, width, 3), dtype=np.uint8),
                   coverage=np.zeros((height, width), dtype=bool),
                   depth=np.full((height, width), np.inf))


def _clip_near(poly: list[tuple[np.ndarray, np.ndarray, np.ndarray]], near: float):
    """Sutherland-Hodgman clip of an attribute polygon against z = near."""
    out = []
    n = len(poly)
    for i in range(n):
        p0, uv0, n0 = poly[i]
        p1, uv1, n1 = poly[(i + 1) % n]
        in0 = p0[2] > near
        in1 = p1[2] > near
        if in0:
            out.append((p0, uv0, n0))
        if in0 != in1:
            t = (near - p0[2]) / (p1[2] - p0[2])
            out.append((p0 + t * (p1 - p0), uv0 + t * (uv1 - uv0), n0 + t * (n1 - n0)))
    return out


def render(objects: Sequence[tuple[Mesh, Material, Pose]], cam: CameraIntrinsics,
           light_dir=DEFAULT_LIGHT, near: float = NEAR_PLANE) -> RenderTarget:
    """Rasterize posed meshes into a color/coverage/depth target.

    Deterministic: triangles are processed in object and index order with a
    strict depth test, so the earlier triangle wins depth ties.
    """
    h, w = cam.height, cam.width
    colorf = np.zeros((h, w, 3), dtype=np.float64)
    depth = np.full((h, w), np.inf)
    cov = np.zeros((h, w), dtype=np.uint8)
    light = np.asarray(light_dir, dtype=np.float64)
    ln = np.linalg.norm(light)
    if ln == 0:
        raise InvalidInputError("light direction must be non-zero")
    light = light / ln
    backend = get_backend()

    for mesh, material, pose in objects:
        verts_cam = mesh.vertices @ pose.rotation.T + pose.translation
        norms_cam = mesh.normals @ pose.rotation.T
        uvs = mesh.uvs if mesh.uvs is not None else np.zeros((len(mesh.vertices), 2))
        tex = material.texture if material.texture is not None else WHITE_TEXEL
        diffuse = np.asarray(material.diffuse, dtype=np.float64)
        for tri in mesh.triangles:
            poly = [(verts_cam[k], uvs[k], norms_cam[k]) for k in tri]
            if all(p[0][2] <= near for p in poly):
                continue
            poly = _clip_near(poly, near)
            if len(poly) < 3:
                continue
            pts = np.array([p[0] for p in poly])
            xs_all = cam.fx * pts[:, 0] / pts[:, 2] + cam.cx
            ys_all = cam.fy * pts[:, 1] / pts[:, 2] + cam.cy
            for f in range(1, len(poly) - 1):
                idx = (0, f, f + 1)
                xs = np.array([xs_all[k] for k in idx])
                ys = np.array([ys_all[k] for k in idx])
                area2 = (xs[1] - xs[0]) * (ys[2] - ys[0]) - (ys[1] - ys[0]) * (xs[2] - xs[0])
                if area2 <= 0.0:
                    continue  # back-facing or degenerate
                izs = np.array([1.0 / pts[k, 2] for k in idx])
                uvz = np.array([poly[k][1] * izs[j] for j, k in enumerate(idx)])
                nvz = np.array([poly[k][2] * izs[j] for j, k in enumerate(idx)])
                backend.fill_triangle(xs, ys, izs, uvz, nvz, tex, diffuse,
                                      float(material.ambient), light,
                                      colorf, depth, cov)

    color = np.clip(np.floor(colorf * 255.0 + 0.5), 0, 255).astype(np.uint8)
    coverage = cov.astype(bool)
    return RenderTarget(color=color, coverage=coverage, depth=depth)


def load_obj(path: str) -> Mesh:
    """Wavefront OBJ subset: v, vn, vt, triangular f with v/vt/vn references."""
    positions, normals, uvs = [], [], []
    out_v, out_n, out_uv, tris = [], [], [], []
    cache: dict[tuple, int] = {}
    has_uv = False
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                positions.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vn":
                normals.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vt":
                uvs.append([float(x) for x in parts[1:3]])
            elif parts[0] == "f":
                if len(parts) != 4:
                    raise InvalidInputError("only triangular faces are supported")
                corner_idx = []
                for spec_str in parts[1:]:
                    key = spec_str
                    if key in cache:
                        corner_idx.append(cache[key])
                        continue
                    fields = spec_str.split("/")
                    vi = int(fields[0])
                    ti = int(fields[1]) if len(fields) > 1 and fields[1] else 0
                    ni = int(fields[2]) if len(fields) > 2 and fields[2] else 0
                    out_v.append(positions[vi - 1])
                    if ni:
                        out_n.append(normals[ni - 1])
                    else:
                        out_n.append(None)
                    if ti:
                        has_uv = True
                        out_uv.append(uvs[ti - 1])
                    else:
                        out_uv.append([0.0, 0.0])
                    cache[key] = len(out_v) - 1
                    corner_idx.append(cache[key])
                tris.append(corner_idx)

    verts = np.array(out_v, dtype=np.float64).reshape(-1, 3)
    tri_arr = np.array(tris, dtype=np.int64).reshape(-1, 3)
    if any(n is None for n in out_n):
        # fill missing normals from face planes (y-down CCW-front winding)
        filled = np.zeros((len(verts), 3))
        counts = np.zeros(len(verts))
        for a, b, c in tri_arr:
            fn = np.cross(verts[b] - verts[a], verts[c] - verts[a])
            nl = np.linalg.norm(fn)
            if nl > 0:
                fn = fn / nl
            for k in (a, b, c):
                filled[k] += fn
                counts[k] += 1
        for i, n in enumerate(out_n):
            if n is not None:
                filled[i] = n
        lens = np.linalg.norm(filled, axis=1)
        lens[lens == 0] = 1.0
        norm_arr = filled / lens[:, None]
    else:
        norm_arr = np.array(out_n, dtype=np.float64).reshape(-1, 3)
        lens = np.linalg.norm(norm_arr, axis=1)
        lens[lens == 0] = 1.0
        norm_arr = norm_arr / lens[:, None]
    return Mesh(vertices=verts, normals=norm_arr, triangles=tri_arr,
                uvs=np.array(out_uv) if has_uv else None)


def depth_as_gray(target: RenderTarget) -> GrayImage:
    """Normalize finite depths into [0, 255] for a PGM debug dump."""
    d = target.depth
    finite = np.isfinite(d)
    out = np.zeros(d.shape, dtype=np.uint8)
    if finite.any():
        lo = d[finite].min()
        hi = d[finite].max()
        span = hi - lo if hi > lo else 1.0
        out[finite] = np.clip(np.floor((d[finite] - lo) / span * 255.0 + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(out)
