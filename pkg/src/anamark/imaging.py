"""Frame types, grayscale conversion, adaptive binarization, quad extraction.

Coordinate convention: continuous image coordinates, pixel (row i, col j)
covers [j, j+1) x [i, i+1) with its center at (j + 0.5, i + 0.5). Quads are
ordered with positive shoelace area in (x, y) image coordinates, anchored at
the corner nearest the image origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .kernels import get_backend


@dataclass(frozen=True)
class Frame:
    """RGB raster, (height, width, 3) uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
            raise InvalidInputError("Frame needs a (h, w, 3) uint8 array with h, w >= 1")
        object.__setattr__(self, "pixels", p)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class GrayImage:
    """Single-channel raster, (height, width) uint8."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.uint8)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidInputError("GrayImage needs a (h, w) uint8 array with h, w >= 1")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class BinaryImage:
    """Boolean raster; True marks dark/foreground pixels."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[1] < 1:
            raise InvalidInputError("BinaryImage needs a (h, w) bool array with h, w >= 1")
        object.__setattr__(self, "bits", b)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]


@dataclass(frozen=True)
class ThresholdParams:
    window: int = 15
    offset: float = 7.0


@dataclass(frozen=True)
class QuadParams:
    min_area: float = 400.0
    polygon_tolerance: float = 0.02  # fraction of contour perimeter
    min_contour_len: int = 16


@dataclass(frozen=True)
class QuadCandidate:
    corners: np.ndarray  # (4, 2) float64, (x, y)
    area: float = field(default=0.0)


_LUMA = np.array([0.299, 0.587, 0.114])


def to_grayscale(frame: Frame) -> GrayImage:
    """Rec.601 luma, rounded half away from zero and clamped to [0, 255]."""
    lum = frame.pixels.astype(np.float64) @ _LUMA
    vals = np.clip(np.floor(lum + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(vals)


def binarize(gray: GrayImage, params: ThresholdParams = ThresholdParams()) -> BinaryImage:
    """Mark pixels darker than their clamped window mean minus an offset."""
    if params.window < 3 or params.window % 2 == 0:
        raise InvalidParameterError("window must be odd and >= 3")
    if params.offset < 0:
        raise InvalidParameterError("offset must be >= 0")
    if params.window > gray.width and params.window > gray.height:
        raise InvalidParameterError("window larger than both image dimensions")
    out = np.empty((gray.height, gray.width), dtype=bool)
    get_backend().binarize_bits(gray.values, params.window, float(params.offset), out)
    return BinaryImage(out)


def _signed_area(pts: np.ndarray) -> float:
    x = pts[:, 0]
    y = pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _simplify_closed(pts: np.ndarray, tol: float, max_vertices: int = 8):
    """Iterative end-point fit on a closed contour; returns vertex indices."""
    n = len(pts)
    d0 = np.linalg.norm(pts - pts[0], axis=1)
    ia = int(np.argmax(d0))
    da = np.linalg.norm(pts - pts[ia], axis=1)
    ib = int(np.argmax(da))
    if ia == ib:
        return [ia]
    verts = {ia, ib}
    stack = [(ia, ib), (ib, ia)]
    while stack:
        i, j = stack.pop()
        if i < j:
            idx = np.arange(i + 1, j)
        else:
            idx = np.concatenate([np.arange(i + 1, n), np.arange(0, j)])
        if len(idx) == 0:
            continue
        seg = pts[idx]
        a = pts[i]
        b = pts[j]
        ab = b - a
        nrm = np.hypot(ab[0], ab[1])
        if nrm < 1e-12:
            dist = np.linalg.norm(seg - a, axis=1)
        else:
            dist = np.abs(ab[0] * (seg[:, 1] - a[1]) - ab[1] * (seg[:, 0] - a[0])) / nrm
        k = int(np.argmax(dist))
        if dist[k] > tol:
            m = int(idx[k])
            verts.add(m)
            if len(verts) > max_vertices:
                return sorted(verts)
            stack.append((i, m))
            stack.append((m, j))
    return sorted(verts)


def _anchor_order(corners: np.ndarray) -> np.ndarray:
    """Rotate the cyclic corner list so it starts nearest the image origin."""
    d = corners[:, 0] ** 2 + corners[:, 1] ** 2
    k = int(np.lexsort((corners[:, 0], corners[:, 1], d))[0])
    return np.roll(corners, -k, axis=0)


def _is_convex_positive(corners: np.ndarray) -> bool:
    c = np.roll(corners, -1, axis=0) - corners
    cross = c[:, 0] * np.roll(c[:, 1], -1) - c[:, 1] * np.roll(c[:, 0], -1)
    return bool(np.all(cross > 0))


def _fit_line_tls(pts: np.ndarray):
    """Total-least-squares line: returns (point, unit direction)."""
    mean = pts.mean(axis=0)
    centered = pts - mean
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    direction = vecs[:, -1]
    return mean, direction / np.linalg.norm(direction)


def _intersect_lines(p1, d1, p2, d2):
    a = np.array([[d1[0], -d2[0]], [d1[1], -d2[1]]])
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(det) < 1e-12:
        return None
    rhs = p2 - p1
    t = (rhs[0] * a[1, 1] - rhs[1] * a[0, 1]) / det
    return p1 + t * d1


def _refine_from_contour(pts: np.ndarray, vidx: list[int]) -> np.ndarray | None:
    """Fit a line to each edge's contour run (0.5 px outward) and intersect."""
    n = len(pts)
    centroid = pts[vidx].mean(axis=0)
    lines = []
    for k in range(4):
        i = vidx[k]
        j = vidx[(k + 1) % 4]
        if i < j:
            idx = np.arange(i, j + 1)
        else:
            idx = np.concatenate([np.arange(i, n), np.arange(0, j + 1)])
        m = len(idx)
        trim = max(1, m // 8)
        if m - 2 * trim >= 4:
            idx = idx[trim:m - trim]
        seg = pts[idx]
        p, d = _fit_line_tls(seg)
        normal = np.array([-d[1], d[0]])
        if np.dot(normal, p - centroid) < 0:
            normal = -normal
        lines.append((p + 0.5 * normal, d))
    corners = []
    for k in range(4):
        p_prev, d_prev = lines[(k - 1) % 4]
        p_cur, d_cur = lines[k]
        pt = _intersect_lines(p_prev, d_prev, p_cur, d_cur)
        if pt is None:
            return None
        corners.append(pt)
    return np.array(corners)


def find_quads(bin_img: BinaryImage, params: QuadParams = QuadParams()) -> list[QuadCandidate]:
    """Extract convex quadrilateral outlines of connected dark regions.

    Traces outer borders of dark components, simplifies each closed contour
    by iterative end-point fitting, and keeps contours that reduce to exactly
    4 convex vertices. Components touching the image border and quads below
    the area floor are discarded. Output is sorted by (min y, min x).
    """
    bits = bin_img.bits
    h, w = bits.shape
    backend = get_backend()

    starts = bits.copy()
    starts[:, 1:] &= ~bits[:, :-1]
    start_pts = np.argwhere(starts)
    if len(start_pts) == 0:
        return []

    on_contour = np.zeros_like(bits)
    buf = np.empty((2 * h * w + 8, 2), dtype=np.int64)
    bs = np.empty(2 * h * w + 8, dtype=np.int64)
    visited = np.full((h, w, 8), -1, dtype=np.int64)
    quads = []
    for y0, x0 in start_pts:
        if on_contour[y0, x0]:
            continue
        n = backend.trace_contour(bits, int(y0), int(x0), buf, bs, visited)
        contour = buf[:n]
        on_contour[contour[:, 0], contour[:, 1]] = True
        if n < params.min_contour_len:
            continue
        if (contour[:, 0].min() == 0 or contour[:, 1].min() == 0
                or contour[:, 0].max() == h - 1 or contour[:, 1].max() == w - 1):
            continue
        pts = contour[:, ::-1].astype(np.float64) + 0.5  # (x, y) pixel centers
        if _signed_area(pts) <= 0:
            continue  # hole border or degenerate
        perim = float(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1).sum())
        vidx = _simplify_closed(pts, params.polygon_tolerance * perim)
        if len(vidx) != 4:
            continue
        if not _is_convex_positive(pts[vidx]):
            continue
        refined = _refine_from_contour(pts, vidx)
        if refined is None or not _is_convex_positive(refined):
            continue
        area = _signed_area(refined)
        if area < params.min_area:
            continue
        quads.append(QuadCandidate(corners=_anchor_order(refined), area=float(area)))

    quads.sort(key=lambda q: (float(q.corners[:, 1].min()), float(q.corners[:, 0].min())))
    return quads


def refine_corners_gray(gray: GrayImage, corners: np.ndarray,
                        scan_range: float = 3.0, scan_step: float = 0.5,
                        min_contrast: float = 20.0) -> np.ndarray:
    """Sub-pixel corner refinement against the grayscale edge profile.

    For each quad edge, scans intensity along outward normals at points
    spread over the middle of the edge, locates the mid-intensity crossing
    by linear interpolation, fits a total-least-squares line through the
    crossings, and intersects adjacent lines. Falls back to the input
    corners when an edge lacks contrast or the fit degenerates.
    """
    vals = gray.values.astype(np.float64)
    h, w = vals.shape

    def sample(x, y):
        gx = np.clip(x - 0.5, 0.0, w - 1.0)
        gy = np.clip(y - 0.5, 0.0, h - 1.0)
        x0 = np.floor(gx).astype(int)
        y0 = np.floor(gy).astype(int)
        x1 = np.minimum(x0 + 1, w - 1)
        y1 = np.minimum(y0 + 1, h - 1)
        ax = gx - x0
        ay = gy - y0
        return ((1 - ay) * ((1 - ax) * vals[y0, x0] + ax * vals[y0, x1])
                + ay * ((1 - ax) * vals[y1, x0] + ax * vals[y1, x1]))

    centroid = corners.mean(axis=0)
    ss = np.arange(-scan_range, scan_range + scan_step / 2, scan_step)
    lines = []
    for k in range(4):
        a = corners[k]
        b = corners[(k + 1) % 4]
        length = float(np.linalg.norm(b - a))
        m = int(np.clip(length / 3.0, 8, 40))
        ts = np.linspace(0.15, 0.85, m)
        base = a[None, :] + ts[:, None] * (b - a)[None, :]
        d = (b - a) / max(length, 1e-12)
        normal = np.array([-d[1], d[0]])
        if np.dot(normal, base.mean(axis=0) - centroid) < 0:
            normal = -normal
        pxy = base[:, None, :] + ss[None, :, None] * normal[None, None, :]
        prof = sample(pxy[..., 0], pxy[..., 1])  # (m, len(ss))
        inside = prof[:, :2].mean(axis=1)
        outside = prof[:, -2:].mean(axis=1)
        good = np.abs(outside - inside) >= min_contrast
        crossings = []
        for i in np.nonzero(good)[0]:
            mid = 0.5 * (inside[i] + outside[i])
            f = prof[i] - mid
            sgn0 = f[0] < 0
            for j in range(len(ss) - 1):
                if (f[j] < 0) != (f[j + 1] < 0) and (f[j] < 0) == sgn0:
                    denom = f[j + 1] - f[j]
                    if abs(denom) < 1e-12:
                        break
                    s_star = ss[j] - f[j] * (scan_step / denom)
                    crossings.append(base[i] + s_star * normal)
                    break
        if len(crossings) < 5:
            return corners
        p, dline = _fit_line_tls(np.array(crossings))
        lines.append((p, dline))
    refined = []
    for k in range(4):
        p_prev, d_prev = lines[(k - 1) % 4]
        p_cur, d_cur = lines[k]
        pt = _intersect_lines(p_prev, d_prev, p_cur, d_cur)
        if pt is None:
            return corners
        refined.append(pt)
    refined = np.array(refined)
    if np.any(np.linalg.norm(refined - corners, axis=1) > 4.0):
        return corners
    return refined
