"""Binary-grid fiducial patterns: dictionary model, validation, decoding.

A printed marker is an (N+2)x(N+2) cell square: an all-dark 1-cell border
around an NxN payload grid. Orientation comes solely from the payload being
rotationally asymmetric; decoding compares against all 4 rotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCandidateError, InvalidInputError
from .geometry import estimate_homography
from .imaging import GrayImage, QuadCandidate, refine_corners_gray, _signed_area, _is_convex_positive

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def rotate_grid_cw(grid: np.ndarray, times: int = 1) -> np.ndarray:
    """Rotate a pattern grid clockwise in image orientation."""
    return np.rot90(grid, k=-times)


@dataclass(frozen=True)
class MarkerPattern:
    id: int
    grid: np.ndarray  # (N, N) bool, True = dark cell
    physical_width: float = 0.08  # meters, full printed square incl. border
    center_offset: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=bool)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 4:
            raise InvalidInputError("pattern grid must be square with N >= 4")
        if self.id < 0:
            raise InvalidInputError("pattern id must be non-negative")
        if self.physical_width <= 0:
            raise InvalidInputError("physical_width must be positive")
        object.__setattr__(self, "grid", g)

    @property
    def grid_size(self) -> int:
        return self.grid.shape[0]

    def corners_object(self) -> np.ndarray:
        """Physical corner coordinates (meters, marker plane): TL, TR, BR, BL."""
        w = self.physical_width / 2.0
        ox, oy = self.center_offset
        return np.array([[-w + ox, -w + oy], [w + ox, -w + oy],
                         [w + ox, w + oy], [-w + ox, w + oy]])


@dataclass(frozen=True)
class MarkerDictionary:
    patterns: tuple[MarkerPattern, ...]
    min_hamming: int = 4

    def __post_init__(self):
        pats = tuple(self.patterns)
        if self.min_hamming < 0:
            raise InvalidInputError("min_hamming must be non-negative")
        ids = [p.id for p in pats]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("pattern ids must be unique")
        sizes = {p.grid_size for p in pats}
        if len(sizes) > 1:
            raise InvalidInputError("all patterns must share one grid size")
        object.__setattr__(self, "patterns", pats)

    @property
    def grid_size(self) -> int:
        return self.patterns[0].grid_size if self.patterns else 6

    def get(self, pattern_id: int) -> MarkerPattern | None:
        for p in self.patterns:
            if p.id == pattern_id:
                return p
        return None

    @classmethod
    def from_json(cls, text: str) -> "MarkerDictionary":
        doc = json.loads(text)
        n = int(doc.get("grid_size", 6))
        pats = []
        for entry in doc["patterns"]:
            rows = entry["rows"]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise InvalidInputError(f"pattern {entry.get('id')}: rows must be {n} strings of length {n}")
            grid = np.array([[ch == "1" for ch in row] for row in rows])
            pats.append(MarkerPattern(
                id=int(entry["id"]),
                grid=grid,
                physical_width=float(entry.get("physical_width_m", 0.08)),
                center_offset=tuple(entry.get("center_offset_m", (0.0, 0.0))),
            ))
        return cls(patterns=tuple(pats), min_hamming=int(doc.get("min_hamming", 4)))

    @classmethod
    def load(cls, path: str) -> "MarkerDictionary":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> str:
        doc = {
            "grid_size": self.grid_size,
            "min_hamming": self.min_hamming,
            "patterns": [
                {
                    "id": p.id,
                    "physical_width_m": p.physical_width,
                    "center_offset_m": list(p.center_offset),
                    "rows": ["".join("1" if c else "0" for c in row) for row in p.grid],
                }
                for p in self.patterns
            ],
        }
        return json.dumps(doc, indent=2)


@dataclass(frozen=True)
class Violation:
    kind: str  # "self_symmetry" | "uniqueness"
    ids: tuple[int, ...]
    distance: int
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0


def validate_dictionary(dictionary: MarkerDictionary) -> ValidationReport:
    """Check rotational asymmetry of each pattern and pairwise uniqueness.

    A pattern violates self-symmetry when any 90/180/270 degree rotation is
    within min_hamming of itself; two patterns violate uniqueness when any
    rotation pair is within min_hamming.
    """
    thr = dictionary.min_hamming
    out = []
    for p in dictionary.patterns:
        for r in (1, 2, 3):
            d = int(np.sum(p.grid != rotate_grid_cw(p.grid, r)))
            if d <= thr:
                out.append(Violation(
                    kind="self_symmetry", ids=(p.id,), distance=d,
                    detail=f"pattern {p.id} is within {d} of its own {90 * r} degree rotation"))
    pats = dictionary.patterns
    for i in range(len(pats)):
        for j in range(i + 1, len(pats)):
            best = None
            for r in range(4):
                d = int(np.sum(pats[i].grid != rotate_grid_cw(pats[j].grid, r)))
                if best is None or d < best:
                    best = d
            if best is not None and best <= thr:
                out.append(Violation(
                    kind="uniqueness", ids=(pats[i].id, pats[j].id), distance=best,
                    detail=f"patterns {pats[i].id} and {pats[j].id} are within {best} under rotation"))
    return ValidationReport(violations=tuple(out))


@dataclass(frozen=True)
class DetectedMarker:
    pattern_id: int
    corners: np.ndarray  # (4, 2), canonical: first corner = pattern top-left
    rotation_index: int
    confidence: float
    cell_grid: np.ndarray = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class DecodeParams:
    samples_per_cell: int = 3  # k: k*k samples averaged per cell
    min_contrast: float = 30.0
    min_border_dark_fraction: float = 0.9
    refine: bool = True


def sample_cell_grid(gray: GrayImage, corners: np.ndarray, grid_size: int,
                     k: int = 3) -> np.ndarray:
    """Mean intensity per cell of the full (payload+border) grid inside a quad."""
    full = grid_size + 2
    h = estimate_homography(UNIT_SQUARE, corners)
    frac = (np.arange(k) + 0.5) / k
    cells = np.arange(full)
    u = (cells[:, None] + frac[None, :]).reshape(-1) / full  # (full*k,)
    uu, vv = np.meshgrid(u, u)
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    img_pts = h.apply(pts)

    vals = gray.values.astype(np.float64)
    hh, ww = vals.shape
    gx = np.clip(img_pts[:, 0] - 0.5, 0.0, ww - 1.0)
    gy = np.clip(img_pts[:, 1] - 0.5, 0.0, hh - 1.0)
    x0 = np.floor(gx).astype(int)
    y0 = np.floor(gy).astype(int)
    x1 = np.minimum(x0 + 1, ww - 1)
    y1 = np.minimum(y0 + 1, hh - 1)
    ax = gx - x0
    ay = gy - y0
    sampled = ((1 - ay) * ((1 - ax) * vals[y0, x0] + ax * vals[y0, x1])
               + ay * ((1 - ax) * vals[y1, x0] + ax * vals[y1, x1]))
    sampled = sampled.reshape(full * k, full * k)
    # average k*k blocks -> per-cell means; rows index v (y), cols index u (x)
    return sampled.reshape(full, k, full, k).mean(axis=(1, 3))


def decode(gray: GrayImage, quad: QuadCandidate, dictionary: MarkerDictionary,
           params: DecodeParams = DecodeParams()) -> DetectedMarker | None:
    """Identify the marker inside a quad candidate, or return None.

    Samples the quad on the full cell grid through its rectification
    homography, thresholds payload cells midway between the dark border
    reference and the brightest cell, and matches against every dictionary
    pattern under all 4 rotations. Degenerate quads raise
    InvalidCandidateError; insufficient contrast or Hamming distance above
    min_hamming yield None.
    """
    corners = np.asarray(quad.corners, dtype=np.float64)
    if corners.shape != (4, 2):
        raise InvalidCandidateError("quad must have 4 corners")
    if _signed_area(corners) < 1.0 or not _is_convex_positive(corners):
        raise InvalidCandidateError("quad is degenerate or self-intersecting")

    if params.refine:
        refined = refine_corners_gray(gray, corners)
        if _signed_area(refined) > 1.0 and _is_convex_positive(refined):
            corners = refined

    n = dictionary.grid_size
    cell_means = sample_cell_grid(gray, corners, n, params.samples_per_cell)
    border_mask = np.ones_like(cell_means, dtype=bool)
    border_mask[1:-1, 1:-1] = False
    border_mean = float(cell_means[border_mask].mean())
    payload = cell_means[1:-1, 1:-1]
    brightest = float(payload.max())
    if brightest - border_mean < params.min_contrast:
        return None
    tau = 0.5 * (border_mean + brightest)
    dark_border_frac = float(np.mean(cell_means[border_mask] < tau))
    if dark_border_frac < params.min_border_dark_fraction:
        return None
    observed = payload < tau

    best = None
    for pat in dictionary.patterns:
        for r in range(4):
            d = int(np.sum(observed != rotate_grid_cw(pat.grid, r)))
            if best is None or d < best[0]:
                best = (d, pat, r)
    if best is None or best[0] > dictionary.min_hamming:
        return None
    dist, pat, rot = best
    return DetectedMarker(
        pattern_id=pat.id,
        corners=np.roll(corners, -rot, axis=0),
        rotation_index=rot,
        confidence=1.0 - dist / (n * n),
        cell_grid=observed,
    )


def pattern_image(pattern: MarkerPattern, cell_px: int = 24, quiet_cells: int = 1,
                  dark: int = 0, light: int = 255) -> np.ndarray:
    """Printable grayscale raster of a pattern: border ring plus quiet zone."""
    n = pattern.grid_size
    full = n + 2
    grid = np.ones((full, full), dtype=bool)  # border ring dark
    grid[1:-1, 1:-1] = pattern.grid
    img = np.where(grid, dark, light).astype(np.uint8)
    img = np.repeat(np.repeat(img, cell_px, axis=0), cell_px, axis=1)
    pad = quiet_cells * cell_px
    return np.pad(img, pad, mode="constant", constant_values=light)
