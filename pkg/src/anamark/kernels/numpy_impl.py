"""Pure-numpy backend.

Vectorized equivalents of the scalar kernels. Every floating-point
expression mirrors kernels/scalar.py term for term so results are
bit-identical to the numba backend.
"""

import numpy as np

from .scalar import trace_contour  # noqa: F401  (sequential; reused as-is)


def binarize_bits(gray, window, offset, out):
    """Adaptive mean threshold via an integral image over an edge-padded copy.

    Integer window sums are exact, so the resulting means match the scalar
    clamped-neighborhood loop bit for bit.
    """
    h, w = gray.shape
    r = window // 2
    area = window * window
    pad = np.pad(gray.astype(np.int64), r, mode="edge")
    ii = np.zeros((pad.shape[0] + 1, pad.shape[1] + 1), dtype=np.int64)
    np.cumsum(pad, axis=0, out=ii[1:, 1:])
    np.cumsum(ii[1:, 1:], axis=1, out=ii[1:, 1:])
    s = (ii[window:, window:] - ii[:-window, window:]
         - ii[window:, :-window] + ii[:-window, :-window])
    mean = s / area
    out[:] = gray < mean - offset


def fill_triangle(xs, ys, izs, uvz, nvz, tex, diffuse, ambient, light,
                  color, depth, cov):
    h, w = depth.shape
    x0, x1, x2 = xs[0], xs[1], xs[2]
    y0, y1, y2 = ys[0], ys[1], ys[2]
    area2 = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
    if area2 <= 0.0:
        return

    minx = min(x0, min(x1, x2))
    maxx = max(x0, max(x1, x2))
    miny = min(y0, min(y1, y2))
    maxy = max(y0, max(y1, y2))
    jlo = max(int(np.floor(minx - 0.5)), 0)
    jhi = min(int(np.ceil(maxx - 0.5)), w - 1)
    ilo = max(int(np.floor(miny - 0.5)), 0)
    ihi = min(int(np.ceil(maxy - 0.5)), h - 1)
    if jhi < jlo or ihi < ilo:
        return

    jj, ii = np.meshgrid(np.arange(jlo, jhi + 1), np.arange(ilo, ihi + 1))
    px = jj + 0.5
    py = ii + 0.5
    e0 = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    e1 = (x0 - x2) * (py - y2) - (y0 - y2) * (px - x2)
    e2 = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
    tl0 = (y2 - y1) < 0.0 or ((y2 - y1) == 0.0 and (x2 - x1) > 0.0)
    tl1 = (y0 - y2) < 0.0 or ((y0 - y2) == 0.0 and (x0 - x2) > 0.0)
    tl2 = (y1 - y0) < 0.0 or ((y1 - y0) == 0.0 and (x1 - x0) > 0.0)
    inside = ((e0 > 0.0) | ((e0 == 0.0) & tl0)) \
        & ((e1 > 0.0) | ((e1 == 0.0) & tl1)) \
        & ((e2 > 0.0) | ((e2 == 0.0) & tl2))
    if not inside.any():
        return

    b0 = e0 / area2
    b1 = e1 / area2
    b2 = e2 / area2
    izp = b0 * izs[0] + b1 * izs[1] + b2 * izs[2]
    sl_depth = depth[ilo:ihi + 1, jlo:jhi + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        z = 1.0 / izp
        ok = inside & (z < sl_depth)
        if not ok.any():
            return
        u = (b0 * uvz[0, 0] + b1 * uvz[1, 0] + b2 * uvz[2, 0]) * z
        v = (b0 * uvz[0, 1] + b1 * uvz[1, 1] + b2 * uvz[2, 1]) * z
        nx = (b0 * nvz[0, 0] + b1 * nvz[1, 0] + b2 * nvz[2, 0]) * z
        ny = (b0 * nvz[0, 1] + b1 * nvz[1, 1] + b2 * nvz[2, 1]) * z
        nz = (b0 * nvz[0, 2] + b1 * nvz[1, 2] + b2 * nvz[2, 2]) * z
        nn = np.sqrt(nx * nx + ny * ny + nz * nz)
        nsafe = np.where(nn > 0.0, nn, 1.0)
        nx = nx / nsafe
        ny = ny / nsafe
        nz = nz / nsafe
        lamb = np.maximum(-(nx * light[0] + ny * light[1] + nz * light[2]), 0.0)
        shade = np.minimum(ambient + lamb, 1.0)

        th = tex.shape[0]
        tw = tex.shape[1]
        fx = u * tw - 0.5
        fy = v * th - 0.5
        xf = np.floor(fx)
        yf = np.floor(fy)
        ax = fx - xf
        ay = fy - yf
        with np.errstate(invalid="ignore"):
            xi0 = np.nan_to_num(xf).astype(np.int64)
            yi0 = np.nan_to_num(yf).astype(np.int64)
        xi1 = np.clip(xi0 + 1, 0, tw - 1)
        yi1 = np.clip(yi0 + 1, 0, th - 1)
        xi0 = np.clip(xi0, 0, tw - 1)
        yi0 = np.clip(yi0, 0, th - 1)

        for c in range(3):
            t00 = tex[yi0, xi0, c]
            t10 = tex[yi0, xi1, c]
            t01 = tex[yi1, xi0, c]
            t11 = tex[yi1, xi1, c]
            texel = (1.0 - ay) * ((1.0 - ax) * t00 + ax * t10) + \
                ay * ((1.0 - ax) * t01 + ax * t11)
            val = diffuse[c] * texel * shade
            val = np.minimum(np.maximum(val, 0.0), 1.0)
            chan = color[ilo:ihi + 1, jlo:jhi + 1, c]
            chan[ok] = val[ok]
        sl_depth[ok] = z[ok]
        cov[ilo:ihi + 1, jlo:jhi + 1][ok] = 1


def splat_marker(acc, cnt, hinv, grid, ox, oy, half_w, dark, light,
                 jlo, jhi, ilo, ihi):
    n = grid.shape[0]
    scale = n / (2.0 * half_w)
    jj, ii = np.meshgrid(np.arange(jlo, jhi + 1), np.arange(ilo, ihi + 1))
    a = np.zeros(jj.shape, dtype=np.float64)
    c = np.zeros(jj.shape, dtype=np.float64)
    offs = (-0.25, 0.25)
    for oi in range(2):
        sy = ii + 0.5 + offs[oi]
        for oj in range(2):
            sx = jj + 0.5 + offs[oj]
            dw = hinv[2, 0] * sx + hinv[2, 1] * sy + hinv[2, 2]
            with np.errstate(divide="ignore", invalid="ignore"):
                px = (hinv[0, 0] * sx + hinv[0, 1] * sy + hinv[0, 2]) / dw
                py = (hinv[1, 0] * sx + hinv[1, 1] * sy + hinv[1, 2]) / dw
            gx = (px - ox + half_w) * scale
            gy = (py - oy + half_w) * scale
            valid = (dw != 0.0) & (gx >= 0.0) & (gx < n) & (gy >= 0.0) & (gy < n)
            with np.errstate(invalid="ignore"):
                q = np.clip(np.nan_to_num(gx).astype(np.int64), 0, n - 1)
                r = np.clip(np.nan_to_num(gy).astype(np.int64), 0, n - 1)
            intensity = np.where(grid[r, q], dark, light)
            a += np.where(valid, intensity, 0.0)
            c += np.where(valid, 1.0, 0.0)
    acc[ilo:ihi + 1, jlo:jhi + 1] += a
    cnt[ilo:ihi + 1, jlo:jhi + 1] += c
