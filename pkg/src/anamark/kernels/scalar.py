"""Scalar reference loops for the hot kernels.

Written in the numba-compatible subset of Python: the numba backend compiles
these functions unchanged. Expressions here define the exact floating-point
evaluation order; the vectorized numpy backend mirrors them term for term so
both backends are bit-identical.
"""

import numpy as np


def binarize_bits(gray, window, offset, out):
    """Adaptive mean threshold: out[y,x] = gray < clamped-window mean - offset.

    Window sums come from an integral image over the edge-replicated
    extension of the input; int64 accumulation keeps the sums exact, so
    the result is bit-identical to the vectorized backend.
    """
    h, w = gray.shape
    r = window // 2
    area = window * window
    ph = h + 2 * r
    pw = w + 2 * r
    ii = np.zeros((ph + 1, pw + 1), dtype=np.int64)
    for i in range(ph):
        yy = i - r
        if yy < 0:
            yy = 0
        elif yy > h - 1:
            yy = h - 1
        for j in range(pw):
            xx = j - r
            if xx < 0:
                xx = 0
            elif xx > w - 1:
                xx = w - 1
            ii[i + 1, j + 1] = (np.int64(gray[yy, xx]) + ii[i, j + 1]
                                + ii[i + 1, j] - ii[i, j])
    for y in range(h):
        for x in range(w):
            s = (ii[y + window, x + window] - ii[y, x + window]
                 - ii[y + window, x] + ii[y, x])
            mean = s / area
            out[y, x] = gray[y, x] < mean - offset


def trace_contour(bits, y0, x0, out, bs, visited):
    """Moore-neighbor border following from (y0, x0), entered from the west.

    Writes (y, x) pixel coordinates into ``out`` and returns the count of
    the closed boundary cycle. The walk is deterministic in the state
    (pixel, backtrack direction); ``visited`` maps each state to the step
    it was first seen (-1 elsewhere, restored before returning), and the
    trace stops exactly when a state repeats. Outer borders come out with
    positive shoelace area in (x, y) image coordinates; hole borders come
    out negative. The start pixel must be foreground with a background (or
    off-image) pixel to its west.
    """
    h, w = bits.shape
    # clockwise Moore ring: E, SE, S, SW, W, NW, N, NE
    dxs = np.array([1, 1, 0, -1, -1, -1, 0, 1], dtype=np.int64)
    dys = np.array([0, 1, 1, 1, 0, -1, -1, -1], dtype=np.int64)
    # direction index from (dy+1, dx+1) offsets
    dir_of = np.full((3, 3), -1, dtype=np.int64)
    for k in range(8):
        dir_of[dys[k] + 1, dxs[k] + 1] = k

    maxlen = out.shape[0]
    cy, cx = y0, x0
    b = 4  # backtrack points west
    n = 0
    cycle_start = 0
    while n < maxlen:
        if visited[cy, cx, b] >= 0:
            cycle_start = visited[cy, cx, b]
            break
        visited[cy, cx, b] = n
        out[n, 0] = cy
        out[n, 1] = cx
        bs[n] = b
        n += 1
        found = -1
        kprev = b
        for j in range(1, 9):
            k = (b + j) % 8
            ny = cy + dys[k]
            nx = cx + dxs[k]
            if 0 <= ny < h and 0 <= nx < w and bits[ny, nx]:
                found = k
                break
            kprev = k
        if found == -1:
            break  # isolated pixel
        qy = cy + dys[kprev]
        qx = cx + dxs[kprev]
        cy = cy + dys[found]
        cx = cx + dxs[found]
        b = dir_of[qy - cy + 1, qx - cx + 1]

    for i in range(n):
        visited[out[i, 0], out[i, 1], bs[i]] = -1
    if cycle_start > 0:
        m = n - cycle_start
        for i in range(m):
            out[i, 0] = out[cycle_start + i, 0]
            out[i, 1] = out[cycle_start + i, 1]
        return m
    return n


def fill_triangle(xs, ys, izs, uvz, nvz, tex, diffuse, ambient, light,
                  color, depth, cov):
    """Rasterize one camera-facing triangle into the target buffers.

    xs, ys: screen coordinates of the 3 vertices (pixel units, continuous);
    izs: per-vertex 1/z; uvz, nvz: per-vertex uv/z and normal/z for
    perspective-correct interpolation. Top-left fill rule; strict < depth
    test so the earlier triangle wins ties. Caller culls back faces
    (area2 <= 0) before invoking.
    """
    h = depth.shape[0]
    w = depth.shape[1]
    x0, x1, x2 = xs[0], xs[1], xs[2]
    y0, y1, y2 = ys[0], ys[1], ys[2]
    area2 = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
    if area2 <= 0.0:
        return

    minx = min(x0, min(x1, x2))
    maxx = max(x0, max(x1, x2))
    miny = min(y0, min(y1, y2))
    maxy = max(y0, max(y1, y2))
    jlo = int(np.floor(minx - 0.5))
    jhi = int(np.ceil(maxx - 0.5))
    ilo = int(np.floor(miny - 0.5))
    ihi = int(np.ceil(maxy - 0.5))
    if jlo < 0:
        jlo = 0
    if ilo < 0:
        ilo = 0
    if jhi > w - 1:
        jhi = w - 1
    if ihi > h - 1:
        ihi = h - 1

    # top-left ownership of zero-valued edge functions
    tl0 = (y2 - y1) < 0.0 or ((y2 - y1) == 0.0 and (x2 - x1) > 0.0)
    tl1 = (y0 - y2) < 0.0 or ((y0 - y2) == 0.0 and (x0 - x2) > 0.0)
    tl2 = (y1 - y0) < 0.0 or ((y1 - y0) == 0.0 and (x1 - x0) > 0.0)

    lx, ly, lz = light[0], light[1], light[2]
    th = tex.shape[0]
    tw = tex.shape[1]

    for i in range(ilo, ihi + 1):
        py = i + 0.5
        for j in range(jlo, jhi + 1):
            px = j + 0.5
            e0 = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
            e1 = (x0 - x2) * (py - y2) - (y0 - y2) * (px - x2)
            e2 = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
            if e0 < 0.0 or e1 < 0.0 or e2 < 0.0:
                continue
            if e0 == 0.0 and not tl0:
                continue
            if e1 == 0.0 and not tl1:
                continue
            if e2 == 0.0 and not tl2:
                continue
            b0 = e0 / area2
            b1 = e1 / area2
            b2 = e2 / area2
            izp = b0 * izs[0] + b1 * izs[1] + b2 * izs[2]
            z = 1.0 / izp
            if not (z < depth[i, j]):
                continue
            u = (b0 * uvz[0, 0] + b1 * uvz[1, 0] + b2 * uvz[2, 0]) * z
            v = (b0 * uvz[0, 1] + b1 * uvz[1, 1] + b2 * uvz[2, 1]) * z
            nx = (b0 * nvz[0, 0] + b1 * nvz[1, 0] + b2 * nvz[2, 0]) * z
            ny = (b0 * nvz[0, 1] + b1 * nvz[1, 1] + b2 * nvz[2, 1]) * z
            nz = (b0 * nvz[0, 2] + b1 * nvz[1, 2] + b2 * nvz[2, 2]) * z
            nn = np.sqrt(nx * nx + ny * ny + nz * nz)
            if nn > 0.0:
                nx = nx / nn
                ny = ny / nn
                nz = nz / nn
            lamb = -(nx * lx + ny * ly + nz * lz)
            if lamb < 0.0:
                lamb = 0.0
            shade = ambient + lamb
            if shade > 1.0:
                shade = 1.0
            # bilinear texture fetch, clamp to edge
            fx = u * tw - 0.5
            fy = v * th - 0.5
            xf = np.floor(fx)
            yf = np.floor(fy)
            ax = fx - xf
            ay = fy - yf
            xi0 = int(xf)
            yi0 = int(yf)
            xi1 = xi0 + 1
            yi1 = yi0 + 1
            if xi0 < 0:
                xi0 = 0
            if yi0 < 0:
                yi0 = 0
            if xi1 < 0:
                xi1 = 0
            if yi1 < 0:
                yi1 = 0
            if xi0 > tw - 1:
                xi0 = tw - 1
            if yi0 > th - 1:
                yi0 = th - 1
            if xi1 > tw - 1:
                xi1 = tw - 1
            if yi1 > th - 1:
                yi1 = th - 1
            for c in range(3):
                t00 = tex[yi0, xi0, c]
                t10 = tex[yi0, xi1, c]
                t01 = tex[yi1, xi0, c]
                t11 = tex[yi1, xi1, c]
                texel = (1.0 - ay) * ((1.0 - ax) * t00 + ax * t10) + \
                    ay * ((1.0 - ax) * t01 + ax * t11)
                val = diffuse[c] * texel * shade
                if val < 0.0:
                    val = 0.0
                if val > 1.0:
                    val = 1.0
                color[i, j, c] = val
            depth[i, j] = z
            cov[i, j] = 1


def splat_marker(acc, cnt, hinv, grid, ox, oy, half_w, dark, light,
                 jlo, jhi, ilo, ihi):
    """Inverse-map pixels through a marker-plane homography, 2x2 supersampled.

    For each of 4 subsamples per pixel, back-project into the marker plane;
    subsamples landing inside the printed square add the sampled cell
    intensity to ``acc`` and 1 to ``cnt``. Background fill happens outside.
    """
    n = grid.shape[0]
    scale = n / (2.0 * half_w)
    offs = (-0.25, 0.25)
    for i in range(ilo, ihi + 1):
        for j in range(jlo, jhi + 1):
            a = 0.0
            c = 0.0
            for oi in range(2):
                sy = i + 0.5 + offs[oi]
                for oj in range(2):
                    sx = j + 0.5 + offs[oj]
                    dw = hinv[2, 0] * sx + hinv[2, 1] * sy + hinv[2, 2]
                    if dw == 0.0:
                        continue
                    px = (hinv[0, 0] * sx + hinv[0, 1] * sy + hinv[0, 2]) / dw
                    py = (hinv[1, 0] * sx + hinv[1, 1] * sy + hinv[1, 2]) / dw
                    gx = (px - ox + half_w) * scale
                    gy = (py - oy + half_w) * scale
                    if gx < 0.0 or gx >= n or gy < 0.0 or gy >= n:
                        continue
                    r = int(gy)
                    q = int(gx)
                    if grid[r, q]:
                        a += dark
                    else:
                        a += light
                    c += 1.0
            acc[i, j] += a
            cnt[i, j] += c
