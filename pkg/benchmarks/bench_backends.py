"""Compare the numba and numpy kernel backends.

Times the four hot kernels on realistic inputs plus the full pipeline on
the shipped sample frame. Run:

    python3 benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import os
import sys
import time

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))


def timeit(fn, repeats):
    fn()  # warmup (jit compile on the numba side)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def bench_kernels(mod, repeats):
    rng = np.random.default_rng(0)
    out = {}

    gray = rng.integers(0, 256, (480, 640), dtype=np.uint8).astype(np.int64)
    bits_out = np.empty((480, 640), dtype=np.bool_)
    out["binarize 640x480 w15"] = timeit(
        lambda: mod.binarize_bits(gray, 15, 7.0, bits_out), repeats)

    bits = rng.random((480, 640)) < 0.3
    starts = bits.copy()
    starts[:, 1:] &= ~bits[:, :-1]
    pts = np.argwhere(starts)[:400]
    buf = np.empty((2 * 480 * 640 + 8, 2), dtype=np.int64)
    bs = np.empty(2 * 480 * 640 + 8, dtype=np.int64)
    visited = np.full((480, 640, 8), -1, dtype=np.int64)

    def run_trace():
        for y0, x0 in pts:
            mod.trace_contour(bits, int(y0), int(x0), buf, bs, visited)
    out["trace 400 contours"] = timeit(run_trace, repeats)

    xs = np.array([40.0, 600.0, 320.0])
    ys = np.array([60.0, 90.0, 440.0])
    zs = np.array([0.5, 0.9, 0.7])
    izs = 1.0 / zs
    uvz = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]) * izs[:, None]
    nvz = np.tile([0.0, 0.0, -1.0], (3, 1)) * izs[:, None]
    tex = rng.random((128, 128, 3))
    diffuse = np.array([0.9, 0.8, 0.7])
    light = np.array([0.0, 0.0, 1.0])

    def run_fill():
        color = np.zeros((480, 640, 3))
        depth = np.full((480, 640), np.inf)
        cov = np.zeros((480, 640), dtype=np.bool_)
        mod.fill_triangle(xs, ys, izs, uvz, nvz, tex, diffuse, 0.2, light,
                          color, depth, cov)
    out["fill large triangle"] = timeit(run_fill, repeats)

    hmat = np.array([[900.0, 10.0, 150.0], [5.0, 880.0, 130.0], [0.02, 0.01, 1.0]])
    hinv = np.linalg.inv(hmat)
    grid = rng.integers(0, 2, (8, 8)).astype(np.bool_)

    def run_splat():
        acc = np.zeros((480, 640))
        cnt = np.zeros((480, 640))
        mod.splat_marker(acc, cnt, hinv, grid, 0.0, 0.0, 0.04, 20.0, 235.0,
                         0, 639, 0, 479)
    out["splat 640x480 marker"] = timeit(run_splat, repeats)
    return out


def bench_pipeline(repeats):
    from anamark import imageio
    from anamark.pipeline import process_frame
    from anamark.scene import load_scene
    bundle = load_scene(os.path.join(ROOT, "assets", "scene.json"))
    frame = imageio.load_frame(os.path.join(ROOT, "assets", "sample_frame.png"))
    return timeit(lambda: process_frame(frame, bundle.scene, bundle.dictionary,
                                        bundle.cam), repeats)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    from anamark.kernels import numpy_impl
    backends = [("numpy", numpy_impl)]
    try:
        from anamark.kernels import numba_impl
        backends.append(("numba", numba_impl))
    except ImportError:
        print("numba not importable; benchmarking numpy only")

    results = {}
    for name, mod in backends:
        results[name] = bench_kernels(mod, args.repeats)

    names = list(results["numpy"].keys())
    cols = [n for n, _ in backends]
    print(f"{'kernel':28s}" + "".join(f"{c:>12s}" for c in cols)
          + ("       ratio" if len(cols) == 2 else ""))
    for key in names:
        row = f"{key:28s}"
        for c in cols:
            row += f"{results[c][key]:10.2f}ms"
        if len(cols) == 2 and results[cols[1]][key] > 0:
            row += f"{results[cols[0]][key] / results[cols[1]][key]:11.1f}x"
        print(row)

    print()
    for be, _ in backends:
        os.environ["ANAMARK_BACKEND"] = be
        import anamark.kernels as k
        k._BACKEND = None  # force re-selection
        ms = bench_pipeline(args.repeats)
        print(f"full pipeline ({be:5s}): {ms:8.1f} ms/frame")


if __name__ == "__main__":
    main()
