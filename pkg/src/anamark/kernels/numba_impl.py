"""Numba backend: JIT-compiled versions of the scalar kernels."""

from numba import njit

from . import scalar

binarize_bits = njit(cache=True)(scalar.binarize_bits)
trace_contour = njit(cache=True)(scalar.trace_contour)
fill_triangle = njit(cache=True)(scalar.fill_triangle)
splat_marker = njit(cache=True)(scalar.splat_marker)
