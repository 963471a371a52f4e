"""Hot-loop kernels with two interchangeable backends.

The numba backend JIT-compiles scalar loops; the numpy backend uses
vectorized equivalents. Both produce bit-identical results. Selection:

    ANAMARK_BACKEND=numba   force numba (raises if unavailable)
    ANAMARK_BACKEND=numpy   force pure numpy
    unset                   numba if importable, else numpy
"""

import os

_BACKEND = None
_BACKEND_NAME = None


def backend_name() -> str:
    get_backend()
    return _BACKEND_NAME


def get_backend():
    """Return the kernel module selected by the ANAMARK_BACKEND env var."""
    global _BACKEND, _BACKEND_NAME
    if _BACKEND is not None:
        return _BACKEND
    choice = os.environ.get("ANAMARK_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"unknown ANAMARK_BACKEND {choice!r}")
    if choice in ("", "numba"):
        try:
            from . import numba_impl as mod
        except ImportError:
            if choice == "numba":
                raise
            mod = None
        if mod is not None:
            _BACKEND, _BACKEND_NAME = mod, "numba"
            return mod
    from . import numpy_impl as mod
    _BACKEND, _BACKEND_NAME = mod, "numpy"
    return mod
