"""Select between the numba kernels and the pure-numpy fallback.

Set ``MCSF_BACKEND=numpy`` (or ``MCSF_DISABLE_NUMBA=1``) before import to
force the fallback. ``use_backend`` switches at runtime, mostly for tests and
the backend benchmark.
"""
import contextlib
import os

try:
    import numba

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # prefer OpenMP; probing an outdated TBB first only produces noise
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _initial_backend():
    if os.environ.get("MCSF_DISABLE_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    want = os.environ.get("MCSF_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"MCSF_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


_active = _initial_backend()


def active_backend():
    return _active


def set_backend(name):
    global _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _active = name


@contextlib.contextmanager
def use_backend(name):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def kernels():
    """Module holding the hot loops for the active backend."""
    if _active == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod
