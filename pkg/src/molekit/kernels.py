"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The hot loops of the toolkit (hypervolume sweeps, nondominance filtering,
domination counting and grid descent path-following) live in a small
Cython extension with a pure Python twin. The active backend is picked at
import time; ``MOLEKIT_KERNELS=python`` or ``=compiled`` forces one side.
Both backends are kept bit-identical, so the choice never changes results.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_FORCED = os.environ.get("MOLEKIT_KERNELS", "").strip().lower()

_compiled = None
if _FORCED != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

if _FORCED == "compiled" and _compiled is None:
    raise ImportError("MOLEKIT_KERNELS=compiled but the extension is not built")

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "compiled" if _compiled is not None else "python"


def get_backend(name: str):
    """Return a specific backend module ('python' or 'compiled') for benchmarks."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> tuple[str, ...]:
    return ("python", "compiled") if _compiled is not None else ("python",)


# -- high level wrappers (shared pre/post-processing) -------------------------


def hypervolume_2d(points: np.ndarray, reference: np.ndarray, backend=None) -> float:
    """Area dominated by `points` up to `reference` (minimization).

    Points not weakly dominating the reference contribute nothing.
    """
    impl = _impl if backend is None else backend
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return 0.0
    pts = pts.reshape(-1, 2)
    ref1, ref2 = float(reference[0]), float(reference[1])
    keep = (pts[:, 0] <= ref1) & (pts[:, 1] <= ref2)
    pts = pts[keep]
    if pts.shape[0] == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    f1 = np.ascontiguousarray(pts[order, 0])
    f2 = np.ascontiguousarray(pts[order, 1])
    return float(impl.hv2d_sweep(f1, f2, ref1, ref2))


def nondominated_mask(points: np.ndarray, backend=None) -> np.ndarray:
    """Boolean mask of points with no dominating point in the input."""
    impl = _impl if backend is None else backend
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = pts.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    f1 = np.ascontiguousarray(pts[order, 0])
    f2 = np.ascontiguousarray(pts[order, 1])
    mask_sorted = np.asarray(impl.nondominated_mask_sorted(f1, f2))
    mask = np.zeros(n, dtype=bool)
    mask[order] = mask_sorted.astype(bool)
    return mask


def domination_counts(points: np.ndarray, backend=None) -> np.ndarray:
    """For each point, how many other points dominate it."""
    impl = _impl if backend is None else backend
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    f1 = np.ascontiguousarray(pts[:, 0])
    f2 = np.ascontiguousarray(pts[:, 1])
    return np.asarray(impl.domination_counts(f1, f2), dtype=np.int64)


def flow_heights(next_idx: np.ndarray, step: np.ndarray, backend=None):
    """Path-length accumulation over the grid descent graph."""
    impl = _impl if backend is None else backend
    nxt = np.ascontiguousarray(next_idx, dtype=np.int64)
    stp = np.ascontiguousarray(step, dtype=np.float64)
    heights, cycle, finalized = impl.flow_heights(nxt, stp)
    return np.asarray(heights), np.asarray(cycle, dtype=bool), int(finalized)
