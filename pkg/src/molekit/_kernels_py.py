"""Pure Python twins of the compiled kernels.

Each function must produce bit-identical output to its Cython counterpart
in ``_kernels.pyx``: same traversal order, same accumulation order. Keep
the two files in sync when touching either.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def hv2d_sweep(f1: np.ndarray, f2: np.ndarray, ref1: float, ref2: float) -> float:
    """Dominated-area sweep over points pre-sorted by (f1 asc, f2 asc).

    Points must already be filtered to the region weakly dominating the
    reference point.
    """
    area = 0.0
    prev_f2 = ref2
    for i in range(f1.shape[0]):
        y = f2[i]
        if y < prev_f2:
            area += (ref1 - f1[i]) * (prev_f2 - y)
            prev_f2 = y
    return area


def nondominated_mask_sorted(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Nondominance mask for points pre-sorted by (f1 asc, f2 asc).

    A point is dominated iff some other point is componentwise <= and not
    equal to it; exact duplicates are all kept.
    """
    n = f1.shape[0]
    mask = np.ones(n, dtype=np.uint8)
    min_f2_before = np.inf  # over points with strictly smaller f1
    i = 0
    while i < n:
        j = i
        head_f2 = f2[i]
        while j < n and f1[j] == f1[i]:
            if f2[j] > head_f2 or min_f2_before <= f2[j]:
                mask[j] = 0
            j += 1
        if head_f2 < min_f2_before:
            min_f2_before = head_f2
        i = j
    return mask


def domination_counts(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Per-point count of other points dominating it (<= both, not equal)."""
    n = f1.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    chunk = 512
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        a1 = f1[start:stop, None]
        a2 = f2[start:stop, None]
        le = (f1[None, :] <= a1) & (f2[None, :] <= a2)
        eq = (f1[None, :] == a1) & (f2[None, :] == a2)
        counts[start:stop] = (le & ~eq).sum(axis=1)
    return counts


def flow_heights(next_idx: np.ndarray, step: np.ndarray):
    """Accumulated path lengths through a functional graph of grid cells.

    ``next_idx[i]`` is the cell index the simulated descent moves to from
    cell ``i`` (-1 for terminal cells, whose ``step`` must be 0). A path
    revisiting a cell of itself forms a cycle: its cells get height 0 and
    are reported in the cycle mask. Every cell is finalized exactly once.

    Returns (heights, cycle_mask, finalized_count).
    """
    n = next_idx.shape[0]
    heights = np.zeros(n, dtype=np.float64)
    cycle = np.zeros(n, dtype=np.uint8)
    state = np.zeros(n, dtype=np.uint8)  # 0 new, 1 on current path, 2 done
    finalized = 0
    path = []
    for c in range(n):
        if state[c] == 2:
            continue
        path.clear()
        cur = c
        base = 0.0
        while True:
            if cur == -1:
                base = 0.0
                break
            if state[cur] == 2:
                base = heights[cur]
                break
            if state[cur] == 1:
                # cycle: cells from the first occurrence of `cur` onwards
                k = len(path) - 1
                while path[k] != cur:
                    k -= 1
                for idx in path[k:]:
                    heights[idx] = 0.0
                    cycle[idx] = 1
                    state[idx] = 2
                    finalized += 1
                del path[k:]
                base = 0.0
                break
            state[cur] = 1
            path.append(cur)
            cur = next_idx[cur]
        for idx in reversed(path):
            base = step[idx] + base
            heights[idx] = base
            state[idx] = 2
            finalized += 1
    return heights, cycle, finalized
