"""Gradient-field landscape grids: cell heights, efficient cells, counts.

The decision space is discretized into cells; per cell center the MOG is
computed and a descent is simulated by hopping to the 8-neighbor whose
direction is angle-closest to the negative MOG. The summed hop lengths
along each path are the cell's height; cells where the path terminates
(or tightly cycles across an efficient set) are flagged locally efficient
and ranked among themselves by domination counts. The heavy path-following
and counting steps run on the kernel backend.

Efficiency of a cell is judged on the *unit-normalized* MOG length, which
is dimensionless: it only measures how opposed the two gradients are, so
rescaling an objective cannot change which cells are efficient, matching
the scale invariance of the underlying dominance structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .mog import DEGENERACY_TOL, MOG_VARIANTS
from .problems import BoxBounds, Mop

# Neighbor enumeration order is part of the deterministic contract.
_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class GridSpec:
    bounds: BoxBounds
    resolution: tuple[int, int]

    def __post_init__(self):
        if self.bounds.dimension != 2:
            raise DimensionMismatch("landscape grids are two-dimensional")
        n1, n2 = self.resolution
        if n1 < 2 or n2 < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        n1, n2 = self.resolution
        lo, hi = self.bounds.lower, self.bounds.upper
        xs = lo[0] + (np.arange(n1) + 0.5) * (hi[0] - lo[0]) / n1
        ys = lo[1] + (np.arange(n2) + 0.5) * (hi[1] - lo[1]) / n2
        return xs, ys

    def cell_size(self) -> tuple[float, float]:
        n1, n2 = self.resolution
        span = self.bounds.upper - self.bounds.lower
        return float(span[0] / n1), float(span[1] / n2)


@dataclass
class GridCellRecord:
    ix: int
    iy: int
    x: np.ndarray
    f: np.ndarray
    mog: np.ndarray
    height: float
    is_locally_efficient: bool
    cycle_artifact: bool
    domination_count: int   # -1 outside the efficient cells
    log_domination: float   # nan outside the efficient cells


class LandscapeResult:
    """Column-wise grid data; flat index is ix * n2 + iy."""

    def __init__(self, grid, x1, x2, F, mog_vec, nfn, height, next_idx, step,
                 is_le, cycle_artifact, dom_count, log_dom, finalized):
        self.grid = grid
        self.x1 = x1
        self.x2 = x2
        self.F = F
        self.mog = mog_vec
        self.normalized_mog_norm = nfn
        self.height = height
        self.next_idx = next_idx
        self.step = step
        self.is_le = is_le
        self.cycle_artifact = cycle_artifact
        self.dom_count = dom_count
        self.log_dom = log_dom
        self.finalized = finalized

    @property
    def n_cells(self) -> int:
        return self.x1.size

    def records(self) -> Iterator[GridCellRecord]:
        n1, n2 = self.grid.resolution
        for k in range(self.n_cells):
            yield GridCellRecord(
                ix=k // n2, iy=k % n2,
                x=np.array([self.x1[k], self.x2[k]]),
                f=self.F[k].copy(),
                mog=self.mog[k].copy(),
                height=float(self.height[k]),
                is_locally_efficient=bool(self.is_le[k]),
                cycle_artifact=bool(self.cycle_artifact[k]),
                domination_count=int(self.dom_count[k]),
                log_domination=float(self.log_dom[k]),
            )

    def csv_rows(self):
        n1, n2 = self.grid.resolution
        for k in range(self.n_cells):
            yield (k // n2, k % n2, self.x1[k], self.x2[k],
                   self.F[k, 0], self.F[k, 1], self.mog[k, 0], self.mog[k, 1],
                   self.height[k], int(self.is_le[k]),
                   int(self.dom_count[k]), self.log_dom[k])


def compute_landscape(
    mop: Mop,
    grid: GridSpec,
    mog_variant: str = "gm",
    eps: float = 1e-4,
    cycle_le_tol: float = 0.5,
) -> LandscapeResult:
    """Simulate per-cell MOG descent over the grid and classify cells.

    A cell terminates the simulated descent when its unit-normalized MOG
    is shorter than `eps` (or a single-objective gradient vanishes); such
    cells are locally efficient with height 0. Paths that close a cycle
    straddle an efficient set when the gradients of the cycle cells are
    mostly opposed: those with normalized MOG below `cycle_le_tol` are
    flagged efficient too, anything else is a cycle artifact.
    """
    if mop.dimension != 2:
        raise DimensionMismatch("landscape grids need a 2-dimensional problem")
    variant = MOG_VARIANTS[mog_variant] if isinstance(mog_variant, str) else mog_variant
    n1, n2 = grid.resolution
    n = n1 * n2
    xs, ys = grid.cell_centers()
    dx, dy = grid.cell_size()

    x1 = np.repeat(xs, n2)
    x2 = np.tile(ys, n1)
    F = np.empty((n, 2))
    mog_vec = np.empty((n, 2))
    nfn = np.empty(n)
    for k in range(n):
        p = np.array([x1[k], x2[k]])
        F[k] = mop.evaluate(p)
        g1, g2 = mop.gradients(p)
        res = variant(g1, g2)
        mog_vec[k] = res.direction
        na, nb = res.so_gradient_norms
        if na < DEGENERACY_TOL or nb < DEGENERACY_TOL:
            nfn[k] = 0.0
        else:
            nfn[k] = float(np.linalg.norm(0.5 * (g1 / na + g2 / nb)))

    terminal = nfn < eps
    terminal |= np.hypot(mog_vec[:, 0], mog_vec[:, 1]) == 0.0

    # angle-closest neighbor to the negative MOG, physical units
    scores = np.full((len(_OFFSETS), n), -np.inf)
    steps = np.empty(len(_OFFSETS))
    ix = np.arange(n) // n2
    iy = np.arange(n) % n2
    for o, (di, dj) in enumerate(_OFFSETS):
        ux, uy = di * dx, dj * dy
        ulen = float(np.hypot(ux, uy))
        steps[o] = ulen
        valid = (ix + di >= 0) & (ix + di < n1) & (iy + dj >= 0) & (iy + dj < n2)
        scores[o, valid] = (-mog_vec[valid, 0] * ux - mog_vec[valid, 1] * uy) / ulen
    choice = np.argmax(scores, axis=0)
    offs = np.array(_OFFSETS)
    next_idx = (ix + offs[choice, 0]) * n2 + (iy + offs[choice, 1])
    step = steps[choice]
    next_idx[terminal] = -1
    step[terminal] = 0.0

    height, cycle, finalized = kernels.flow_heights(next_idx, step)

    is_le = terminal | (cycle & (nfn < cycle_le_tol))
    cycle_artifact = cycle & ~is_le

    dom_count = np.full(n, -1, dtype=np.int64)
    log_dom = np.full(n, np.nan)
    le_idx = np.nonzero(is_le)[0]
    if le_idx.size:
        counts = kernels.domination_counts(F[le_idx])
        dom_count[le_idx] = counts
        log_dom[le_idx] = np.log1p(counts)

    return LandscapeResult(grid, x1, x2, F, mog_vec, nfn, height, next_idx,
                           step, is_le, cycle_artifact, dom_count, log_dom,
                           finalized)


def domination_counts(objectives: np.ndarray) -> np.ndarray:
    """Domination counts among a set of efficient-cell objective vectors."""
    return kernels.domination_counts(objectives)


def verify_height_consistency(result: LandscapeResult) -> int:
    """Number of non-efficient cells violating height = step + height(next).

    Zero on a healthy landscape; cycle artifacts are the only construction
    that can break the recurrence.
    """
    bad = 0
    for k in range(result.n_cells):
        if result.is_le[k]:
            continue
        nxt = result.next_idx[k]
        if nxt < 0:
            bad += 1
            continue
        if result.height[k] != result.step[k] + result.height[nxt]:
            bad += 1
    return bad
