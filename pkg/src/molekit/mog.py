"""Multi-objective gradient (MOG) variants and first-order criticality.

Three common descent directions for a pair of objective gradients:

* convex-hull MOG: the shortest vector in the convex hull of g1 and g2,
* normalized MOG: mean of the unit gradients (unbiased but discontinuous
  where a single-objective gradient vanishes),
* geometric-mean MOG: the normalized MOG rescaled by sqrt(|g1|*|g2|),
  which stays continuous at single-objective optima and reduces to the
  plain gradient when both objectives agree.

All functions are pure; degenerate inputs are flagged, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

# Below this norm a single-objective gradient counts as vanished.
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class MogResult:
    direction: np.ndarray
    so_gradient_norms: tuple[float, float]
    weights: Optional[tuple[float, float]]
    degenerate: bool

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.direction))


def mog_convex_hull(g1: np.ndarray, g2: np.ndarray) -> MogResult:
    """Shortest convex combination a*g1 + (1-a)*g2, closed form for m=2."""
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    n1 = float(np.linalg.norm(g1))
    n2 = float(np.linalg.norm(g2))
    degenerate = n1 < DEGENERACY_TOL or n2 < DEGENERACY_TOL
    d = g1 - g2
    if float(g1 @ d) <= 0.0:
        alpha = 1.0
        direction = g1.copy()
    elif float(g2 @ (-d)) <= 0.0:
        alpha = 0.0
        direction = g2.copy()
    else:
        # interior optimum of |a*g1 + (1-a)*g2|^2, in (0, 1) by the branches above
        alpha = float(g2 @ (g2 - g1)) / float(d @ d)
        direction = alpha * g1 + (1.0 - alpha) * g2
    return MogResult(direction, (n1, n2), (alpha, 1.0 - alpha), degenerate)


def mog_normalized(g1: np.ndarray, g2: np.ndarray) -> MogResult:
    """Mean of the unit gradients; zero with a degeneracy flag if one vanishes."""
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    n1 = float(np.linalg.norm(g1))
    n2 = float(np.linalg.norm(g2))
    if n1 < DEGENERACY_TOL or n2 < DEGENERACY_TOL:
        return MogResult(np.zeros_like(g1), (n1, n2), None, True)
    direction = 0.5 * (g1 / n1 + g2 / n2)
    return MogResult(direction, (n1, n2), None, False)


def mog_geometric_mean(g1: np.ndarray, g2: np.ndarray) -> MogResult:
    """Normalized MOG rescaled by the geometric mean of the gradient lengths.

    Computed as 0.5*(sqrt(n2/n1)*g1 + sqrt(n1/n2)*g2) so that identical
    gradients reproduce themselves exactly. Defined as exactly zero when
    either gradient vanishes, which keeps the field continuous there.
    """
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    n1 = float(np.linalg.norm(g1))
    n2 = float(np.linalg.norm(g2))
    if n1 < DEGENERACY_TOL or n2 < DEGENERACY_TOL:
        return MogResult(np.zeros_like(g1), (n1, n2), None, True)
    direction = 0.5 * (math.sqrt(n2 / n1) * g1 + math.sqrt(n1 / n2) * g2)
    return MogResult(direction, (n1, n2), None, False)


def criticality(g1: np.ndarray, g2: np.ndarray, crit_gamma: float) -> tuple[bool, Optional[tuple[float, float]]]:
    """First-order criticality check via the geometric-mean MOG length.

    Returns (is_critical, weights); the weights are the convex-hull
    coefficients, a valid certificate of a vanishing nonnegative gradient
    combination at critical points.
    """
    gm = mog_geometric_mean(g1, g2)
    if gm.norm < crit_gamma:
        return True, mog_convex_hull(g1, g2).weights
    return False, None


MOG_VARIANTS = {
    "ch": mog_convex_hull,
    "n": mog_normalized,
    "gm": mog_geometric_mean,
}
