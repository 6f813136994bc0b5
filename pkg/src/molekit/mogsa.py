"""MOGSA baseline: fixed-step gradient sliding between efficient sets.

A deliberately simple prototype kept for comparison: descend along the
unit-normalized MOG with a constant step scale, then slide along the
discovered set by following each single-objective gradient with a fixed
step, handing over to a superposed basin when the two gradients stop
opposing each other. Terminates when a presumed strictly efficient set is
reached - which some landscapes do not possess, so runs are capped.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import BudgetExhausted
from .mog import DEGENERACY_TOL, mog_normalized
from .problems import BoxBounds, Mop, diag


@dataclass(frozen=True)
class MogsaConfig:
    descent_step: Optional[float] = None   # diag/100 when unset
    explore_step: Optional[float] = None   # diag/200 when unset
    mog_eps: float = 1e-4                  # descent stops below this MOG length
    max_descent_iter: int = 10000
    max_explore_iter: int = 10000
    max_outer_iter: int = 100              # descent/explore hand-off rounds

    def resolved(self, mop: Mop, fallback_box: Optional[BoxBounds] = None) -> "MogsaConfig":
        if self.descent_step is not None and self.explore_step is not None:
            return self
        d = diag(mop.bounds, fallback_box)
        return replace(
            self,
            descent_step=self.descent_step if self.descent_step is not None else d / 100.0,
            explore_step=self.explore_step if self.explore_step is not None else d / 200.0,
        )


@dataclass
class VisitedPoint:
    x: np.ndarray
    f: np.ndarray
    phase: str  # "start" | "descent" | "explore"


@dataclass
class MogsaArchive:
    visited: list[VisitedPoint] = field(default_factory=list)
    termination: str = "running"
    evals_used: int = 0

    def append(self, x, f, phase):
        self.visited.append(VisitedPoint(np.asarray(x, dtype=float).copy(),
                                         np.asarray(f, dtype=float).copy(), phase))

    def positions(self, phase: Optional[str] = None) -> np.ndarray:
        pts = [v.x for v in self.visited if phase is None or v.phase == phase]
        return np.array(pts) if pts else np.zeros((0, 0))

    def csv_rows(self):
        """Same schema as the descent trace: (t, x..., f1, f2, alpha, mog_norm)."""
        prev = None
        for t, v in enumerate(self.visited):
            step = 0.0 if prev is None else float(np.linalg.norm(v.x - prev))
            yield (t, *v.x.tolist(), float(v.f[0]), float(v.f[1]), step, float("nan"))
            prev = v.x


def mogsa_descent(x: np.ndarray, mop: Mop, config: MogsaConfig,
                  archive: MogsaArchive) -> tuple[np.ndarray, bool]:
    """Fixed-scale descent along the normalized MOG.

    Returns (end point, capped) where capped means the iteration limit was
    hit before the MOG length dropped below mog_eps.
    """
    clip = (lambda p: mop.bounds.clip(p)) if mop.bounds is not None else (lambda p: p)
    x = np.asarray(x, dtype=float).copy()
    for _ in range(config.max_descent_iter):
        g1, g2 = mop.gradients(x)
        mog = mog_normalized(g1, g2)
        if mog.degenerate or mog.norm < config.mog_eps:
            return x, False
        nxt = clip(x - config.descent_step * mog.direction)
        if np.array_equal(nxt, x):
            return x, False
        x = nxt
        archive.append(x, mop.evaluate(x), "descent")
    return x, True


def mogsa_explore(x_star: np.ndarray, mop: Mop, config: MogsaConfig,
                  archive: MogsaArchive) -> Optional[np.ndarray]:
    """Slide along the set by following each objective's gradient in turn.

    Returns a point in a superposed attraction basin (the two gradients
    formed an angle below 90 degrees), or None when both directions ended
    at presumed single-objective optima - a strictly efficient set.
    """
    clip = (lambda p: mop.bounds.clip(p)) if mop.bounds is not None else (lambda p: p)
    for obj in (0, 1):
        w = np.asarray(x_star, dtype=float).copy()
        g_prev = mop.gradients(w)[obj]
        for _ in range(config.max_explore_iter):
            n = float(np.linalg.norm(g_prev))
            if n < DEGENERACY_TOL:
                break  # tracked gradient vanished: single-objective optimum
            w = clip(w - config.explore_step * g_prev / n)
            archive.append(w, mop.evaluate(w), "explore")
            g1, g2 = mop.gradients(w)
            gt = (g1, g2)[obj]
            if (float(np.linalg.norm(g1)) < DEGENERACY_TOL
                    or float(np.linalg.norm(g2)) < DEGENERACY_TOL):
                break  # a gradient vanished: single-objective optimum
            if float(gt @ g_prev) < 0.0:
                break  # tracked gradient turned by over 90 degrees: overshot
            if float(g1 @ g2) > 0.0:
                return w  # gradients agree: superposed basin
            g_prev = gt
    return None


def run_mogsa(x: np.ndarray, mop: Mop, config: MogsaConfig) -> MogsaArchive:
    """Alternate descent and set exploration until a strict set is presumed.

    The archive records every visited point with its phase tag. The
    termination field reports how the run ended: "strict_set_found",
    "iteration_cap" (the hand-off loop never settled) or
    "budget_exhausted".
    """
    cfg = config.resolved(mop)
    archive = MogsaArchive()
    evals0 = mop.counter
    x_next = np.asarray(x, dtype=float).copy()
    try:
        archive.append(x_next, mop.evaluate(x_next), "start")
        archive.termination = "iteration_cap"
        for _ in range(cfg.max_outer_iter):
            x_star, _capped = mogsa_descent(x_next, mop, cfg, archive)
            nxt = mogsa_explore(x_star, mop, cfg, archive)
            if nxt is None:
                archive.termination = "strict_set_found"
                break
            x_next = nxt
    except BudgetExhausted:
        archive.termination = "budget_exhausted"
    archive.evals_used = mop.counter - evals0
    return archive
