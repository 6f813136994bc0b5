"""Nonmonotone multi-objective gradient descent with Barzilai-Borwein steps.

The descent direction is the negative geometric-mean MOG. An initial
doubling line search finds a workable step scale; the main loop then uses
the positive-augmented BB step, clamped to absolute lengths in
[alpha_min, alpha_max] and safeguarded by a per-objective Armijo test
against the componentwise maximum of the last H iterates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import BudgetExhausted
from .mog import mog_geometric_mean
from .problems import BoxBounds, Mop, diag, weakly_dominates


@dataclass(frozen=True)
class DescentConfig:
    crit_gamma: float = 1e-6       # min MOG length
    alpha_min: float = 1e-6        # min absolute step length
    alpha_max: Optional[float] = None  # max absolute step length, diag/100 when unset
    lambda_descent: float = 2.0    # step scaling factor
    beta: float = 1e-4             # Armijo factor
    history: int = 100             # nonmonotone reference window
    max_iter: int = 1000

    def resolved(self, mop: Mop, fallback_box: Optional[BoxBounds] = None) -> "DescentConfig":
        """Fill the diag-dependent default for alpha_max."""
        if self.alpha_max is not None:
            return self
        return replace(self, alpha_max=diag(mop.bounds, fallback_box) / 100.0)


class DescentStop(Enum):
    CRITICAL_POINT = "critical_point"
    MIN_STEP_NO_IMPROVEMENT = "min_step_no_improvement"
    MAX_ITER = "max_iter"
    BUDGET_EXHAUSTED = "budget_exhausted"
    EARLY_ESCAPE = "early_escape"


@dataclass
class TraceEntry:
    x: np.ndarray
    f: np.ndarray
    step_len: float                      # absolute length of the step that reached x
    alpha: float                         # gradient multiplier of that step (0 for start)
    mog_norm: Optional[float]            # MOG length at x, when it was computed
    slopes: Optional[tuple[float, float]] = None  # mog . grad_i at the previous iterate
    ref: Optional[np.ndarray] = None     # nonmonotone reference used to accept x


@dataclass
class DescentResult:
    point: np.ndarray
    objectives: np.ndarray
    termination: DescentStop
    trace: list[TraceEntry]
    evals_used: int

    def trace_rows(self):
        """CSV rows (t, x..., f1, f2, alpha, mog_norm); nan for unknown MOG."""
        for t, e in enumerate(self.trace):
            mog = float("nan") if e.mog_norm is None else e.mog_norm
            yield (t, *e.x.tolist(), float(e.f[0]), float(e.f[1]), e.step_len, mog)


def multi_objective_descent(
    x: np.ndarray,
    mop: Mop,
    config: DescentConfig,
    escape_radius: Optional[float] = None,
    f0: Optional[np.ndarray] = None,
) -> DescentResult:
    """Descend from `x` to a locally efficient point.

    With `escape_radius` set, the search aborts as soon as an accepted
    iterate is farther than that radius from `x` and returns the escaped
    point; callers use this to detect jumps into other attraction basins.
    Budget exhaustion returns the best point reached so far.
    """
    cfg = config.resolved(mop)
    clip = (lambda p: mop.bounds.clip(p)) if mop.bounds is not None else (lambda p: p)
    evals0 = mop.counter

    x_start = np.asarray(x, dtype=float).copy()
    f_start = mop.evaluate(x_start) if f0 is None else np.asarray(f0, dtype=float).copy()

    trace: list[TraceEntry] = []
    history: deque[np.ndarray] = deque(maxlen=cfg.history)
    # last iterate whose objectives weakly dominate the start; the final
    # answer must never be worse than the input
    anchor_x, anchor_f = x_start, f_start

    def finalize(point, f, stop):
        # never return a point worse than the input; an escape is exempt
        # because callers inspect the escaped point itself
        if stop is not DescentStop.EARLY_ESCAPE and not weakly_dominates(f, f_start):
            point, f = anchor_x, anchor_f
        return DescentResult(point.copy(), f.copy(), stop, trace, mop.counter - evals0)

    try:
        g1, g2 = mop.gradients(x_start)
    except BudgetExhausted:
        trace.append(TraceEntry(x_start, f_start, 0.0, 0.0, None))
        return finalize(x_start, f_start, DescentStop.BUDGET_EXHAUSTED)
    mog = mog_geometric_mean(g1, g2)
    mog_norm = mog.norm
    trace.append(TraceEntry(x_start, f_start, 0.0, 0.0, mog_norm))
    history.append(f_start)

    if mog_norm < cfg.crit_gamma:
        return finalize(x_start, f_start, DescentStop.CRITICAL_POINT)

    escaped = None

    def accepted(px, pf, step_len, alpha, slopes=None, ref=None):
        nonlocal anchor_x, anchor_f, escaped
        history.append(pf)
        trace.append(TraceEntry(px, pf, step_len, alpha, None, slopes, ref))
        if weakly_dominates(pf, f_start):
            anchor_x, anchor_f = px, pf
        if escape_radius is not None and np.linalg.norm(px - x_start) > escape_radius:
            escaped = (px, pf)

    # -- phase 1: doubling line search along the start MOG -------------------
    direction = mog.direction
    alpha = cfg.alpha_min / mog_norm
    x_cur, f_cur = x_start, f_start
    try:
        while alpha * mog_norm <= cfg.alpha_max * (1.0 + 1e-12):
            prop = clip(x_cur - alpha * direction)
            if np.array_equal(prop, x_cur):
                break
            f_prop = mop.evaluate(prop)
            if not weakly_dominates(f_prop, f_cur):
                break
            step_len = float(np.linalg.norm(prop - x_cur))
            x_cur, f_cur = prop, f_prop
            accepted(x_cur, f_cur, step_len, alpha)
            if escaped is not None:
                return finalize(*escaped, DescentStop.EARLY_ESCAPE)
            alpha *= cfg.lambda_descent
    except BudgetExhausted:
        return finalize(x_cur, f_cur, DescentStop.BUDGET_EXHAUSTED)

    if x_cur is x_start:
        # not even the minimal step produced a dominating point
        return finalize(x_start, f_start, DescentStop.MIN_STEP_NO_IMPROVEMENT)

    # -- phase 2: nonmonotone BB loop ----------------------------------------
    x_prev, mog_prev_dir = x_start, mog.direction
    x_t, f_t = x_cur, f_cur
    prev_step_abs = float(np.linalg.norm(x_t - x_prev))

    try:
        for _ in range(cfg.max_iter):
            g1, g2 = mop.gradients(x_t)
            mog = mog_geometric_mean(g1, g2)
            mog_norm = mog.norm
            trace[-1].mog_norm = mog_norm
            if mog_norm < cfg.crit_gamma:
                return finalize(x_t, f_t, DescentStop.CRITICAL_POINT)

            s = x_t - x_prev
            y = mog.direction - mog_prev_dir
            sty = float(s @ y)
            ny = float(np.linalg.norm(y))
            if sty > 0.0 and ny > 0.0:
                alpha = max(float(s @ s) / sty, float(np.linalg.norm(s)) / ny)
            else:
                # nonconvex safeguard: reuse the previous accepted step length
                alpha = prev_step_abs / mog_norm
            alpha_min_mult = cfg.alpha_min / mog_norm
            alpha_max_mult = cfg.alpha_max / mog_norm
            alpha = min(max(alpha, alpha_min_mult), alpha_max_mult)

            f_ref = np.max(np.stack(history), axis=0)
            slopes = (float(mog.direction @ g1), float(mog.direction @ g2))

            f_prop = None
            prop = None
            while True:
                prop = clip(x_t - alpha * mog.direction)
                if np.array_equal(prop, x_t):
                    armijo_ok = False
                    f_prop = None
                else:
                    f_prop = mop.evaluate(prop)
                    armijo_ok = all(
                        f_prop[i] < f_ref[i] - cfg.beta * alpha * slopes[i]
                        for i in (0, 1)
                    )
                if armijo_ok:
                    break
                if alpha <= alpha_min_mult * (1.0 + 1e-12):
                    break
                alpha = max(alpha / cfg.lambda_descent, alpha_min_mult)

            at_min = alpha <= alpha_min_mult * (1.0 + 1e-12)
            if not armijo_ok:
                return finalize(x_t, f_t, DescentStop.MIN_STEP_NO_IMPROVEMENT)
            if at_min and not (weakly_dominates(f_prop, f_t) and not np.array_equal(f_prop, f_t)):
                # minimal step neither dominates nor is worth keeping
                return finalize(x_t, f_t, DescentStop.MIN_STEP_NO_IMPROVEMENT)

            step_len = float(np.linalg.norm(prop - x_t))
            x_prev, mog_prev_dir = x_t, mog.direction
            x_t, f_t = prop, f_prop
            prev_step_abs = step_len
            accepted(x_t, f_t, step_len, alpha, slopes, f_ref)
            if escaped is not None:
                return finalize(*escaped, DescentStop.EARLY_ESCAPE)
    except BudgetExhausted:
        return finalize(x_t, f_t, DescentStop.BUDGET_EXHAUSTED)

    return finalize(x_t, f_t, DescentStop.MAX_ITER)
