"""Predictor-corrector exploration of one locally efficient set.

From a locally efficient point the set is traced twice, once towards each
objective. Predictions step along the secant through the last two set
points (or the pursued objective's negative gradient while bootstrapping),
the corrector is the BB multi-objective descent with an escape radius.
Step sizes adapt trust-region style between sigma_min and sigma_max.
Correctors that jump into another attraction basin are collected as
superposed points instead of being inserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .descent import DescentConfig, DescentStop, multi_objective_descent
from .errors import BudgetExhausted
from .problems import BoxBounds, Mop, diag, dominates
from .sets import DUPLICATE_TOL, EfficientSetModel, InsertStatus
from .util import angle_deg


@dataclass(frozen=True)
class ExploreConfig:
    sigma_min: float = 1e-4            # min continuation step
    sigma_max: Optional[float] = None  # max continuation step, diag/100 when unset
    phi_max: float = 45.0              # max turn angle per step, degrees
    lambda_explore: float = 2.0        # step scaling factor
    max_steps: int = 10000             # safety cap per direction

    def resolved(self, mop: Mop, fallback_box: Optional[BoxBounds] = None) -> "ExploreConfig":
        if self.sigma_max is not None:
            return self
        return replace(self, sigma_max=diag(mop.bounds, fallback_box) / 100.0)


class DirectionStop(Enum):
    SO_OPTIMUM = "so_optimum"
    BASIN_CROSSED = "basin_crossed"
    STALLED = "stalled"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class ExploreResult:
    set_model: EfficientSetModel
    superposed: list[tuple[np.ndarray, np.ndarray]]
    stops: dict[int, DirectionStop]
    evals_used: int


def explore_efficient_set(
    x_star: np.ndarray,
    mop: Mop,
    config: ExploreConfig,
    descent_config: DescentConfig,
    f_star: Optional[np.ndarray] = None,
    model: Optional[EfficientSetModel] = None,
) -> ExploreResult:
    """Trace the locally efficient set through `x_star`.

    `x_star` should already be (close to) locally efficient, e.g. the
    output of the multi-objective descent. Returns the populated set model
    together with any locally efficient points found in superposed
    attraction basins.
    """
    cfg = config.resolved(mop)
    dcfg = descent_config.resolved(mop)
    clip = (lambda p: mop.bounds.clip(p)) if mop.bounds is not None else (lambda p: p)
    evals0 = mop.counter

    x_star = np.asarray(x_star, dtype=float).copy()
    if f_star is None:
        f_star = mop.evaluate(x_star)
    f_star = np.asarray(f_star, dtype=float).copy()

    if model is None:
        model = EfficientSetModel(set_id=0)
    model.insert(x_star, f_star)
    superposed: list[tuple[np.ndarray, np.ndarray]] = []
    stops: dict[int, DirectionStop] = {}

    for obj in (0, 1):
        stops[obj] = _explore_direction(
            obj, x_star, f_star, mop, cfg, dcfg, clip, model, superposed
        )

    return ExploreResult(model, superposed, stops, mop.counter - evals0)


def _explore_direction(obj, x_star, f_star, mop, cfg, dcfg, clip, model, superposed):
    # chain of accepted points in this direction, starting at x_star
    chain: list[tuple[np.ndarray, np.ndarray]] = [(x_star, f_star)]
    sigma = cfg.sigma_min
    use_gradient = True

    def at_min() -> bool:
        return sigma <= cfg.sigma_min * (1.0 + 1e-12)

    def reject_adapt() -> bool:
        """Shrink sigma; once at sigma_min, force the gradient predictor.

        Returns False when there is nothing left to adapt (already minimal
        and on the gradient), in which case the caller must terminate.
        """
        nonlocal sigma, use_gradient
        if at_min():
            if use_gradient:
                return False
            use_gradient = True
        else:
            sigma = max(sigma / cfg.lambda_explore, cfg.sigma_min)
        return True

    def accept_adapt() -> None:
        nonlocal sigma, use_gradient
        sigma = min(sigma * cfg.lambda_explore, cfg.sigma_max)
        use_gradient = False

    try:
        for _ in range(cfg.max_steps):
            x_prev, f_prev = chain[-1]
            if use_gradient or len(chain) < 2:
                g = mop.gradients(x_prev)[obj]
                direction = -g
                gradient_step = True
            else:
                direction = x_prev - chain[-2][0]
                gradient_step = False
            norm = float(np.linalg.norm(direction))
            if norm < 1e-14:
                return DirectionStop.SO_OPTIMUM

            p = clip(x_prev + sigma * direction / norm)
            f_p = mop.evaluate(p)
            if f_p[obj] >= f_prev[obj]:
                # prediction failed to improve the pursued objective
                if at_min() and gradient_step:
                    return DirectionStop.SO_OPTIMUM
                if not reject_adapt():
                    return DirectionStop.SO_OPTIMUM
                continue

            res = multi_objective_descent(p, mop, dcfg, escape_radius=sigma, f0=f_p)
            p_star, f_ps = res.point, res.objectives
            if res.termination is DescentStop.BUDGET_EXHAUSTED:
                return DirectionStop.BUDGET_EXHAUSTED

            crossed = dominates(f_ps, f_prev)
            escaped = res.termination is DescentStop.EARLY_ESCAPE
            if escaped and not crossed:
                # unconverged corrector: a rejection, never a superposed point
                if not reject_adapt():
                    return DirectionStop.STALLED
                continue

            if float(np.linalg.norm(p_star - x_prev)) < DUPLICATE_TOL:
                # corrector fell back onto the endpoint: no progress possible
                if not reject_adapt():
                    return DirectionStop.STALLED
                continue

            travel = float(np.linalg.norm(p - p_star))
            phi = 0.0
            if len(chain) >= 2:
                phi = angle_deg(x_prev - chain[-2][0], p_star - x_prev)
            if (travel > sigma or phi > cfg.phi_max) and not (at_min() and use_gradient):
                reject_adapt()
                continue

            if crossed or (float(np.linalg.norm(x_prev - p_star)) > cfg.sigma_max
                           and use_gradient):
                superposed.append((p_star.copy(), f_ps.copy()))
                return DirectionStop.BASIN_CROSSED

            status = model.insert(p_star, f_ps)
            if status is not InsertStatus.INSERTED:
                if not reject_adapt():
                    return DirectionStop.STALLED
                continue
            chain.append((p_star, f_ps))
            accept_adapt()
    except BudgetExhausted:
        return DirectionStop.BUDGET_EXHAUSTED
    return DirectionStop.STALLED
