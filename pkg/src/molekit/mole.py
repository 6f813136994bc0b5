"""MOLE: the multi-objective landscape explorer main loop.

Each starting point is descended to a locally efficient point, which seeds
a LIFO stack of points to explore. Popped points already covered by an
archived set are inserted there (this is what prevents endless looping
between mutually partially-dominating sets); uncovered points trigger a
full set exploration whose superposed discoveries are pushed back onto the
stack. Hypervolume post-processing runs on the schedule configured below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .continuation import DirectionStop, ExploreConfig, explore_efficient_set
from .descent import DescentConfig, DescentStop, multi_objective_descent
from .errors import BudgetExhausted, MissingBounds
from .hv import PostProcessConfig, PostProcessLogRow, post_process_hv
from .problems import Mop
from .sets import SetsArchive

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoleConfig:
    max_starting_points: int = 1000
    max_sets: int = 1000
    seed: int = 0
    descent: DescentConfig = field(default_factory=DescentConfig)
    explore: ExploreConfig = field(default_factory=ExploreConfig)
    postprocess: PostProcessConfig = field(default_factory=PostProcessConfig)
    # first post-processing pass waits for this many successful starts
    postprocess_after_starts: int = 10


@dataclass
class MoleRunReport:
    archive: SetsArchive
    evals_used: int
    starting_points_consumed: int
    explore_calls: int
    provenance: dict[int, dict]
    termination: str
    postprocess_log: list[PostProcessLogRow]
    stack_events: list[tuple[str, int]]

    def to_dict(self) -> dict:
        return {
            "evals_used": self.evals_used,
            "starting_points_consumed": self.starting_points_consumed,
            "explore_calls": self.explore_calls,
            "termination": self.termination,
            "n_sets": len(self.archive.sets),
            "sets": [
                {
                    "set_id": s.set_id,
                    "n_nodes": len(s.nodes),
                    "n_quarantined": len(s.quarantine),
                    "provenance": self.provenance.get(s.set_id, {}),
                }
                for s in self.archive.sets
            ],
        }


def run_mole(
    mop: Mop,
    config: MoleConfig,
    starting_points: Optional[Iterable[Sequence[float]]] = None,
) -> MoleRunReport:
    """Run MOLE on `mop` and return the populated archive plus run metadata.

    Starting points default to uniform samples inside the box bounds drawn
    from the configured seed; an explicit iterable makes the run
    reproducible independently of the generator. Budget exhaustion is
    graceful: the report carries everything discovered up to that point.
    """
    descent_cfg = config.descent.resolved(mop)
    explore_cfg = config.explore.resolved(mop)

    if starting_points is None:
        if mop.bounds is None:
            raise MissingBounds("random starting points require box bounds")
        rng = np.random.default_rng(config.seed)
        starts = mop.bounds.sample(rng, config.max_starting_points)
    else:
        starts = [np.asarray(p, dtype=float) for p in starting_points]
        starts = starts[: config.max_starting_points]

    archive = SetsArchive()
    provenance: dict[int, dict] = {}
    stack_events: list[tuple[str, int]] = []
    pp_log: list[PostProcessLogRow] = []
    evals0 = mop.counter
    explore_calls = 0
    starts_consumed = 0
    successful_starts = 0
    pp_active = False
    pp_version = -1  # archive state at the last post-processing pass
    termination = "starts_exhausted"

    def budget_empty() -> bool:
        return mop.remaining_budget is not None and mop.remaining_budget <= 0

    def archive_version() -> int:
        return sum(s.version for s in archive.sets) + len(archive.sets)

    def run_postprocess():
        nonlocal pp_version
        rows = post_process_hv(archive, mop, config.postprocess, descent_cfg)
        pp_log.extend(rows)
        pp_version = archive_version()

    try:
        for start in starts:
            if budget_empty():
                termination = "budget_exhausted"
                break
            if len(archive.sets) >= config.max_sets:
                termination = "max_sets"
                break
            starts_consumed += 1
            start_ok = True
            new_nondominated_set = False

            result = multi_objective_descent(start, mop, descent_cfg)
            if result.termination is DescentStop.BUDGET_EXHAUSTED:
                start_ok = False
            stack: list[tuple[np.ndarray, np.ndarray, Optional[int]]] = [
                (result.point, result.objectives, None)
            ]
            stack_events.append(("push", 1))

            while stack:
                x_star, f_star, parent = stack.pop()
                stack_events.append(("pop", len(stack)))
                found = archive.find_containing_set(x_star, f_star, explore_cfg.sigma_min)
                if found is not None:
                    set_id, _pos = found
                    archive.insert_node(set_id, x_star, f_star)
                    continue
                if len(archive.sets) >= config.max_sets:
                    termination = "max_sets"
                    stack.clear()
                    break
                model = archive.new_set()
                provenance[model.set_id] = {
                    "start_index": starts_consumed - 1,
                    "parent_set": parent,
                    "origin": [float(v) for v in x_star],
                }
                explore_calls += 1
                explored = explore_efficient_set(
                    x_star, mop, explore_cfg, descent_cfg,
                    f_star=f_star, model=model,
                )
                if any(s is DirectionStop.BUDGET_EXHAUSTED for s in explored.stops.values()):
                    start_ok = False
                for xs, fs in explored.superposed:
                    stack.append((xs, fs, model.set_id))
                    stack_events.append(("push", len(stack)))
                front_f, owners = archive.nondominated()
                if any(sid == model.set_id for sid, _ in owners):
                    new_nondominated_set = True

            if budget_empty():
                termination = "budget_exhausted"
                break
            if start_ok:
                successful_starts += 1
            if not pp_active and successful_starts >= config.postprocess_after_starts:
                pp_active = True
                run_postprocess()
            elif pp_active and new_nondominated_set:
                run_postprocess()
            if termination == "max_sets":
                break
    except BudgetExhausted:
        termination = "budget_exhausted"

    # final polish: small runs may never reach the scheduled passes
    if archive.sets and archive_version() != pp_version and not budget_empty():
        try:
            run_postprocess()
        except BudgetExhausted:
            termination = "budget_exhausted"
    if budget_empty():
        termination = "budget_exhausted"

    return MoleRunReport(
        archive=archive,
        evals_used=mop.counter - evals0,
        starting_points_consumed=starts_consumed,
        explore_calls=explore_calls,
        provenance=provenance,
        termination=termination,
        postprocess_log=pp_log,
        stack_events=stack_events,
    )
