"""Bi-objective problems: evaluation, dominance, gradients, test functions.

All decision and objective vectors are plain 1-D float64 numpy arrays. A
:class:`Mop` owns the single piece of mutable optimizer state, the
evaluation counter, and enforces box bounds and the evaluation budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BudgetExhausted,
    MissingBounds,
    NonFiniteObjective,
    OutOfBounds,
    UnknownProblem,
)

# Central finite-difference step for gradient estimation.
FD_EPS = 1e-8


class Dominance(Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"


def dominance(a: np.ndarray, b: np.ndarray) -> Dominance:
    """Pareto relation of objective vector `a` towards `b` (minimization)."""
    a_le_b = bool(np.all(a <= b))
    b_le_a = bool(np.all(b <= a))
    if a_le_b and b_le_a:
        return Dominance.EQUAL
    if a_le_b:
        return Dominance.DOMINATES
    if b_le_a:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff `a` dominates `b`: componentwise <= and not equal."""
    return bool(np.all(a <= b)) and bool(np.any(a < b))


def strictly_dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff every objective of `a` is strictly better than `b`'s."""
    return bool(np.all(a < b))


def weakly_dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff `a` is componentwise no worse than `b`."""
    return bool(np.all(a <= b))


@dataclass(frozen=True)
class BoxBounds:
    """Axis-aligned box constraints l <= x <= u with l < u per coordinate."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("bounds must be 1-D arrays of equal length")
        if not np.all(lower < upper):
            raise ValueError("each lower bound must be strictly below its upper bound")

    @property
    def dimension(self) -> int:
        return self.lower.size

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower)) and bool(np.all(x <= self.upper))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def diagonal(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, self.dimension))


def diag(bounds: Optional[BoxBounds], fallback: Optional[BoxBounds] = None) -> float:
    """Euclidean length of the decision-space box diagonal.

    `fallback` stands in when the problem itself is unbounded but a central
    region of interest is known.
    """
    box = bounds if bounds is not None else fallback
    if box is None:
        raise MissingBounds("no bounds available and no fallback box supplied")
    return box.diagonal()


class Mop:
    """A bi-objective problem with budget accounting.

    Every call to :meth:`evaluate` consumes exactly one unit of budget. A
    central-difference gradient estimate consumes 2*d units; analytic
    gradients, when attached, are free.
    """

    def __init__(
        self,
        dimension: int,
        evaluator: Callable[[np.ndarray], np.ndarray],
        analytic_gradients: Optional[Callable[[np.ndarray], tuple]] = None,
        bounds: Optional[BoxBounds] = None,
        budget: Optional[int] = None,
        name: str = "custom",
        observer: Optional[Callable[[int, np.ndarray, np.ndarray], None]] = None,
    ):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        if budget is not None and budget < 1:
            raise ValueError("budget must be positive when set")
        if bounds is not None and bounds.dimension != dimension:
            raise ValueError("bounds dimension does not match problem dimension")
        self.dimension = dimension
        self.evaluator = evaluator
        self.analytic_gradients = analytic_gradients
        self.bounds = bounds
        self.budget = budget
        self.name = name
        self.observer = observer
        self.counter = 0

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"expected a point of dimension {self.dimension}")
        if self.bounds is not None and not self.bounds.contains(x):
            raise OutOfBounds(f"point {x.tolist()} violates the box bounds")
        if self.budget is not None and self.counter >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} evaluations consumed")
        f = np.asarray(self.evaluator(x), dtype=float)
        self.counter += 1
        if f.shape != (2,) or not np.all(np.isfinite(f)):
            raise NonFiniteObjective(f"evaluator returned {f!r} at {x.tolist()}")
        if self.observer is not None:
            self.observer(self.counter, x, f)
        return f

    def gradients(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Objective gradients (g1, g2) at `x`.

        Uses the attached analytic gradients when present (no budget cost),
        otherwise central finite differences with step `FD_EPS`. Coordinates
        closer than `FD_EPS` to a bound use a one-sided two-point stencil so
        probes stay feasible; either way the cost is 2 evaluations per
        coordinate. A budget exhaustion aborts the whole estimate.
        """
        x = np.asarray(x, dtype=float)
        if self.analytic_gradients is not None:
            g1, g2 = self.analytic_gradients(x)
            return np.asarray(g1, dtype=float), np.asarray(g2, dtype=float)
        d = self.dimension
        g = np.empty((2, d))
        for i in range(d):
            hi = np.zeros(d)
            hi[i] = FD_EPS
            at_upper = self.bounds is not None and x[i] + FD_EPS > self.bounds.upper[i]
            at_lower = self.bounds is not None and x[i] - FD_EPS < self.bounds.lower[i]
            if at_upper:
                f_a = self.evaluate(x - hi)
                f_b = self.evaluate(x - 2 * hi)
                g[:, i] = (f_a - f_b) / FD_EPS
            elif at_lower:
                f_a = self.evaluate(x + 2 * hi)
                f_b = self.evaluate(x + hi)
                g[:, i] = (f_a - f_b) / FD_EPS
            else:
                f_a = self.evaluate(x + hi)
                f_b = self.evaluate(x - hi)
                g[:, i] = (f_a - f_b) / (2 * FD_EPS)
        return g[0], g[1]

    # -- bookkeeping --------------------------------------------------------

    @property
    def remaining_budget(self) -> Optional[int]:
        if self.budget is None:
            return None
        return self.budget - self.counter

    def clone(self, budget: Optional[int] = None, observer=None) -> "Mop":
        """Independent copy with a fresh counter (for concurrent runs)."""
        return Mop(
            self.dimension,
            self.evaluator,
            analytic_gradients=self.analytic_gradients,
            bounds=self.bounds,
            budget=self.budget if budget is None else budget,
            name=self.name,
            observer=observer,
        )


# -- analytic test problems ---------------------------------------------------


def _bisphere(dimension: int, scales: Sequence[float], centers=None,
              bounds=None, budget=None) -> Mop:
    if centers is None:
        c1 = np.full(dimension, -1.0)
        c2 = np.full(dimension, 1.0)
    else:
        c1 = np.asarray(centers[0], dtype=float)
        c2 = np.asarray(centers[1], dtype=float)
        if c1.size != dimension or c2.size != dimension:
            raise ValueError("center dimension mismatch")
    s1, s2 = float(scales[0]), float(scales[1])

    def evaluate(x):
        d1 = x - c1
        d2 = x - c2
        return np.array([s1 * float(d1 @ d1), s2 * float(d2 @ d2)])

    def gradients(x):
        return 2.0 * s1 * (x - c1), 2.0 * s2 * (x - c2)

    if bounds is None:
        bounds = BoxBounds(np.full(dimension, -2.0), np.full(dimension, 2.0))
    return Mop(dimension, evaluate, gradients, bounds, budget, name="bisphere")


def _aspar(bounds=None, budget=None) -> Mop:
    # f1 has two basins at (+-1, 0); f2 is a sphere centered at (-0.5, 2).
    def evaluate(x):
        x1, x2 = x
        f1 = x1 ** 4 - 2.0 * x1 ** 2 + 2.0 * x2 ** 2 + 1.0
        f2 = (x1 + 0.5) ** 2 + (x2 - 2.0) ** 2
        return np.array([f1, f2])

    def gradients(x):
        x1, x2 = x
        g1 = np.array([4.0 * x1 ** 3 - 4.0 * x1, 4.0 * x2])
        g2 = np.array([2.0 * (x1 + 0.5), 2.0 * (x2 - 2.0)])
        return g1, g2

    if bounds is None:
        bounds = BoxBounds(np.array([-2.0, -1.0]), np.array([2.0, 3.0]))
    return Mop(2, evaluate, gradients, bounds, budget, name="aspar")


def _birosenbrock(bounds=None, budget=None) -> Mop:
    # Two banana valleys bending towards each other; their efficient sets
    # intersect, so neither set is strict.
    def evaluate(x):
        x1, x2 = x
        f1 = (1.0 - x1) ** 2 + (x2 - x1 ** 2) ** 2
        f2 = (1.0 + x1) ** 2 + (-(x2 - 3.0) - x1 ** 2) ** 2
        return np.array([f1, f2])

    def gradients(x):
        x1, x2 = x
        u = x2 - x1 ** 2
        g1 = np.array([-2.0 * (1.0 - x1) - 4.0 * x1 * u, 2.0 * u])
        v = 3.0 - x2 - x1 ** 2
        g2 = np.array([2.0 * (1.0 + x1) - 4.0 * x1 * v, -2.0 * v])
        return g1, g2

    if bounds is None:
        bounds = BoxBounds(np.array([-2.0, -1.0]), np.array([2.0, 4.0]))
    return Mop(2, evaluate, gradients, bounds, budget, name="birosenbrock")


_CANONICAL_NAMES = {
    "bisphere": "bisphere",
    "bi-sphere": "bisphere",
    "bi_sphere": "bisphere",
    "aspar": "aspar",
    "birosenbrock": "birosenbrock",
    "bi-rosenbrock": "birosenbrock",
    "bi_rosenbrock": "birosenbrock",
}

PROBLEM_NAMES = ("bisphere", "aspar", "birosenbrock")


def make_test_problem(
    name: str,
    dimension: int = 2,
    scales: Sequence[float] = (1.0, 1.0),
    centers=None,
    bounds: Optional[BoxBounds] = None,
    budget: Optional[int] = None,
) -> Mop:
    """Build one of the analytic test problems by name.

    `bisphere` accepts any dimension, objective scale factors and centers;
    `aspar` and `birosenbrock` are fixed two-dimensional functions.
    """
    key = _CANONICAL_NAMES.get(name.strip().lower())
    if key is None:
        raise UnknownProblem(f"unknown problem {name!r}; known: {', '.join(PROBLEM_NAMES)}")
    if key == "bisphere":
        return _bisphere(dimension, scales, centers, bounds, budget)
    if dimension != 2:
        raise UnknownProblem(f"problem {key!r} is only defined for dimension 2")
    if key == "aspar":
        return _aspar(bounds, budget)
    return _birosenbrock(bounds, budget)
