"""molekit: local-search toolkit for bi-objective optimization.

Discovers, models and traverses locally efficient sets of continuous
bi-objective problems: multi-objective gradient descent, predictor-
corrector set continuation, a set-network main loop (MOLE), hypervolume
post-processing, the MOGSA sliding baseline and landscape grid export.
"""

from .continuation import DirectionStop, ExploreConfig, ExploreResult, explore_efficient_set
from .descent import DescentConfig, DescentResult, DescentStop, multi_objective_descent
from .errors import (
    BudgetExhausted,
    DimensionMismatch,
    IterationCap,
    MissingBounds,
    MolekitError,
    NonFiniteObjective,
    NotComparablePair,
    OrderingViolation,
    OutOfBounds,
    StalledRefinement,
    UnknownProblem,
)
from .hv import (
    PostProcessConfig,
    hv_gap,
    hypervolume_2d,
    max_expected_descent,
    post_process_hv,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .landscape import GridSpec, LandscapeResult, compute_landscape, verify_height_consistency
from .mog import MogResult, criticality, mog_convex_hull, mog_geometric_mean, mog_normalized
from .mogsa import MogsaArchive, MogsaConfig, run_mogsa
from .mole import MoleConfig, MoleRunReport, run_mole
from .problems import (
    BoxBounds,
    Dominance,
    Mop,
    diag,
    dominance,
    dominates,
    make_test_problem,
    strictly_dominates,
)
from .sets import EfficientSetModel, InsertStatus, SetsArchive

__version__ = "0.1.0"
