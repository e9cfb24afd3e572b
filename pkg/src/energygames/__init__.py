"""Multi-dimensional energy games, bounding games and their strategies."""

from .core import (
    Configuration,
    Edge,
    GameGraph,
    SimpleCycle,
    Vertex,
    cycle_decomposition_step,
    cycle_weights,
    edge_norm,
    enumerate_simple_cycles,
    norm,
    normalize_cycles,
    total_weight,
    validate,
)
from .errors import (
    BudgetExceeded,
    EnergyGameError,
    FalsificationError,
    InconsistentObservation,
    InputError,
    UndefinedState,
)
from .fcb import ColouredStep, FCBStrategy, evaluate_cycle, fcb_move, solve_fcb, verify_strategy
from .geometry import (
    OpenHalfSpace,
    PerfectHalfSpace,
    Subspace,
    bound_L,
    cancel_target,
    contains,
    enumerate_m_open_halfspaces,
    enumerate_perfect_halfspaces,
    hs_lt,
    lca,
    pphs_prec,
    shift_target,
    span,
    strict_part,
)
from .io import dumps_game, load_game, loads_game, save_game, to_dot
from .linalg import (
    ClosedHalfSpace,
    ColumnSystem,
    PositiveCombination,
    alternatives,
    bound_S,
    positive_kernel_solution,
)
from .oracle import cross_check, random_game, self_covering_search
from .solver import (
    SolveOptions,
    SolveResult,
    forced_violation_search,
    pareto_limit,
    solve_arbitrary_credit,
    solve_bounding,
    solve_given_credit,
    solve_safety_box,
)
from .strategies import (
    BoundsPack,
    CounterAutomatonStrategy,
    LiftedP2Strategy,
    bounds,
    p1_auto_step,
    p2_lift_step,
    scaled_bounds,
    simulate,
)
from .transforms import arena_size_bound, capped, capped_chain, lossy

__version__ = "0.1.0"
