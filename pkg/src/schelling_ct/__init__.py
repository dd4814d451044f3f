"""Schelling games with continuous agent types.

Agents with types in [0, 1] occupy nodes of a graph and pay a cost driven by
the type-distances to their neighbors (maximum, average, or the fraction
beyond a cutoff).  The package provides the game model, improving-response
dynamics with ordinal potentials, closed-form equilibrium constructions,
exhaustive small-instance oracles, and a seeded experiment pipeline.
"""

from .core import (
    ADG,
    CG,
    HIS,
    JUMP,
    MDG,
    SWAP,
    UIS,
    GameSpec,
    Graph,
    Instance,
    InstanceError,
    Jump,
    Move,
    Placement,
    Swap,
    TypeProfile,
    agent_cost,
    apply_move,
    format_instance,
    is_profitable,
    max_edge_cost,
    parse_instance,
    social_cost,
)
from .graphs import (
    find_five_path,
    find_k2e,
    fixture_by_name,
    fixtures,
    make_clique,
    make_path,
    make_ring,
    make_star,
    make_torus,
)
from .dynamics import (
    DynamicsResult,
    GameState,
    lex_less,
    potential_edge_sum,
    potential_monochromatic,
    profitable_moves,
    run_dynamics,
    sorted_cost_vector,
)
from .constructors import (
    bfs_order,
    je_his_k2e,
    je_his_path,
    je_his_two_empty,
    se_mdg_bfs,
    sorted_path_placement,
)
from .oracle import (
    BudgetExceededError,
    brute_force_optimum,
    equilibrium_exists,
    is_equilibrium,
    min_maxedge,
    survey_equilibria,
)
from . import engine
from .experiments import (
    ExperimentConfig,
    MetricsRow,
    aggregate_rows,
    compute_metrics,
    csv_string,
    emit_csv,
    parse_csv,
    render_ppm,
    run_batch,
    run_single,
    sample_state,
    sweep_lambda,
)

__version__ = "0.1.0"
