"""Fast improving-response dynamics for large instances.

The jitted kernels maintain the exact set of profitable moves in indexed
arrays and resample uniformly from it, so the sampled trajectory has the
same distribution as rejection sampling over all moves but convergence is
detected the moment the set empties.  After a move only pairs involving an
occupant of the closed neighborhoods of the two touched nodes (plus, for
jumps, the two changed columns and empty nodes adjacent to the touched
nodes) can change profitability, so only those are re-evaluated.

Randomness comes from numba's internal Mersenne Twister, seeded per run;
results are reproducible for a fixed (seed, instance) but the stream is
distinct from NumPy generators created in Python code.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import GameSpec, Graph, Placement, SWAP, TypeProfile
from ._kernels import MODEL_ADG, MODEL_CG, MODEL_MDG
from ._engine_jump import jump_dynamics
from ._engine_swap import swap_dynamics

_MODEL_CODE = {"mdg": MODEL_MDG, "adg": MODEL_ADG, "cg": MODEL_CG}


def run(
    graph: Graph,
    types: TypeProfile,
    placement: Placement,
    spec: GameSpec,
    seed: int = 0,
    max_steps: int = 10**7,
    agent_first: bool = True,
) -> tuple[Placement, int, bool]:
    """Run randomized improving-response dynamics to convergence (or the step
    cap) and return (final placement, steps, converged).

    For jumps, agent_first picks a uniform agent among those with a
    profitable jump and then a uniform profitable target; with
    agent_first=False the draw is uniform over all (agent, target) pairs.
    Swaps always draw uniformly over profitable pairs.
    """
    indptr, indices = graph.csr()
    t = types.values
    node_of = placement.node_of_agent.copy()
    agent_of = np.full(graph.node_count, -1, np.int64)
    agent_of[node_of] = np.arange(types.n)
    model = _MODEL_CODE[spec.cost_model]
    lam = spec.lam if spec.lam is not None else 0.0
    if spec.deviation == SWAP:
        steps, converged = swap_dynamics(
            indptr, indices, t, node_of, agent_of,
            model, lam, spec.isolation_cost, seed, max_steps, agent_first,
        )
    else:
        steps, converged = jump_dynamics(
            indptr, indices, t, node_of, agent_of,
            model, lam, spec.isolation_cost, seed, max_steps, agent_first,
        )
    return Placement(node_of, graph.node_count), int(steps), bool(converged)
