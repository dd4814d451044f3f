"""Improving-response dynamics and the ordinal potential functions.

`run_dynamics` repeatedly applies profitable moves until none is left.  The
default policy draws uniformly at random from the full set of profitable
moves, which keeps step counts comparable across cost models.  Small
instances run through the pure-Python path below; large instances can be
dispatched to the incremental engine in `engine.py`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    ADG,
    CG,
    MDG,
    SWAP,
    GameSpec,
    Graph,
    InstanceError,
    Jump,
    Move,
    Placement,
    Swap,
    TypeProfile,
    agent_cost,
)

POLICIES = ("random", "first", "best")

DEFAULT_MAX_STEPS = 10**7


class GameState:
    """A game instance plus a mutable placement with cached agent costs.

    The cache is refreshed incrementally: applying a move recomputes only the
    occupants of the closed neighborhoods of the touched nodes.
    """

    def __init__(
        self,
        graph: Graph,
        types: TypeProfile,
        placement: Placement,
        spec: GameSpec,
    ):
        if spec.deviation == SWAP and types.n != graph.node_count:
            raise InstanceError("swap games require full occupancy")
        self.graph = graph
        self.types = types
        self.spec = spec
        self.placement = placement.copy()
        self.costs = np.empty(types.n)
        self.refresh()

    def refresh(self) -> None:
        for a in range(self.types.n):
            self.costs[a] = agent_cost(
                self.graph, self.types, self.placement, self.spec, a
            )

    def copy(self) -> "GameState":
        return GameState(self.graph, self.types, self.placement, self.spec)

    def _touched_agents(self, nodes: list[int]) -> set[int]:
        agents = set()
        for u in nodes:
            for w in (u, *self.graph.adjacency[u]):
                occ = self.placement.agent_of_node[w]
                if occ >= 0:
                    agents.add(int(occ))
        return agents

    def apply(self, move: Move) -> None:
        if isinstance(move, Swap):
            nodes = [
                int(self.placement.node_of_agent[move.i]),
                int(self.placement.node_of_agent[move.j]),
            ]
        else:
            nodes = [int(self.placement.node_of_agent[move.agent]), move.target]
        self.placement.apply_inplace(move)
        for a in self._touched_agents(nodes):
            self.costs[a] = agent_cost(
                self.graph, self.types, self.placement, self.spec, a
            )


def _hyp_swap_cost(state: GameState, a: int, b: int) -> float:
    """Cost of agent a at b's node after exchanging a and b."""
    graph, t, p, spec = state.graph, state.types.values, state.placement, state.spec
    va = p.node_of_agent[a]
    vb = p.node_of_agent[b]
    dists = []
    for w in graph.adjacency[vb]:
        occ = b if w == va else p.agent_of_node[w]
        if occ < 0 or occ == a:
            continue
        dists.append(abs(t[a] - t[occ]))
    if not dists:
        return spec.isolation_cost
    if spec.cost_model == MDG:
        return max(dists)
    if spec.cost_model == ADG:
        return sum(dists) / len(dists)
    return sum(1 for d in dists if d > spec.lam) / len(dists)


def _hyp_jump_cost(state: GameState, a: int, v: int) -> float:
    """Cost of agent a after relocating to the empty node v."""
    graph, t, p, spec = state.graph, state.types.values, state.placement, state.spec
    dists = []
    for w in graph.adjacency[v]:
        occ = p.agent_of_node[w]
        if occ < 0 or occ == a:
            continue
        dists.append(abs(t[a] - t[occ]))
    if not dists:
        return spec.isolation_cost
    if spec.cost_model == MDG:
        return max(dists)
    if spec.cost_model == ADG:
        return sum(dists) / len(dists)
    return sum(1 for d in dists if d > spec.lam) / len(dists)


def profitable_moves(state: GameState) -> list[Move]:
    """All moves that strictly improve their movers, in enumeration order
    (agent pairs i<j for swaps, (agent, empty node) pairs for jumps)."""
    moves: list[Move] = []
    n = state.types.n
    if state.spec.deviation == SWAP:
        for i in range(n):
            for j in range(i + 1, n):
                if _hyp_swap_cost(state, i, j) < state.costs[i] and _hyp_swap_cost(
                    state, j, i
                ) < state.costs[j]:
                    moves.append(Swap(i, j))
    else:
        for a in range(n):
            for v in state.placement.empty_nodes():
                if _hyp_jump_cost(state, a, v) < state.costs[a]:
                    moves.append(Jump(a, v))
    return moves


def _move_gain(state: GameState, move: Move) -> float:
    if isinstance(move, Swap):
        return (
            state.costs[move.i]
            - _hyp_swap_cost(state, move.i, move.j)
            + state.costs[move.j]
            - _hyp_swap_cost(state, move.j, move.i)
        )
    return state.costs[move.agent] - _hyp_jump_cost(state, move.agent, move.target)


@dataclass
class DynamicsResult:
    placement: Placement
    steps: int
    converged: bool
    seed: int
    policy: str
    potential_trace: Optional[list[float]] = field(default=None, repr=False)


def run_dynamics(
    state: GameState,
    policy: str = "random",
    seed: int = 0,
    max_steps: int = DEFAULT_MAX_STEPS,
    potential: Optional[Callable[[GameState], float]] = None,
    on_move: Optional[Callable[[GameState, Move], None]] = None,
    trace_file=None,
) -> DynamicsResult:
    """Run improving-response dynamics from the state's current placement.

    The state is mutated; the returned placement is a copy of the final one.
    Policies: "random" picks uniformly among all profitable moves (PCG64,
    seeded), "first" takes the first move in enumeration order, "best" the
    move with the largest total cost decrease.  Identical (seed, policy,
    initial state) reproduces the identical trace.
    """
    if policy not in POLICIES:
        raise InstanceError(f"unknown policy {policy!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    steps = 0
    trace = [potential(state)] if potential else None
    converged = False
    while steps < max_steps:
        moves = profitable_moves(state)
        if not moves:
            converged = True
            break
        if policy == "random":
            move = moves[rng.integers(len(moves))]
        elif policy == "first":
            move = moves[0]
        else:
            move = max(moves, key=lambda m: _move_gain(state, m))
        if on_move is not None:
            on_move(state, move)
        if trace_file is not None:
            if isinstance(move, Swap):
                trace_file.write(f"SWAP {move.i} {move.j}\n")
            else:
                trace_file.write(f"JUMP {move.agent} {move.target}\n")
        state.apply(move)
        steps += 1
        if trace is not None:
            trace.append(potential(state))
    else:
        converged = not profitable_moves(state)
    return DynamicsResult(
        state.placement.copy(), steps, converged, seed, policy, trace
    )


# ---------------------------------------------------------------------------
# Ordinal potential functions
# ---------------------------------------------------------------------------


def potential_edge_sum(state: GameState) -> float:
    """Sum of type-distances over occupied edges; an ordinal potential for
    ADG swaps on regular graphs, where it equals twice the social cost."""
    t = state.types.values
    p = state.placement
    total = 0.0
    for u, v in state.graph.edges:
        a, b = p.agent_of_node[u], p.agent_of_node[v]
        if a >= 0 and b >= 0:
            total += abs(t[a] - t[b])
    return total


def potential_monochromatic(state: GameState) -> int:
    """Number of occupied edges whose endpoints are mutual friends
    (type-distance <= lam); increases along profitable CG swaps on almost
    regular graphs."""
    if state.spec.cost_model != CG:
        raise InstanceError("monochromatic potential is defined for the CG")
    t = state.types.values
    lam = state.spec.lam
    p = state.placement
    count = 0
    for u, v in state.graph.edges:
        a, b = p.agent_of_node[u], p.agent_of_node[v]
        if a >= 0 and b >= 0 and abs(t[a] - t[b]) <= lam:
            count += 1
    return count


def sorted_cost_vector(state: GameState) -> tuple[float, ...]:
    """Agent costs sorted non-increasingly; its lexicographic order strictly
    decreases along profitable MDG swaps and HIS-MDG jumps."""
    return tuple(sorted((float(c) for c in state.costs), reverse=True))


def lex_less(a: tuple[float, ...], b: tuple[float, ...]) -> bool:
    """Strict lexicographic comparison of equal-length cost vectors."""
    return a < b
