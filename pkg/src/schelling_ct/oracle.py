"""Exhaustive ground truth at small scale.

Every routine here either scans all deviations from a fixed placement or
enumerates all injective placements outright, so results are exact.  The
placement enumerators live in jitted kernels; the per-placement deviation
scan used by `is_equilibrium` is re-derived from the core cost definitions
rather than any incremental bookkeeping, so it can serve as an independent
check on the dynamics engine.
"""

from __future__ import annotations

from math import perm
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .core import (
    ADG,
    CG,
    MDG,
    SWAP,
    GameSpec,
    Graph,
    Jump,
    Move,
    Placement,
    Swap,
    TypeProfile,
    social_cost,
)

DEFAULT_BUDGET = 10**7

_MODEL_CODE = {MDG: _kernels.MODEL_MDG, ADG: _kernels.MODEL_ADG, CG: _kernels.MODEL_CG}


class BudgetExceededError(RuntimeError):
    """The instance admits more placements than the enumeration budget."""


class Verdict(NamedTuple):
    holds: bool
    witness: Optional[Move]


class OptimumResult(NamedTuple):
    placement: Placement
    cost: float
    enumerated: int


class MinMaxEdgeResult(NamedTuple):
    placement: Placement
    value: float
    enumerated: int


class EquilibriumSurvey(NamedTuple):
    exists: bool
    best: Optional[Placement]
    best_cost: float
    worst: Optional[Placement]
    worst_cost: float
    count: int
    enumerated: int


def _spec_args(spec: GameSpec):
    lam = spec.lam if spec.lam is not None else 0.0
    return _MODEL_CODE[spec.cost_model], lam, spec.isolation_cost


def _check_budget(graph: Graph, types: TypeProfile, budget: int) -> int:
    total = perm(graph.node_count, types.n)
    if total > budget:
        raise BudgetExceededError(
            f"{total} placements exceed the enumeration budget of {budget}"
        )
    return total


def is_equilibrium(
    graph: Graph, types: TypeProfile, placement: Placement, spec: GameSpec
) -> Verdict:
    """Scan every swap (or every agent x empty-node jump); holds iff none is
    profitable.  The witness, when present, is a profitable deviation."""
    indptr, indices = graph.csr()
    model, lam, iso = _spec_args(spec)
    found, x, y = _kernels.has_profitable_move(
        indptr,
        indices,
        types.values,
        placement.node_of_agent,
        placement.agent_of_node,
        model,
        lam,
        iso,
        spec.deviation == SWAP,
    )
    if not found:
        return Verdict(True, None)
    move: Move = Swap(int(x), int(y)) if spec.deviation == SWAP else Jump(int(x), int(y))
    return Verdict(False, move)


def brute_force_optimum(
    graph: Graph, types: TypeProfile, spec: GameSpec, budget: int = DEFAULT_BUDGET
) -> OptimumResult:
    """Exact social optimum; ties go to the lexicographically smallest
    node_of_agent vector."""
    _check_budget(graph, types, budget)
    indptr, indices = graph.csr()
    model, lam, iso = _spec_args(spec)
    assign, cost, leaves = _kernels.brute_force_optimum(
        indptr, indices, types.values, graph.node_count, model, lam, iso
    )
    placement = Placement(assign, graph.node_count)
    # re-evaluate through the reference cost path to guard the kernel
    cost = social_cost(graph, types, placement, spec)
    return OptimumResult(placement, cost, int(leaves))


def equilibrium_exists(
    graph: Graph, types: TypeProfile, spec: GameSpec, budget: int = DEFAULT_BUDGET
) -> Optional[Placement]:
    """Some equilibrium placement, or None after certifying absence by full
    enumeration."""
    _check_budget(graph, types, budget)
    indptr, indices = graph.csr()
    model, lam, iso = _spec_args(spec)
    found, best, _, _, _, _, _ = _kernels.scan_placements_for_equilibria(
        indptr,
        indices,
        types.values,
        graph.node_count,
        model,
        lam,
        iso,
        spec.deviation == SWAP,
        True,
    )
    if not found:
        return None
    return Placement(best, graph.node_count)


def survey_equilibria(
    graph: Graph, types: TypeProfile, spec: GameSpec, budget: int = DEFAULT_BUDGET
) -> EquilibriumSurvey:
    """Best and worst equilibrium over the full placement enumeration."""
    _check_budget(graph, types, budget)
    indptr, indices = graph.csr()
    model, lam, iso = _spec_args(spec)
    found, best, best_cost, worst, worst_cost, count, visited = (
        _kernels.scan_placements_for_equilibria(
            indptr,
            indices,
            types.values,
            graph.node_count,
            model,
            lam,
            iso,
            spec.deviation == SWAP,
            False,
        )
    )
    if not found:
        return EquilibriumSurvey(False, None, np.inf, None, -np.inf, 0, int(visited))
    return EquilibriumSurvey(
        True,
        Placement(best, graph.node_count),
        float(best_cost),
        Placement(worst, graph.node_count),
        float(worst_cost),
        int(count),
        int(visited),
    )


def min_maxedge(
    graph: Graph, types: TypeProfile, budget: int = DEFAULT_BUDGET
) -> MinMaxEdgeResult:
    """Exact minimizer of the maximum occupied-edge type-distance."""
    _check_budget(graph, types, budget)
    indptr, indices = graph.csr()
    assign, value, leaves = _kernels.min_maxedge(
        indptr, indices, types.values, graph.node_count
    )
    return MinMaxEdgeResult(Placement(assign, graph.node_count), float(value), int(leaves))
