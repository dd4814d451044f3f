"""Closed-form equilibrium constructions.

Each function returns a placement that is an equilibrium for its game
variant: a breadth-first placement for max-distance swap games on arbitrary
connected graphs, and several jump-game placements for the hidden-isolation
max-distance variant (paths, graphs containing K_{2,e}, graphs with exactly
two empty nodes).
"""

from __future__ import annotations

from collections import deque
from typing import Optional

import numpy as np

from .core import (
    JUMP,
    HIS,
    MDG,
    GameSpec,
    Graph,
    InstanceError,
    Placement,
    TypeProfile,
)
from .graphs import find_five_path, find_k2e
from .oracle import is_equilibrium


def bfs_order(graph: Graph, root: int = 0) -> list[int]:
    """Nodes in breadth-first visit order from the root, neighbors taken in
    ascending index order (so the order is level-by-level, left to right)."""
    seen = [False] * graph.node_count
    seen[root] = True
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in graph.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
                queue.append(w)
    return order


def se_mdg_bfs(graph: Graph, types: TypeProfile, root: int = 0) -> Placement:
    """Swap equilibrium for the max-distance game on any connected graph.

    Agents in ascending type order go onto the nodes in BFS order; in the
    resulting profile every non-root agent's smallest-index neighbor sits on
    its BFS parent, which rules out profitable swaps.
    """
    if types.n != graph.node_count:
        raise InstanceError("swap construction needs full occupancy")
    order = bfs_order(graph, root)
    return Placement(order, graph.node_count)


def sorted_path_placement(types: TypeProfile) -> Placement:
    """Identity placement of sorted agents along a path of n nodes; a swap
    equilibrium on paths for all three cost models."""
    n = types.n
    return Placement(list(range(n)), n)


def je_his_path(types: TypeProfile, node_count: int) -> Placement:
    """Jump equilibrium on a path under hidden isolation.

    Agents go in sorted order along the path with one empty node inserted at
    each of the e largest consecutive-type gaps (ties favor the earlier
    gap).  With e >= n - 1 every agent is isolated instead, which is a
    social optimum of cost zero.  Stable for the max-distance, average, and
    cutoff cost models alike.
    """
    n = types.n
    e = node_count - n
    if e < 0:
        raise InstanceError("more agents than nodes")
    if e >= n - 1:
        return Placement([2 * i for i in range(n)], node_count)
    gaps = np.diff(types.values)
    # indices of the e largest gaps, earlier gap wins ties
    chosen = sorted(sorted(range(n - 1), key=lambda k: (-gaps[k], k))[:e])
    cut = set(chosen)
    node_of = []
    cursor = 0
    for i in range(n):
        node_of.append(cursor)
        cursor += 2 if i in cut else 1
    return Placement(node_of, node_count)


def je_his_k2e(graph: Graph, types: TypeProfile) -> Optional[Placement]:
    """Jump equilibrium (hidden isolation, max-distance) on graphs containing
    K_{2,e}: the two extreme-type agents sit on the common neighbors u and v,
    the e middle nodes stay empty, so any jump into them costs t(n) - t(1).

    Returns None when the graph has no K_{2,e} subgraph.
    """
    n = types.n
    e = graph.node_count - n
    if e < 1:
        raise InstanceError("jump construction needs at least one empty node")
    found = find_k2e(graph, e)
    if found is None:
        return None
    u, v, s = found
    partial = {0: u, n - 1: v}
    return _fill_remaining_blocking(partial, set(s), n, graph.node_count)


def _fill_remaining_blocking(
    node_of: dict[int, int], blocked: set[int], n: int, node_count: int
) -> Placement:
    used = set(node_of.values()) | blocked
    free = [v for v in range(node_count) if v not in used]
    rest = [a for a in range(n) if a not in node_of]
    if len(rest) > len(free):
        raise InstanceError("not enough free nodes")
    full = dict(node_of)
    for a, v in zip(rest, free):
        full[a] = v
    return Placement([full[a] for a in range(n)], node_count)


def _vertex_cover_pair(graph: Graph) -> Optional[tuple[int, int]]:
    """Two nodes covering every edge, if such a pair exists."""
    if not graph.edges:
        return None
    a, b = next(iter(sorted(graph.edges)))
    for u in (a, b):
        rest = [ed for ed in graph.edges if u not in ed]
        if not rest:
            v = next(w for w in range(graph.node_count) if w != u)
            return (u, v) if u < v else (v, u)
        common = set(rest[0])
        for ed in rest[1:]:
            common &= set(ed)
            if not common:
                break
        if common:
            v = min(common)
            return (u, v) if u < v else (v, u)
    return None


def _five_path_candidates(
    graph: Graph, types: TypeProfile, path: tuple[int, int, int, int, int]
) -> list[Placement]:
    """Candidate placements for the five-path two-empty construction.

    Both majority branches are produced: the high-majority branch puts the
    largest agent on u1, the smallest on u3, the second-largest on u5, leaves
    u2 and u4 empty, and fills u1's out-of-path neighbors with agents whose
    type is at least the midpoint of the extreme types; the low-majority
    branch mirrors this.  Branches without enough same-side agents to fill
    u1's neighborhood are dropped.
    """
    n = types.n
    t = types.values
    u1, u2, u3, u4, u5 = path
    tm = (t[0] + t[n - 1]) / 2.0
    out = [w for w in graph.adjacency[u1] if w not in path]
    a_plus = [i for i in range(n) if t[i] >= tm]
    a_minus = [i for i in range(n) if t[i] <= tm]

    candidates = []
    branches = [
        ({n - 1: u1, 0: u3, n - 2: u5}, a_plus),
        ({0: u1, n - 1: u3, 1: u5}, a_minus),
    ]
    if len(a_plus) < len(a_minus):
        branches.reverse()
    for anchors, side in branches:
        filler = [i for i in side if i not in anchors]
        if len(filler) < len(out):
            continue
        partial = dict(anchors)
        for a, w in zip(filler, out):
            partial[a] = w
        try:
            candidates.append(
                _fill_remaining_blocking(partial, {u2, u4}, n, graph.node_count)
            )
        except InstanceError:
            continue
    return candidates


def je_his_two_empty(graph: Graph, types: TypeProfile) -> Placement:
    """Jump equilibrium (hidden isolation, max-distance) when exactly two
    nodes stay empty.

    Tries, in order: the K_{2,2} placement, the five-path placement in both
    majority branches and both path orientations, and the all-isolated
    placement that leaves a two-node vertex cover empty.  Every candidate is
    checked by the exhaustive jump scan before being returned, so the output
    is always a verified equilibrium.
    """
    n = types.n
    if graph.node_count - n != 2:
        raise InstanceError("construction requires exactly two empty nodes")
    spec = GameSpec(MDG, deviation=JUMP, isolation=HIS)

    candidates: list[Placement] = []
    k2e = je_his_k2e(graph, types)
    if k2e is not None:
        candidates.append(k2e)
    path = find_five_path(graph)
    if path is not None:
        candidates.extend(_five_path_candidates(graph, types, path))
        candidates.extend(_five_path_candidates(graph, types, path[::-1]))
    cover = _vertex_cover_pair(graph)
    if cover is not None:
        candidates.append(
            _fill_remaining_blocking({}, set(cover), n, graph.node_count)
        )

    for placement in candidates:
        if is_equilibrium(graph, types, placement, spec).holds:
            return placement
    raise InstanceError("no verified jump equilibrium candidate found")
