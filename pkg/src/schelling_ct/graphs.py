"""Graph families, structural searches, and the named worst-case instances.

The fixture list collects the small equilibrium/optimum gap instances whose
claims the oracle can re-check exhaustively: non-existence on the 5-ring,
path equilibria with social cost far above the optimum, and the clique
gadgets behind the stability-gap bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

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
    InstanceError,
    Move,
    Placement,
    Swap,
    TypeProfile,
)


def make_path(n: int) -> Graph:
    if n < 1:
        raise InstanceError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def make_ring(n: int) -> Graph:
    if n < 3:
        raise InstanceError("ring needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_clique(n: int) -> Graph:
    if n < 1:
        raise InstanceError("clique needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def make_star(center_degree: int) -> Graph:
    """Star with node 0 as center and `center_degree` leaves."""
    if center_degree < 1:
        raise InstanceError("star needs at least one leaf")
    return Graph(center_degree + 1, [(0, i) for i in range(1, center_degree + 1)])


def make_torus(
    width: int, height: int, radius: int = 1, von_neumann: bool = False
) -> Graph:
    """Toroidal grid; node (x, y) has index y*width + x.

    With Moore neighborhoods, (x, y) is adjacent to every other cell within
    toroidal Chebyshev distance `radius`, giving an ((2r+1)^2 - 1)-regular
    graph (8-regular for radius 1).  The von Neumann flag instead connects
    the four edge-sharing cells (radius must be 1).
    """
    if von_neumann and radius != 1:
        raise InstanceError("von Neumann neighborhoods only support radius 1")
    if radius < 1:
        raise InstanceError("radius must be >= 1")
    if width < 2 * radius + 1 or height < 2 * radius + 1:
        raise InstanceError("torus dimensions too small for the radius")

    def idx(x: int, y: int) -> int:
        return (y % height) * width + (x % width)

    edges = set()
    for y in range(height):
        for x in range(width):
            u = idx(x, y)
            if von_neumann:
                offsets = [(1, 0), (0, 1)]
            else:
                offsets = [
                    (dx, dy)
                    for dx in range(-radius, radius + 1)
                    for dy in range(-radius, radius + 1)
                    if (dx, dy) != (0, 0)
                ]
            for dx, dy in offsets:
                v = idx(x + dx, y + dy)
                if u != v:
                    edges.add((min(u, v), max(u, v)))
    g = Graph(width * height, edges)
    g.grid_shape = (width, height)
    return g


def find_k2e(graph: Graph, e: int) -> Optional[tuple[int, int, list[int]]]:
    """Find nodes u, v and a set S of e further nodes all adjacent to both.

    Returns the lexicographically smallest (u, v, S) or None.  For e = 1 a
    single scan for a node of degree >= 2 suffices.
    """
    if e < 1:
        raise InstanceError("e must be >= 1")
    if e == 1:
        for s in range(graph.node_count):
            if graph.degree(s) >= 2:
                u, v = graph.adjacency[s][0], graph.adjacency[s][1]
                return (u, v, [s])
        return None
    for u in range(graph.node_count):
        nbrs_u = set(graph.adjacency[u])
        for v in range(u + 1, graph.node_count):
            common = sorted((nbrs_u & set(graph.adjacency[v])) - {u, v})
            if len(common) >= e:
                return (u, v, common[:e])
    return None


def _out_of_path_degree(graph: Graph, node: int, path: tuple[int, ...]) -> int:
    return sum(1 for w in graph.adjacency[node] if w not in path)


def find_five_path(graph: Graph) -> Optional[tuple[int, int, int, int, int]]:
    """Lexicographically smallest simple 5-node path whose first endpoint has
    at most as many out-of-path neighbors as the last endpoint."""
    n = graph.node_count
    if n < 5:
        return None

    def extend(path: list[int]) -> Optional[tuple[int, ...]]:
        if len(path) == 5:
            tup = tuple(path)
            if _out_of_path_degree(graph, tup[0], tup) <= _out_of_path_degree(
                graph, tup[4], tup
            ):
                return tup
            return None
        for w in graph.adjacency[path[-1]]:
            if w not in path:
                found = extend(path + [w])
                if found is not None:
                    return found
        return None

    for start in range(n):
        found = extend([start])
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# Worst-case instances
# ---------------------------------------------------------------------------

EPS = 1e-3  # stand-in for the "arbitrarily small" perturbations


@dataclass
class Claim:
    """Machine-checkable statement about a fixture.

    kind:
      * "no_equilibrium"   -- exhaustive search must find no equilibrium
      * "equilibrium"      -- the fixture placement is an equilibrium with the
                              given social cost; optimum, when set, is the
                              exact brute-force optimum
      * "not_equilibrium"  -- the fixture placement admits the given
                              profitable move and has the given social cost
    """

    kind: str
    cost: Optional[float] = None
    optimum: Optional[float] = None
    witness: Optional[Move] = None


@dataclass
class InstanceFixture:
    name: str
    graph: Graph
    types: TypeProfile
    spec: GameSpec
    claim: Claim
    placement: Optional[Placement] = None
    # additional game variants the same placement must be stable for
    extra_specs: list[GameSpec] = field(default_factory=list)


def _mdg_poa_path(n: int = 8) -> InstanceFixture:
    """Even path, half type 0 / half type 1; the (0,0,1,1)-repeating pattern
    is a swap equilibrium of cost n-2 while sorting costs 2."""
    assert n % 2 == 0 and n % 4 == 0
    types = TypeProfile([0.0] * (n // 2) + [1.0] * (n // 2))
    # node k gets type pattern 0,0,1,1,0,0,1,1,...
    node_of = np.empty(n, dtype=np.int64)
    zero_agents = iter(range(n // 2))
    one_agents = iter(range(n // 2, n))
    for k in range(n):
        if k % 4 in (0, 1):
            node_of[next(zero_agents)] = k
        else:
            node_of[next(one_agents)] = k
    return InstanceFixture(
        name="mdg-poa-path",
        graph=make_path(n),
        types=types,
        spec=GameSpec(MDG, SWAP),
        placement=Placement(node_of, n),
        claim=Claim("equilibrium", cost=float(n - 2), optimum=2.0),
    )


def _placement_from_sequence(seq: list[Optional[int]], n_agents: int) -> Placement:
    """seq[k] = agent on node k (None = empty)."""
    node_of = np.full(n_agents, -1, dtype=np.int64)
    for node, agent in enumerate(seq):
        if agent is not None:
            node_of[agent] = node
    return Placement(node_of, len(seq))


def _cg_poa_path() -> InstanceFixture:
    types = TypeProfile([i / 5 for i in range(6)])
    return InstanceFixture(
        name="cg-poa-path",
        graph=make_path(6),
        types=types,
        spec=GameSpec(CG, SWAP, lam=0.4),
        placement=_placement_from_sequence([0, 2, 3, 4, 5, 1], 6),
        claim=Claim("equilibrium", cost=1.5, optimum=0.0),
    )


def _cg_poa_jump_uis() -> InstanceFixture:
    types = TypeProfile([i / 5 for i in range(6)])
    return InstanceFixture(
        name="cg-poa-jump-uis",
        graph=make_path(7),
        types=types,
        spec=GameSpec(CG, JUMP, UIS, lam=0.4),
        placement=_placement_from_sequence([0, 2, 3, 4, 5, 1, None], 6),
        claim=Claim("equilibrium", cost=1.5, optimum=0.0),
    )


def _cg_poa_jump_his() -> InstanceFixture:
    vals = [i / 5 for i in range(6)]
    vals[3] = 3 / 5 - EPS
    types = TypeProfile(vals)
    return InstanceFixture(
        name="cg-poa-jump-his",
        graph=make_path(7),
        types=types,
        spec=GameSpec(CG, JUMP, HIS, lam=0.4),
        placement=_placement_from_sequence([0, 2, 4, 3, 5, None, 1], 6),
        claim=Claim("equilibrium", cost=1.5, optimum=0.0),
    )


def _adg_jump_poa() -> InstanceFixture:
    """Four equal-type agents plus two type-1 agents on a 7-path: parking the
    high pair in the middle of the low block is stable at cost 1 while the
    sorted layout costs 0."""
    types = TypeProfile([0.0, 0.0, 0.0, 0.0, 1.0, 1.0])
    fx = InstanceFixture(
        name="adg-jump-poa",
        graph=make_path(7),
        types=types,
        spec=GameSpec(ADG, JUMP, UIS),
        placement=_placement_from_sequence([2, 3, 4, 5, None, 0, 1], 6),
        claim=Claim("equilibrium", cost=1.0, optimum=0.0),
    )
    fx.extra_specs = [GameSpec(ADG, JUMP, HIS)]
    return fx


def _his_mdg_poa() -> InstanceFixture:
    """4-clique with a pendant 2-chain; blocking the clique gateway with
    minority-type agents is stable at cost 3 while the optimum is 0."""
    # nodes 0-3 clique (3 = gateway u), 4 = v adj u, 5 = w adj v
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]
    types = TypeProfile([0.0, 0.0, 0.0, 1.0, 1.0])
    node_of = np.array([3, 4, 5, 0, 1], dtype=np.int64)  # node 2 empty
    return InstanceFixture(
        name="his-mdg-poa",
        graph=Graph(6, edges),
        types=types,
        spec=GameSpec(MDG, JUMP, HIS),
        placement=Placement(node_of, 6),
        claim=Claim("equilibrium", cost=3.0, optimum=0.0),
    )


def _uis_mdg_pos(m: int = 3) -> InstanceFixture:
    """Three m-cliques plus a universal node; the near-1 agent stuck on the
    hub keeps every clique agent paying almost the full range."""
    hub = 3 * m
    edges = []
    for c in range(3):
        base = c * m
        edges += [(base + i, base + j) for i in range(m) for j in range(i + 1, m)]
    edges += [(v, hub) for v in range(3 * m)]
    types = TypeProfile([0.0] * m + [1.0 - EPS] + [1.0] * m)
    node_of = np.empty(2 * m + 1, dtype=np.int64)
    node_of[:m] = np.arange(m)  # type-0 agents fill clique 1
    node_of[m] = hub  # the 1-eps agent sits on the hub
    node_of[m + 1 :] = np.arange(m, 2 * m)  # type-1 agents fill clique 2
    cost = (1.0 - EPS) + m * (1.0 - EPS) + m * EPS
    return InstanceFixture(
        name="uis-mdg-pos",
        graph=Graph(3 * m + 1, edges),
        types=types,
        spec=GameSpec(MDG, JUMP, UIS),
        placement=Placement(node_of, 3 * m + 1),
        claim=Claim("equilibrium", cost=cost),
    )


def _mdg_pos_cliques(m: int = 4) -> InstanceFixture:
    """Four chained cliques, one type per clique; the pure profile is cheap
    but unstable: the gateway agents of cliques 1 and 4 gain by swapping."""
    sizes = [m + i for i in range(1, 5)]
    clique_types = [0.5, 1.0, EPS, 2.0 / 3.0]
    starts = np.cumsum([0] + sizes[:-1])
    edges = []
    for s, size in zip(starts, sizes):
        edges += [(s + i, s + j) for i in range(size) for j in range(i + 1, size)]
    gateways = [int(s) for s in starts]
    edges += [(gateways[k], gateways[k + 1]) for k in range(3)]
    n = sum(sizes)
    graph = Graph(n, edges)

    raw = []
    for size, tv in zip(sizes, clique_types):
        raw += [tv] * size
    types, order = TypeProfile.from_unsorted(raw)
    # sorted agent k came from raw position order[k]; raw position p belongs
    # to the clique holding node p, so place agent k on node order[k]
    node_of = np.asarray(order, dtype=np.int64)
    placement = Placement(node_of, n)
    cost = 0.5 + (1.0 - EPS) + (1.0 - EPS) + (2.0 / 3.0 - EPS)
    u1_agent = int(placement.agent_of_node[gateways[0]])
    u4_agent = int(placement.agent_of_node[gateways[3]])
    return InstanceFixture(
        name="mdg-pos-cliques",
        graph=graph,
        types=types,
        spec=GameSpec(MDG, SWAP),
        placement=placement,
        claim=Claim("not_equilibrium", cost=cost, witness=Swap(u1_agent, u4_agent)),
    )


def fixtures() -> list[InstanceFixture]:
    ring5 = make_ring(5)
    ring5_types = TypeProfile([0.0, 1 / 3, 1.0])
    return [
        InstanceFixture(
            name="ring5-no-je-mdg",
            graph=ring5,
            types=ring5_types,
            spec=GameSpec(MDG, JUMP, UIS),
            claim=Claim("no_equilibrium"),
        ),
        InstanceFixture(
            name="ring5-no-je-adg",
            graph=ring5,
            types=ring5_types,
            spec=GameSpec(ADG, JUMP, UIS),
            claim=Claim("no_equilibrium"),
        ),
        _mdg_poa_path(),
        _cg_poa_path(),
        _cg_poa_jump_uis(),
        _cg_poa_jump_his(),
        _adg_jump_poa(),
        _his_mdg_poa(),
        _uis_mdg_pos(),
        _mdg_pos_cliques(),
    ]


def fixture_by_name(name: str) -> InstanceFixture:
    for fx in fixtures():
        if fx.name == name:
            return fx
    raise KeyError(name)
