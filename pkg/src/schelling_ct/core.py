"""Domain types and cost evaluation for Schelling games with continuous types.

Agents carry a type-value in [0, 1] and live on the nodes of a connected
graph.  An agent judges her location by the type-distances to the agents on
neighboring nodes, under one of three cost models:

* MDG -- maximum type-distance to a neighbor,
* ADG -- average type-distance to the neighbors,
* CG  -- fraction of neighbors whose type-distance exceeds a cutoff lambda.

Deviations are either swaps (two agents exchange nodes) or jumps (one agent
relocates to an empty node).  An isolated agent pays 1 under the
unhappy-in-isolation (UIS) variant and 0 under happy-in-isolation (HIS).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

MDG = "mdg"
ADG = "adg"
CG = "cg"

SWAP = "swap"
JUMP = "jump"

UIS = "uis"
HIS = "his"


class InstanceError(ValueError):
    """Malformed graph, type profile, placement, or instance file."""


class Graph:
    """Undirected simple connected graph over node indices 0..node_count-1."""

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]):
        if node_count < 1:
            raise InstanceError("graph needs at least one node")
        self.node_count = int(node_count)
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InstanceError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InstanceError(f"edge ({u},{v}) out of range")
            if (min(u, v), max(u, v)) in edge_set:
                raise InstanceError(f"duplicate edge ({u},{v})")
            edge_set.add((min(u, v), max(u, v)))
        self.edges = frozenset(edge_set)
        adjacency: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in edge_set:
            adjacency[u].append(v)
            adjacency[v].append(u)
        self.adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        if not self._connected():
            raise InstanceError("graph is not connected")
        # set by make_torus so the renderer can map nodes back to pixels
        self.grid_shape: Optional[tuple[int, int]] = None
        self._csr: Optional[tuple[np.ndarray, np.ndarray]] = None

    def _connected(self) -> bool:
        seen = [False] * self.node_count
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.node_count

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def regular_degree(self) -> Optional[int]:
        """The common degree if the graph is regular, else None."""
        degs = set(self.degrees())
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_almost_regular(self) -> bool:
        """True when all degrees lie in {d, d+1} for some d."""
        degs = self.degrees()
        return max(degs) - min(degs) <= 1

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form (indptr, indices), cached."""
        if self._csr is None:
            indptr = np.zeros(self.node_count + 1, dtype=np.int64)
            for v in range(self.node_count):
                indptr[v + 1] = indptr[v] + len(self.adjacency[v])
            indices = np.empty(indptr[-1], dtype=np.int64)
            for v in range(self.node_count):
                indices[indptr[v]:indptr[v + 1]] = self.adjacency[v]
            self._csr = (indptr, indices)
        return self._csr

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edges={self.edge_count})"


class TypeProfile:
    """Nondecreasing sequence of agent type-values in [0, 1].

    Agents are identified by their index into the sorted sequence; ingestion
    of unsorted input goes through ``from_unsorted`` which retains the sort
    permutation for reporting.
    """

    def __init__(self, values: Sequence[float]):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise InstanceError("type profile must be a non-empty 1-d sequence")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise InstanceError("type-values must lie in [0, 1]")
        if np.any(np.diff(arr) < 0):
            raise InstanceError("type-values must be nondecreasing")
        self.values = arr
        self.values.flags.writeable = False

    @classmethod
    def from_unsorted(cls, values: Sequence[float]) -> tuple["TypeProfile", np.ndarray]:
        """Sort arbitrary values; returns (profile, order) with order[k] the
        original position of sorted agent k."""
        arr = np.asarray(values, dtype=np.float64)
        order = np.argsort(arr, kind="stable")
        return cls(arr[order]), order

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def distance(self, i: int, j: int) -> float:
        return abs(float(self.values[i]) - float(self.values[j]))

    def __repr__(self) -> str:
        return f"TypeProfile({self.values.tolist()})"


@dataclass(frozen=True)
class GameSpec:
    """Cost model + deviation mode + isolation variant.

    ``isolation`` is stored for swap games too, but only matters for jump
    games: an agent on a connected graph with every node occupied always has
    a neighbor.
    """

    cost_model: str
    deviation: str = SWAP
    isolation: str = UIS
    lam: Optional[float] = None

    def __post_init__(self):
        if self.cost_model not in (MDG, ADG, CG):
            raise InstanceError(f"unknown cost model {self.cost_model!r}")
        if self.deviation not in (SWAP, JUMP):
            raise InstanceError(f"unknown deviation mode {self.deviation!r}")
        if self.isolation not in (UIS, HIS):
            raise InstanceError(f"unknown isolation variant {self.isolation!r}")
        if self.cost_model == CG:
            if self.lam is None or not (0.0 <= self.lam <= 1.0):
                raise InstanceError("CG requires a cutoff lam in [0, 1]")
        elif self.lam is not None:
            raise InstanceError("lam is only meaningful for the CG")

    @property
    def isolation_cost(self) -> float:
        return 1.0 if self.isolation == UIS else 0.0

    def label(self) -> str:
        if self.cost_model == CG:
            model = f"CG({self.lam:g})"
        else:
            model = self.cost_model.upper()
        if self.deviation == SWAP:
            return f"S-{model}"
        return f"J-{self.isolation.upper()}-{model}"


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise InstanceError("swap needs two distinct agents")


@dataclass(frozen=True)
class Jump:
    agent: int
    target: int


Move = Union[Swap, Jump]


class Placement:
    """Injective assignment of agents to nodes; the rest of the nodes are empty."""

    def __init__(self, node_of_agent: Sequence[int], node_count: int):
        arr = np.asarray(node_of_agent, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise InstanceError("placement must be a non-empty 1-d sequence")
        if arr.size > node_count:
            raise InstanceError("more agents than nodes")
        if np.any(arr < 0) or np.any(arr >= node_count):
            raise InstanceError("placement node index out of range")
        if np.unique(arr).size != arr.size:
            raise InstanceError("placement is not injective")
        self.node_of_agent = arr
        self.node_count = int(node_count)
        self.agent_of_node = np.full(node_count, -1, dtype=np.int64)
        self.agent_of_node[arr] = np.arange(arr.size, dtype=np.int64)

    @property
    def n(self) -> int:
        return int(self.node_of_agent.size)

    @property
    def empty_count(self) -> int:
        return self.node_count - self.n

    def empty_nodes(self) -> list[int]:
        return [v for v in range(self.node_count) if self.agent_of_node[v] < 0]

    def copy(self) -> "Placement":
        return Placement(self.node_of_agent.copy(), self.node_count)

    def apply_inplace(self, move: Move) -> None:
        if isinstance(move, Swap):
            i, j = move.i, move.j
            u, v = self.node_of_agent[i], self.node_of_agent[j]
            self.node_of_agent[i], self.node_of_agent[j] = v, u
            self.agent_of_node[u], self.agent_of_node[v] = j, i
        elif isinstance(move, Jump):
            a, v = move.agent, move.target
            if self.agent_of_node[v] >= 0:
                raise InstanceError(f"jump target {v} is occupied")
            u = self.node_of_agent[a]
            self.node_of_agent[a] = v
            self.agent_of_node[u] = -1
            self.agent_of_node[v] = a
        else:
            raise InstanceError(f"unknown move {move!r}")

    def apply(self, move: Move) -> "Placement":
        out = self.copy()
        out.apply_inplace(move)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Placement)
            and self.node_count == other.node_count
            and np.array_equal(self.node_of_agent, other.node_of_agent)
        )

    def __repr__(self) -> str:
        return f"Placement({self.node_of_agent.tolist()}, node_count={self.node_count})"


def _check_sizes(graph: Graph, types: TypeProfile, placement: Placement) -> None:
    if placement.node_count != graph.node_count:
        raise InstanceError("placement/graph size mismatch")
    if placement.n != types.n:
        raise InstanceError("placement/type-profile size mismatch")


def agent_cost(
    graph: Graph,
    types: TypeProfile,
    placement: Placement,
    spec: GameSpec,
    agent: int,
) -> float:
    """Cost of one agent under the spec's cost model; always in [0, 1]."""
    _check_sizes(graph, types, placement)
    if not (0 <= agent < types.n):
        raise InstanceError(f"invalid agent index {agent}")
    t = types.values
    ti = t[agent]
    node = placement.node_of_agent[agent]
    neighbors = [
        placement.agent_of_node[w]
        for w in graph.adjacency[node]
        if placement.agent_of_node[w] >= 0
    ]
    if not neighbors:
        return spec.isolation_cost
    dists = [abs(ti - t[j]) for j in neighbors]
    if spec.cost_model == MDG:
        return max(dists)
    if spec.cost_model == ADG:
        return sum(dists) / len(dists)
    enemies = sum(1 for d in dists if d > spec.lam)
    return enemies / len(dists)


def social_cost(
    graph: Graph, types: TypeProfile, placement: Placement, spec: GameSpec
) -> float:
    """Sum of all agent costs."""
    return sum(agent_cost(graph, types, placement, spec, i) for i in range(types.n))


def max_edge_cost(graph: Graph, types: TypeProfile, placement: Placement) -> float:
    """Maximum type-distance across an occupied edge; 1 when no two agents
    are adjacent."""
    _check_sizes(graph, types, placement)
    best = -1.0
    t = types.values
    for u, v in graph.edges:
        a, b = placement.agent_of_node[u], placement.agent_of_node[v]
        if a >= 0 and b >= 0:
            best = max(best, abs(t[a] - t[b]))
    return best if best >= 0.0 else 1.0


def is_profitable(
    graph: Graph,
    types: TypeProfile,
    placement: Placement,
    spec: GameSpec,
    move: Move,
) -> bool:
    """Strict-improvement test: both swappers improve, or the jumper improves.

    Comparisons are exact on the stored doubles; no epsilon.
    """
    _check_sizes(graph, types, placement)
    after = placement.apply(move)
    if isinstance(move, Swap):
        return (
            agent_cost(graph, types, after, spec, move.i)
            < agent_cost(graph, types, placement, spec, move.i)
            and agent_cost(graph, types, after, spec, move.j)
            < agent_cost(graph, types, placement, spec, move.j)
        )
    return agent_cost(graph, types, after, spec, move.agent) < agent_cost(
        graph, types, placement, spec, move.agent
    )


def apply_move(placement: Placement, move: Move) -> Placement:
    return placement.apply(move)


# ---------------------------------------------------------------------------
# Instance file format
#
# Line-oriented plain text:
#   n m k          -- nodes, edges, agents
#   u v            -- m edge lines, 0-based endpoints
#   t0 t1 ... tk-1 -- one line of type-values
#   v0 v1 ... vk-1 -- optional placement line (node of agent i)
# Blank lines and lines starting with '#' are ignored.
# ---------------------------------------------------------------------------


@dataclass
class Instance:
    graph: Graph
    types: TypeProfile
    placement: Optional[Placement] = None
    type_order: Optional[np.ndarray] = field(default=None, repr=False)


def parse_instance(text: str) -> Instance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InstanceError("empty instance file")
    head = lines[0].split()
    if len(head) != 3:
        raise InstanceError("header must be 'n m k'")
    n_nodes, n_edges, n_agents = (int(x) for x in head)
    if len(lines) < 1 + n_edges + 1:
        raise InstanceError("truncated instance file")
    edges = []
    for ln in lines[1 : 1 + n_edges]:
        parts = ln.split()
        if len(parts) != 2:
            raise InstanceError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    graph = Graph(n_nodes, edges)
    raw_types = [float(x) for x in lines[1 + n_edges].split()]
    if len(raw_types) != n_agents:
        raise InstanceError(f"expected {n_agents} type-values, got {len(raw_types)}")
    if any(raw_types[i] > raw_types[i + 1] for i in range(len(raw_types) - 1)):
        warnings.warn("type-values were not sorted; sorting them", stacklevel=2)
        types, order = TypeProfile.from_unsorted(raw_types)
    else:
        types = TypeProfile(raw_types)
        order = np.arange(n_agents, dtype=np.int64)
    placement = None
    if len(lines) > 2 + n_edges:
        nodes = [int(x) for x in lines[2 + n_edges].split()]
        if len(nodes) != n_agents:
            raise InstanceError(f"expected {n_agents} placement entries")
        # placement line is in file (pre-sort) agent order
        node_of_sorted = np.empty(n_agents, dtype=np.int64)
        for rank, orig in enumerate(order):
            node_of_sorted[rank] = nodes[orig]
        placement = Placement(node_of_sorted, n_nodes)
    return Instance(graph, types, placement, type_order=order)


def format_instance(
    graph: Graph, types: TypeProfile, placement: Optional[Placement] = None
) -> str:
    lines = [f"{graph.node_count} {graph.edge_count} {types.n}"]
    for u, v in sorted(graph.edges):
        lines.append(f"{u} {v}")
    lines.append(" ".join(repr(float(x)) for x in types.values))
    if placement is not None:
        lines.append(" ".join(str(int(v)) for v in placement.node_of_agent))
    return "\n".join(lines) + "\n"
