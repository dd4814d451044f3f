"""Closed-form equilibrium constructions, oracle-verified."""

import numpy as np
import pytest

from schelling_ct import (
    ADG,
    CG,
    HIS,
    JUMP,
    MDG,
    GameSpec,
    InstanceError,
    Placement,
    TypeProfile,
    bfs_order,
    brute_force_optimum,
    is_equilibrium,
    je_his_k2e,
    je_his_path,
    je_his_two_empty,
    make_clique,
    make_path,
    make_star,
    make_torus,
    se_mdg_bfs,
    social_cost,
    sorted_path_placement,
)
from schelling_ct import Graph
from conftest import random_connected_graph

JE_MDG = GameSpec(MDG, JUMP, HIS)


def test_bfs_order_on_path_from_end():
    assert bfs_order(make_path(5), root=0) == [0, 1, 2, 3, 4]


def test_se_mdg_bfs_on_star():
    types = TypeProfile([0.0, 0.3, 0.6, 1.0])
    star = make_star(3)
    placement = se_mdg_bfs(star, types)
    assert placement.node_of_agent[0] == 0  # smallest type at the center
    assert is_equilibrium(star, types, placement, GameSpec(MDG)).holds


def test_se_mdg_bfs_on_torus(rng):
    graph = make_torus(6, 6)
    types = TypeProfile(np.sort(rng.random(36)))
    placement = se_mdg_bfs(graph, types)
    assert is_equilibrium(graph, types, placement, GameSpec(MDG)).holds


def test_se_mdg_bfs_parent_property(rng):
    # every non-root agent's smallest-index occupied neighbor is the agent
    # sitting on its BFS parent
    for _ in range(10):
        graph = random_connected_graph(rng, int(rng.integers(5, 20)))
        types = TypeProfile(np.sort(rng.random(graph.node_count)))
        placement = se_mdg_bfs(graph, types)
        order = bfs_order(graph)
        parent = {}
        for rank, v in enumerate(order):
            for w in graph.adjacency[v]:
                if w not in parent and w != order[0]:
                    parent.setdefault(w, v)
        for a in range(1, types.n):
            node = int(placement.node_of_agent[a])
            least = min(int(placement.agent_of_node[w]) for w in graph.adjacency[node])
            assert least == int(placement.agent_of_node[parent[node]])
    with pytest.raises(InstanceError):
        se_mdg_bfs(make_path(3), TypeProfile([0.5]))


def test_sorted_path_placement_values():
    types = TypeProfile([0.0, 0.5, 1.0])
    placement = sorted_path_placement(types)
    cost = social_cost(make_path(3), types, placement, GameSpec(ADG))
    assert cost == 1.5
    assert brute_force_optimum(make_path(3), types, GameSpec(ADG)).cost == 1.5
    same = TypeProfile([0.3] * 4)
    for spec in (GameSpec(MDG), GameSpec(ADG), GameSpec(CG, lam=0.1)):
        assert social_cost(make_path(4), same, sorted_path_placement(same), spec) == 0


def test_sorted_path_mdg_cost_bounded_by_twice_range(rng):
    for _ in range(20):
        n = int(rng.integers(2, 12))
        types = TypeProfile(np.sort(rng.random(n)))
        placement = sorted_path_placement(types)
        cost = social_cost(make_path(n), types, placement, GameSpec(MDG))
        assert cost <= 2 * (types.values[-1] - types.values[0]) + 1e-12


def test_je_his_path_layout_example():
    types = TypeProfile([0.0, 0.1, 0.2, 0.7, 0.9])
    placement = je_his_path(types, 7)
    assert placement.node_of_agent.tolist() == [0, 1, 2, 4, 6]
    graph = make_path(7)
    for spec in (JE_MDG, GameSpec(ADG, JUMP, HIS), GameSpec(CG, JUMP, HIS, lam=0.3)):
        assert is_equilibrium(graph, types, placement, spec).holds


def test_je_his_path_edge_cases():
    types = TypeProfile([0.0, 0.4, 1.0])
    assert je_his_path(types, 3).node_of_agent.tolist() == [0, 1, 2]
    two = TypeProfile([0.2, 0.9])
    placement = je_his_path(two, 4)
    assert placement.node_of_agent.tolist() == [0, 2]
    assert social_cost(make_path(4), two, placement, JE_MDG) == 0.0
    with pytest.raises(InstanceError):
        je_his_path(types, 2)


def test_je_his_path_gap_tie_breaks_to_earlier_gap():
    types = TypeProfile([0.0, 0.5, 1.0])
    placement = je_his_path(types, 4)  # both gaps are 0.5; cut the first
    assert placement.node_of_agent.tolist() == [0, 2, 3]


def test_je_his_path_straddled_gaps_dominate_block_gaps(rng):
    # any type gap inside a block is at most any gap that an empty node cuts
    for _ in range(20):
        n = int(rng.integers(3, 10))
        e = int(rng.integers(1, n - 1))
        types = TypeProfile(np.sort(rng.random(n)))
        placement = je_his_path(types, n + e)
        occupied = set(placement.node_of_agent.tolist())
        gaps = np.diff(types.values)
        cut = [
            float(gaps[a])
            for a in range(n - 1)
            if placement.node_of_agent[a + 1] - placement.node_of_agent[a] > 1
        ]
        kept = [
            float(gaps[a])
            for a in range(n - 1)
            if placement.node_of_agent[a + 1] - placement.node_of_agent[a] == 1
        ]
        if cut and kept:
            assert max(kept) <= min(cut) + 1e-12
        assert is_equilibrium(make_path(n + e), types, placement, JE_MDG).holds


def test_je_his_k2e():
    types = TypeProfile([0.0, 0.5, 1.0])
    placement = je_his_k2e(make_clique(5), types)
    assert placement is not None
    assert is_equilibrium(make_clique(5), types, placement, JE_MDG).holds
    assert je_his_k2e(make_star(5), TypeProfile([0.0, 0.5, 0.7, 1.0])) is None
    with pytest.raises(InstanceError):
        je_his_k2e(make_path(3), types)


def test_je_his_k2e_one_empty_always_succeeds(rng):
    for _ in range(10):
        n = int(rng.integers(3, 15))
        graph = random_connected_graph(rng, n)
        types = TypeProfile(np.sort(rng.random(n - 1)))
        placement = je_his_k2e(graph, types)
        assert placement is not None
        assert is_equilibrium(graph, types, placement, JE_MDG).holds


def test_je_his_two_empty_cases(rng):
    cases = [
        make_path(7),
        make_star(6),  # residual star case: all agents isolated
        Graph(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2)]),  # triangle-star
        make_clique(6),
    ]
    for graph in cases:
        types = TypeProfile(np.sort(rng.random(graph.node_count - 2)))
        placement = je_his_two_empty(graph, types)
        assert placement.empty_count == 2
        assert is_equilibrium(graph, types, placement, JE_MDG).holds
    with pytest.raises(InstanceError):
        je_his_two_empty(make_path(7), TypeProfile([0.1, 0.2]))
