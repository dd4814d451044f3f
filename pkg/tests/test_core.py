"""Cost definitions, moves, placements, and the instance file format."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schelling_ct import (
    ADG,
    CG,
    HIS,
    JUMP,
    MDG,
    UIS,
    GameSpec,
    Graph,
    InstanceError,
    Jump,
    Placement,
    Swap,
    TypeProfile,
    agent_cost,
    apply_move,
    format_instance,
    is_profitable,
    make_path,
    make_star,
    max_edge_cost,
    parse_instance,
    social_cost,
)
from conftest import random_instance

PATH3 = make_path(3)
T3 = TypeProfile([0.0, 0.5, 1.0])
SORTED3 = Placement([0, 1, 2], 3)


def test_graph_validation():
    with pytest.raises(InstanceError):
        Graph(2, [(0, 0)])
    with pytest.raises(InstanceError):
        Graph(2, [(0, 5)])
    with pytest.raises(InstanceError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(InstanceError):
        Graph(4, [(0, 1), (2, 3)])  # disconnected
    g = Graph(1, [])
    assert g.node_count == 1 and g.edge_count == 0


def test_type_profile_validation():
    with pytest.raises(InstanceError):
        TypeProfile([0.5, 0.2])
    with pytest.raises(InstanceError):
        TypeProfile([-0.1, 0.5])
    with pytest.raises(InstanceError):
        TypeProfile([0.1, 1.5])
    prof, order = TypeProfile.from_unsorted([0.9, 0.1, 0.5])
    assert prof.values.tolist() == [0.1, 0.5, 0.9]
    assert order.tolist() == [1, 2, 0]


def test_game_spec_validation_and_labels():
    with pytest.raises(InstanceError):
        GameSpec(CG)  # missing lam
    with pytest.raises(InstanceError):
        GameSpec(MDG, lam=0.3)
    with pytest.raises(InstanceError):
        GameSpec("xdg")
    assert GameSpec(MDG).label() == "S-MDG"
    assert GameSpec(ADG, JUMP, UIS).label() == "J-UIS-ADG"
    assert GameSpec(CG, JUMP, HIS, lam=0.1).label() == "J-HIS-CG(0.1)"
    assert GameSpec(MDG).isolation_cost == 1.0
    assert GameSpec(MDG, JUMP, HIS).isolation_cost == 0.0


def test_agent_cost_middle_of_sorted_path():
    assert agent_cost(PATH3, T3, SORTED3, GameSpec(MDG), 1) == 0.5
    assert agent_cost(PATH3, T3, SORTED3, GameSpec(ADG), 1) == 0.5
    # boundary: distance exactly lam counts as a friend
    assert agent_cost(PATH3, T3, SORTED3, GameSpec(CG, lam=0.4), 1) == 1.0
    assert agent_cost(PATH3, T3, SORTED3, GameSpec(CG, lam=0.5), 1) == 0.0


def test_agent_cost_isolation():
    two_ends = Placement([0, 2], 3)
    types = TypeProfile([0.2, 0.8])
    for a in (0, 1):
        assert agent_cost(PATH3, types, two_ends, GameSpec(MDG, JUMP, UIS), a) == 1.0
        assert agent_cost(PATH3, types, two_ends, GameSpec(MDG, JUMP, HIS), a) == 0.0


def test_agent_cost_errors():
    with pytest.raises(InstanceError):
        agent_cost(PATH3, T3, SORTED3, GameSpec(MDG), 3)
    with pytest.raises(InstanceError):
        agent_cost(make_path(4), T3, SORTED3, GameSpec(MDG), 0)


def pattern_placement_0011(n):
    """Type pattern 0,0,1,1,... along an n-path, agents sorted by type."""
    node_of = np.empty(n, dtype=np.int64)
    zeros = iter(range(n // 2))
    ones = iter(range(n // 2, n))
    for k in range(n):
        node_of[next(zeros) if k % 4 in (0, 1) else next(ones)] = k
    return Placement(node_of, n)


def test_social_cost_examples():
    assert social_cost(PATH3, T3, SORTED3, GameSpec(MDG)) == 1.5
    types8 = TypeProfile([0.0] * 4 + [1.0] * 4)
    placement = pattern_placement_0011(8)
    assert social_cost(make_path(8), types8, placement, GameSpec(MDG)) == 6.0
    same = TypeProfile([0.3] * 3)
    assert social_cost(PATH3, same, SORTED3, GameSpec(ADG)) == 0.0


def test_max_edge_cost():
    assert max_edge_cost(PATH3, T3, SORTED3) == 0.5
    star = make_star(3)
    same = TypeProfile([0.7] * 4)
    assert max_edge_cost(star, same, Placement([0, 1, 2, 3], 4)) == 0.0
    # no two agents adjacent -> definitional 1
    assert max_edge_cost(PATH3, TypeProfile([0.2]), Placement([0], 3)) == 1.0


def test_is_profitable_examples():
    types8 = TypeProfile([0.0] * 4 + [1.0] * 4)
    placement = pattern_placement_0011(8)
    spec = GameSpec(MDG)
    g8 = make_path(8)
    for i in range(8):
        for j in range(i + 1, 8):
            assert not is_profitable(g8, types8, placement, spec, Swap(i, j))
    # zero-cost profile admits nothing
    same = TypeProfile([0.4] * 3)
    assert not is_profitable(PATH3, same, SORTED3, spec, Swap(0, 2))
    # alternating types on a 4-path: the end agents join their own kind,
    # both dropping from 1 to 0
    types4 = TypeProfile([0.0, 0.0, 1.0, 1.0])
    alt = Placement([0, 2, 1, 3], 4)
    assert is_profitable(make_path(4), types4, alt, spec, Swap(0, 3))
    assert not is_profitable(make_path(4), types4, alt, spec, Swap(1, 2))


def test_apply_move():
    after = apply_move(SORTED3, Swap(1, 2))
    assert after.node_of_agent.tolist() == [0, 2, 1]
    assert apply_move(after, Swap(1, 2)) == SORTED3  # involution
    two = Placement([0, 1], 3)
    jumped = apply_move(two, Jump(0, 2))
    assert jumped.node_of_agent.tolist() == [2, 1]
    assert two.node_of_agent.tolist() == [0, 1]  # original untouched
    with pytest.raises(InstanceError):
        apply_move(two, Jump(0, 1))  # occupied target
    with pytest.raises(InstanceError):
        Swap(1, 1)


def test_placement_validation():
    with pytest.raises(InstanceError):
        Placement([0, 0], 3)
    with pytest.raises(InstanceError):
        Placement([0, 3], 3)
    with pytest.raises(InstanceError):
        Placement([0, 1, 2, 3], 3)
    p = Placement([2, 0], 4)
    assert p.empty_count == 2
    assert p.empty_nodes() == [1, 3]


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_agent_cost_in_unit_interval(seed):
    rng = np.random.default_rng(seed)
    graph, types, placement = random_instance(rng, 8, int(rng.integers(2, 9)))
    specs = [
        GameSpec(MDG, JUMP, UIS),
        GameSpec(ADG, JUMP, HIS),
        GameSpec(CG, JUMP, UIS, lam=float(rng.random())),
    ]
    for spec in specs:
        for a in range(types.n):
            assert 0.0 <= agent_cost(graph, types, placement, spec, a) <= 1.0


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_mdg_social_cost_spans_type_range(seed):
    # with every node occupied, some path connects the extreme agents, so
    # the per-edge maxima along it sum to at least the full type range
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    graph, types, placement = random_instance(rng, n, n)
    cost = social_cost(graph, types, placement, GameSpec(MDG))
    assert cost >= float(types.values[-1] - types.values[0]) - 1e-12


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_inverse_maps_stay_consistent(seed):
    rng = np.random.default_rng(seed)
    n_nodes, n_agents = 8, 5
    _, _, placement = random_instance(rng, n_nodes, n_agents)
    for _ in range(20):
        if rng.random() < 0.5:
            i, j = (int(x) for x in rng.choice(n_agents, 2, replace=False))
            placement.apply_inplace(Swap(i, j))
        else:
            a = int(rng.integers(n_agents))
            placement.apply_inplace(Jump(a, placement.empty_nodes()[0]))
        for a in range(n_agents):
            assert placement.agent_of_node[placement.node_of_agent[a]] == a
        assert (placement.agent_of_node >= 0).sum() == n_agents


def test_instance_round_trip():
    text = format_instance(PATH3, T3, SORTED3)
    inst = parse_instance(text)
    assert inst.graph.edges == PATH3.edges
    assert inst.types.values.tolist() == T3.values.tolist()
    assert inst.placement == SORTED3


def test_instance_unsorted_types_warn_and_remap():
    text = "3 2 3\n0 1\n1 2\n1.0 0.0 0.5\n0 1 2\n"
    with pytest.warns(UserWarning):
        inst = parse_instance(text)
    assert inst.types.values.tolist() == [0.0, 0.5, 1.0]
    # sorted agent k keeps the node of its original position
    assert inst.placement.node_of_agent.tolist() == [1, 2, 0]


def test_instance_parse_errors():
    with pytest.raises(InstanceError):
        parse_instance("")
    with pytest.raises(InstanceError):
        parse_instance("3 2\n0 1\n1 2\n0 0.5 1\n")
    with pytest.raises(InstanceError):
        parse_instance("3 2 3\n0 1\n1 2\n0.0 0.5\n")
    with pytest.raises(InstanceError):
        parse_instance("3 2 2\n0 1\n1 2\n0.0 0.5\n0 5\n")


def test_social_cost_is_finite_sum():
    graph, types, placement = random_instance(np.random.default_rng(7), 9, 9)
    for spec in (GameSpec(MDG), GameSpec(ADG), GameSpec(CG, lam=0.3)):
        total = social_cost(graph, types, placement, spec)
        parts = sum(agent_cost(graph, types, placement, spec, a) for a in range(9))
        assert math.isclose(total, parts, rel_tol=0, abs_tol=1e-12)
