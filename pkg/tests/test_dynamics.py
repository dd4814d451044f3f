"""Improving-response dynamics, move enumeration, and the potentials."""

import io

import numpy as np
import pytest

from schelling_ct import (
    ADG,
    CG,
    HIS,
    JUMP,
    MDG,
    UIS,
    GameSpec,
    GameState,
    InstanceError,
    Jump,
    Placement,
    Swap,
    TypeProfile,
    agent_cost,
    fixture_by_name,
    lex_less,
    make_path,
    make_ring,
    make_torus,
    potential_edge_sum,
    potential_monochromatic,
    profitable_moves,
    run_dynamics,
    sorted_cost_vector,
)
from conftest import random_instance


def sorted_path_state(model=MDG, lam=None):
    types = TypeProfile([0.0, 0.5, 1.0])
    spec = GameSpec(model, lam=lam)
    return GameState(make_path(3), types, Placement([0, 1, 2], 3), spec)


def test_profitable_moves_empty_cases():
    same = TypeProfile([0.2] * 4)
    state = GameState(make_path(4), same, Placement([0, 1, 2, 3], 4), GameSpec(MDG))
    assert profitable_moves(state) == []
    fx = fixture_by_name("cg-poa-path")
    state = GameState(fx.graph, fx.types, fx.placement, fx.spec)
    assert profitable_moves(state) == []


def test_profitable_moves_finds_end_swap():
    types = TypeProfile([0.0, 0.0, 1.0, 1.0])
    alt = Placement([0, 2, 1, 3], 4)  # type sequence 0,1,0,1
    state = GameState(make_path(4), types, alt, GameSpec(MDG))
    assert profitable_moves(state) == [Swap(0, 3)]


def test_profitable_moves_jump_enumeration():
    types = TypeProfile([0.0, 0.1, 1.0])
    state = GameState(
        make_path(5), types, Placement([0, 2, 1], 5), GameSpec(MDG, JUMP, UIS)
    )
    moves = profitable_moves(state)
    assert all(isinstance(m, Jump) for m in moves)
    assert Jump(2, 3) in moves  # the high-type agent steps away from type 0


def test_run_dynamics_from_equilibrium():
    state = sorted_path_state()
    res = run_dynamics(state, seed=3)
    assert res.steps == 0 and res.converged


def test_run_dynamics_determinism_and_policies():
    rng = np.random.default_rng(5)
    graph, types, placement = random_instance(rng, 10, 10, extra_edges=6)
    results = []
    for _ in range(2):
        state = GameState(graph, types, placement, GameSpec(MDG))
        results.append(run_dynamics(state, policy="random", seed=11))
    assert results[0].placement == results[1].placement
    assert results[0].steps == results[1].steps
    for policy in ("first", "best"):
        state = GameState(graph, types, placement, GameSpec(MDG))
        res = run_dynamics(state, policy=policy, seed=0)
        assert res.converged
        assert profitable_moves(state) == []
    with pytest.raises(InstanceError):
        run_dynamics(sorted_path_state(), policy="greedy")


def test_run_dynamics_non_convergence_reported():
    fx = fixture_by_name("ring5-no-je-mdg")
    placement = Placement([0, 1, 2], 5)
    state = GameState(fx.graph, fx.types, placement, fx.spec)
    res = run_dynamics(state, seed=0, max_steps=1000)
    assert res.steps == 1000 and not res.converged


def test_run_dynamics_trace_format():
    rng = np.random.default_rng(9)
    graph, types, placement = random_instance(rng, 8, 8, extra_edges=4)
    state = GameState(graph, types, placement, GameSpec(MDG))
    buf = io.StringIO()
    res = run_dynamics(state, seed=1, trace_file=buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == res.steps
    for ln in lines:
        kind, a, b = ln.split()
        assert kind == "SWAP" and a != b


def test_cache_coherence_after_run(rng):
    for _ in range(5):
        graph, types, placement = random_instance(rng, 9, int(rng.integers(5, 10)))
        spec = GameSpec(CG, JUMP, HIS, lam=0.3)
        if types.n == graph.node_count:
            spec = GameSpec(CG, lam=0.3)
        state = GameState(graph, types, placement, spec)
        run_dynamics(state, seed=2)
        for a in range(types.n):
            assert state.costs[a] == agent_cost(
                state.graph, state.types, state.placement, spec, a
            )


def test_potential_edge_sum():
    same = TypeProfile([0.6] * 3)
    state = GameState(make_ring(3), same, Placement([0, 1, 2], 3), GameSpec(ADG))
    assert potential_edge_sum(state) == 0.0
    types = TypeProfile([0.0, 0.5, 1.0])
    state = GameState(make_ring(3), types, Placement([0, 1, 2], 3), GameSpec(ADG))
    assert potential_edge_sum(state) == 2.0
    # equals (degree / 2) times the social cost on a regular graph at full
    # occupancy; each of the degree-many distances enters one agent's mean
    cost = sum(
        agent_cost(state.graph, types, state.placement, state.spec, a)
        for a in range(3)
    )
    assert potential_edge_sum(state) == (2 / 2) * cost


def test_potential_edge_sum_decreases_on_torus():
    graph = make_torus(5, 5)
    rng = np.random.default_rng(21)
    types = TypeProfile(np.sort(rng.random(25)))
    placement = Placement(rng.permutation(25), 25)
    state = GameState(graph, types, placement, GameSpec(ADG))
    seen = []

    def watch(st, move):
        seen.append(potential_edge_sum(st))

    res = run_dynamics(state, seed=4, on_move=watch)
    assert res.converged and res.steps > 0
    seen.append(potential_edge_sum(state))
    assert all(b < a for a, b in zip(seen, seen[1:]))


def test_potential_monochromatic():
    types = TypeProfile([0.0, 0.5, 1.0])
    state = GameState(
        make_ring(3), types, Placement([0, 1, 2], 3), GameSpec(CG, lam=0.3)
    )
    assert potential_monochromatic(state) == 0
    close = TypeProfile([0.4, 0.5, 0.6])
    state = GameState(
        make_ring(3), close, Placement([0, 1, 2], 3), GameSpec(CG, lam=0.3)
    )
    assert potential_monochromatic(state) == 3  # all friends -> |E|
    bad = GameState(make_ring(3), close, Placement([0, 1, 2], 3), GameSpec(MDG))
    with pytest.raises(InstanceError):
        potential_monochromatic(bad)


def test_sorted_cost_vector():
    state = sorted_path_state()
    assert sorted_cost_vector(state) == (0.5, 0.5, 0.5)
    assert lex_less((0.5, 0.4), (0.5, 0.5))
    assert not lex_less((0.5, 0.5), (0.5, 0.5))


def test_swap_state_requires_full_occupancy():
    types = TypeProfile([0.1, 0.9])
    with pytest.raises(InstanceError):
        GameState(make_path(3), types, Placement([0, 1], 3), GameSpec(MDG))
