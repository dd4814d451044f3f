"""Shared test helpers: random instances with a fixed RNG."""

import numpy as np
import pytest

from schelling_ct import Graph, Placement, TypeProfile


def random_connected_graph(rng, n, extra_edges=None):
    """Random spanning tree plus extra random edges; always connected."""
    edges = set()
    order = rng.permutation(n)
    for k in range(1, n):
        u = int(order[k])
        v = int(order[rng.integers(k)])
        edges.add((min(u, v), max(u, v)))
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n))
    for _ in range(extra_edges):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        edges.add((min(u, v), max(u, v)))
    return Graph(n, edges)


def random_instance(rng, n_nodes, n_agents, extra_edges=None):
    """Random graph, sorted uniform types, uniform injective placement."""
    graph = random_connected_graph(rng, n_nodes, extra_edges)
    types = TypeProfile(np.sort(rng.random(n_agents)))
    nodes = rng.permutation(n_nodes)[:n_agents]
    return graph, types, Placement(nodes, n_nodes)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
