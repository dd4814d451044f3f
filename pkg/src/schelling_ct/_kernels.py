"""Jitted enumeration kernels backing the oracle.

Everything here works on flat arrays: CSR adjacency (indptr, indices),
sorted type-values t, and assignments node_of_agent / agent_of_node.  Cost
models are encoded as 0 = MDG, 1 = ADG, 2 = CG; iso_cost carries the
isolation variant (1.0 UIS, 0.0 HIS).
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODEL_MDG = 0
MODEL_ADG = 1
MODEL_CG = 2


@njit(cache=True)
def cost_at(indptr, indices, t, agent_of, a, v, model, lam, iso_cost):
    """Cost of agent a sitting on node v, ignoring any stale entry of a in
    agent_of (a is treated as absent from every other node)."""
    ta = t[a]
    cnt = 0
    acc = 0.0
    best = 0.0
    enemies = 0
    for k in range(indptr[v], indptr[v + 1]):
        occ = agent_of[indices[k]]
        if occ < 0 or occ == a:
            continue
        d = abs(ta - t[occ])
        cnt += 1
        if model == MODEL_MDG:
            if d > best:
                best = d
        elif model == MODEL_ADG:
            acc += d
        else:
            if d > lam:
                enemies += 1
    if cnt == 0:
        return iso_cost
    if model == MODEL_MDG:
        return best
    if model == MODEL_ADG:
        return acc / cnt
    return enemies / cnt


@njit(cache=True)
def swap_cost(indptr, indices, t, node_of, agent_of, a, b, model, lam, iso_cost):
    """Cost of agent a at b's node after a and b exchange nodes."""
    ta = t[a]
    va = node_of[a]
    vb = node_of[b]
    cnt = 0
    acc = 0.0
    best = 0.0
    enemies = 0
    for k in range(indptr[vb], indptr[vb + 1]):
        w = indices[k]
        if w == va:
            occ = b
        else:
            occ = agent_of[w]
        if occ < 0 or occ == a:
            continue
        d = abs(ta - t[occ])
        cnt += 1
        if model == MODEL_MDG:
            if d > best:
                best = d
        elif model == MODEL_ADG:
            acc += d
        else:
            if d > lam:
                enemies += 1
    if cnt == 0:
        return iso_cost
    if model == MODEL_MDG:
        return best
    if model == MODEL_ADG:
        return acc / cnt
    return enemies / cnt


@njit(cache=True)
def social_cost_arrays(indptr, indices, t, node_of, agent_of, model, lam, iso_cost):
    total = 0.0
    for a in range(t.size):
        total += cost_at(indptr, indices, t, agent_of, a, node_of[a], model, lam, iso_cost)
    return total


@njit(cache=True)
def max_edge_cost_arrays(indptr, indices, t, agent_of):
    best = -1.0
    n_nodes = indptr.size - 1
    for u in range(n_nodes):
        a = agent_of[u]
        if a < 0:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if v <= u:
                continue
            b = agent_of[v]
            if b < 0:
                continue
            d = abs(t[a] - t[b])
            if d > best:
                best = d
    if best < 0.0:
        return 1.0
    return best


@njit(cache=True)
def has_profitable_move(
    indptr, indices, t, node_of, agent_of, model, lam, iso_cost, is_swap
):
    """Exhaustive deviation scan.  Returns (found, x, y): a profitable swap
    (agents x, y) or jump (agent x to node y)."""
    n = t.size
    n_nodes = indptr.size - 1
    cost = np.empty(n)
    for a in range(n):
        cost[a] = cost_at(indptr, indices, t, agent_of, a, node_of[a], model, lam, iso_cost)
    if is_swap:
        for i in range(n):
            for j in range(i + 1, n):
                ci = swap_cost(indptr, indices, t, node_of, agent_of, i, j, model, lam, iso_cost)
                if ci < cost[i]:
                    cj = swap_cost(indptr, indices, t, node_of, agent_of, j, i, model, lam, iso_cost)
                    if cj < cost[j]:
                        return True, i, j
    else:
        for v in range(n_nodes):
            if agent_of[v] >= 0:
                continue
            for a in range(n):
                ca = cost_at(indptr, indices, t, agent_of, a, v, model, lam, iso_cost)
                if ca < cost[a]:
                    return True, a, v
    return False, -1, -1


@njit(cache=True)
def brute_force_optimum(indptr, indices, t, n_nodes, model, lam, iso_cost):
    """Exact social-cost minimizer over all injective placements.

    Backtracking over agents in index order and nodes in index order, with an
    admissible partial lower bound (per-agent max / degree-scaled sum /
    degree-scaled enemy count over already-placed neighbors).  The ascending
    enumeration plus strict improvement makes the reported minimizer the
    lexicographically smallest one.  Returns (assignment, cost, leaves).
    """
    n = t.size
    node_of = np.full(n, -1, np.int64)
    agent_of = np.full(n_nodes, -1, np.int64)
    choice = np.zeros(n, np.int64)

    maxdeg = 0
    for v in range(n_nodes):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d

    # per-agent partial statistics and per-depth undo buffers
    stat = np.zeros(n)  # curmax (MDG), cursum (ADG), enemy count (CG)
    contrib = np.zeros(n)  # stat translated to a cost lower bound
    undo_agent = np.full((n, maxdeg), -1, np.int64)
    undo_stat = np.zeros((n, maxdeg))
    undo_cnt = np.zeros(n, np.int64)
    bound = 0.0

    best_cost = np.inf
    best = np.full(n, -1, np.int64)
    leaves = 0

    depth = 0
    while depth >= 0:
        # undo the previous assignment at this depth, if any
        if node_of[depth] >= 0:
            v = node_of[depth]
            agent_of[v] = -1
            node_of[depth] = -1
            for k in range(undo_cnt[depth] - 1, -1, -1):
                w = undo_agent[depth, k]
                deg_w = indptr[node_of[w] + 1] - indptr[node_of[w]]
                old = undo_stat[depth, k]
                if model == MODEL_MDG:
                    bound -= stat[w] - old
                    contrib[w] = old
                elif model == MODEL_ADG:
                    bound -= (stat[w] - old) / deg_w
                    contrib[w] = old / deg_w
                else:
                    bound -= (stat[w] - old) / deg_w
                    contrib[w] = old / deg_w
                stat[w] = old
            undo_cnt[depth] = 0
            bound -= contrib[depth]
            stat[depth] = 0.0
            contrib[depth] = 0.0

        v = choice[depth]
        if v >= n_nodes:
            choice[depth] = 0
            depth -= 1
            continue
        choice[depth] = v + 1
        if agent_of[v] >= 0:
            continue

        # tentatively place agent `depth` on node v
        node_of[depth] = v
        agent_of[v] = depth
        deg_v = indptr[v + 1] - indptr[v]
        my = 0.0
        cnt = 0
        for k in range(indptr[v], indptr[v + 1]):
            occ = agent_of[indices[k]]
            if occ < 0 or occ == depth:
                continue
            d = abs(t[depth] - t[occ])
            deg_occ = indptr[node_of[occ] + 1] - indptr[node_of[occ]]
            undo_agent[depth, cnt] = occ
            undo_stat[depth, cnt] = stat[occ]
            cnt += 1
            if model == MODEL_MDG:
                if d > stat[occ]:
                    bound += d - stat[occ]
                    stat[occ] = d
                    contrib[occ] = d
                if d > my:
                    my = d
            elif model == MODEL_ADG:
                bound += d / deg_occ
                stat[occ] += d
                contrib[occ] = stat[occ] / deg_occ
                my += d
            else:
                if d > lam:
                    bound += 1.0 / deg_occ
                    stat[occ] += 1.0
                    contrib[occ] = stat[occ] / deg_occ
                    my += 1.0
        undo_cnt[depth] = cnt
        stat[depth] = my
        if model == MODEL_MDG:
            contrib[depth] = my
        else:
            contrib[depth] = my / deg_v
        bound += contrib[depth]

        if bound >= best_cost:
            continue  # the undo block above will retract this placement
        if depth == n - 1:
            leaves += 1
            c = social_cost_arrays(indptr, indices, t, node_of, agent_of, model, lam, iso_cost)
            if c < best_cost:
                best_cost = c
                best[:] = node_of
            continue
        depth += 1

    return best, best_cost, leaves


@njit(cache=True)
def min_maxedge(indptr, indices, t, n_nodes):
    """Exact minimizer of the maximum occupied-edge type-distance."""
    n = t.size
    node_of = np.full(n, -1, np.int64)
    agent_of = np.full(n_nodes, -1, np.int64)
    choice = np.zeros(n, np.int64)
    prevmax = np.zeros(n)
    curmax = 0.0
    best_val = np.inf
    best = np.full(n, -1, np.int64)
    leaves = 0

    depth = 0
    while depth >= 0:
        if node_of[depth] >= 0:
            agent_of[node_of[depth]] = -1
            node_of[depth] = -1
            curmax = prevmax[depth]
        v = choice[depth]
        if v >= n_nodes:
            choice[depth] = 0
            depth -= 1
            continue
        choice[depth] = v + 1
        if agent_of[v] >= 0:
            continue
        node_of[depth] = v
        agent_of[v] = depth
        prevmax[depth] = curmax
        for k in range(indptr[v], indptr[v + 1]):
            occ = agent_of[indices[k]]
            if occ >= 0 and occ != depth:
                d = abs(t[depth] - t[occ])
                if d > curmax:
                    curmax = d
        if curmax >= best_val:
            continue
        if depth == n - 1:
            leaves += 1
            val = max_edge_cost_arrays(indptr, indices, t, agent_of)
            if val < best_val:
                best_val = val
                best[:] = node_of
            continue
        depth += 1

    if not np.isfinite(best_val):
        # every complete placement was pruned at best_val = inf: impossible,
        # but fall through defensively
        best_val = 1.0
    return best, best_val, leaves


@njit(cache=True)
def scan_placements_for_equilibria(
    indptr, indices, t, n_nodes, model, lam, iso_cost, is_swap, stop_at_first
):
    """Enumerate every injective placement and test it for equilibrium.

    Returns (found_any, best_assign, best_cost, worst_assign, worst_cost,
    eq_count, visited).  With stop_at_first, stops at the first equilibrium
    (best == worst == that one).
    """
    n = t.size
    node_of = np.full(n, -1, np.int64)
    agent_of = np.full(n_nodes, -1, np.int64)
    choice = np.zeros(n, np.int64)
    best = np.full(n, -1, np.int64)
    worst = np.full(n, -1, np.int64)
    best_cost = np.inf
    worst_cost = -np.inf
    eq_count = 0
    visited = 0

    depth = 0
    while depth >= 0:
        if node_of[depth] >= 0:
            agent_of[node_of[depth]] = -1
            node_of[depth] = -1
        v = choice[depth]
        if v >= n_nodes:
            choice[depth] = 0
            depth -= 1
            continue
        choice[depth] = v + 1
        if agent_of[v] >= 0:
            continue
        node_of[depth] = v
        agent_of[v] = depth
        if depth == n - 1:
            visited += 1
            found, _, _ = has_profitable_move(
                indptr, indices, t, node_of, agent_of, model, lam, iso_cost, is_swap
            )
            if not found:
                eq_count += 1
                c = social_cost_arrays(
                    indptr, indices, t, node_of, agent_of, model, lam, iso_cost
                )
                if c < best_cost:
                    best_cost = c
                    best[:] = node_of
                if c > worst_cost:
                    worst_cost = c
                    worst[:] = node_of
                if stop_at_first:
                    return True, best, best_cost, worst, worst_cost, eq_count, visited
            continue
        depth += 1

    return eq_count > 0, best, best_cost, worst, worst_cost, eq_count, visited
