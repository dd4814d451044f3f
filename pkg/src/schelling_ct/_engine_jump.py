"""Incremental jump-dynamics kernel.

Separated from the swap kernel for readability; see engine.py for the
maintained-move-set design notes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._kernels import cost_at


@njit(cache=True, inline="always")
def _set_move(good, x, w, moves_a, moves_v, pos, cnt, active, apos, m, nact):
    """Insert or delete the move (x -> w); keeps the per-agent counts and the
    active-agent set in sync.  Returns the updated (m, nact)."""
    p = pos[x, w]
    if good and p < 0:
        moves_a[m] = x
        moves_v[m] = w
        pos[x, w] = m
        m += 1
        cnt[x] += 1
        if cnt[x] == 1:
            apos[x] = nact
            active[nact] = x
            nact += 1
    elif not good and p >= 0:
        m -= 1
        if p != m:
            la = moves_a[m]
            lv = moves_v[m]
            moves_a[p] = la
            moves_v[p] = lv
            pos[la, lv] = p
        pos[x, w] = -1
        cnt[x] -= 1
        if cnt[x] == 0:
            nact -= 1
            ap = apos[x]
            if ap != nact:
                lx = active[nact]
                active[ap] = lx
                apos[lx] = ap
            apos[x] = -1
    return m, nact


@njit(cache=True)
def jump_dynamics(
    indptr, indices, t, node_of, agent_of, model, lam, iso_cost, seed, max_steps,
    agent_first,
):
    """Randomized improving jumps until none is left.

    agent_first = True samples a uniform agent among those with a profitable
    jump, then a uniform profitable target; False samples uniformly over all
    profitable (agent, target) pairs.
    """
    np.random.seed(seed)
    n = t.size
    n_nodes = indptr.size - 1
    cur = np.empty(n)
    for a in range(n):
        cur[a] = cost_at(indptr, indices, t, agent_of, a, node_of[a], model, lam, iso_cost)

    n_empty = n_nodes - n
    empties = np.empty(max(n_empty, 1), np.int64)
    ne = 0
    for v in range(n_nodes):
        if agent_of[v] < 0:
            empties[ne] = v
            ne += 1

    cap = n * n_empty + 1
    moves_a = np.empty(cap, np.int32)
    moves_v = np.empty(cap, np.int32)
    pos = np.full((n, n_nodes), -1, np.int32)
    cnt = np.zeros(n, np.int32)
    active = np.empty(n, np.int32)
    apos = np.full(n, -1, np.int32)
    m = 0
    nact = 0
    for a in range(n):
        for ei in range(n_empty):
            v = empties[ei]
            good = (
                cost_at(indptr, indices, t, agent_of, a, v, model, lam, iso_cost)
                < cur[a]
            )
            if good:
                m, nact = _set_move(True, a, v, moves_a, moves_v, pos, cnt,
                                    active, apos, m, nact)

    dirty = np.empty(n, np.int64)
    mark = np.zeros(n, np.uint8)
    dnodes = np.empty(n_nodes, np.int64)
    nmark = np.zeros(n_nodes, np.uint8)
    steps = 0
    while m > 0 and steps < max_steps:
        if agent_first:
            a = np.int64(active[np.random.randint(nact)])
            r = np.random.randint(cnt[a])
            v = np.int64(-1)
            for ei in range(n_empty):
                w = empties[ei]
                if pos[a, w] >= 0:
                    if r == 0:
                        v = w
                        break
                    r -= 1
        else:
            k = np.random.randint(m)
            a = np.int64(moves_a[k])
            v = np.int64(moves_v[k])
        u = node_of[a]
        node_of[a] = v
        agent_of[u] = -1
        agent_of[v] = a
        steps += 1
        for ei in range(n_empty):
            if empties[ei] == v:
                empties[ei] = u
                break

        # the newly occupied node is no longer a jump target for anyone
        for x in range(n):
            if pos[x, v] >= 0:
                m, nact = _set_move(False, x, v, moves_a, moves_v, pos, cnt,
                                    active, apos, m, nact)

        nd = 0
        nn = 0
        for node in (u, v):
            occ = agent_of[node]
            if occ >= 0 and mark[occ] == 0:
                mark[occ] = 1
                dirty[nd] = occ
                nd += 1
            for kk in range(indptr[node], indptr[node + 1]):
                w = indices[kk]
                occ = agent_of[w]
                if occ >= 0:
                    if mark[occ] == 0:
                        mark[occ] = 1
                        dirty[nd] = occ
                        nd += 1
                elif nmark[w] == 0 and w != u:
                    nmark[w] = 1
                    dnodes[nn] = w
                    nn += 1
        if nmark[u] == 0:
            nmark[u] = 1
            dnodes[nn] = u
            nn += 1

        for di in range(nd):
            d = dirty[di]
            cur[d] = cost_at(
                indptr, indices, t, agent_of, d, node_of[d], model, lam, iso_cost
            )

        # full columns for the vacated node and empty nodes near the move
        for wi in range(nn):
            w = dnodes[wi]
            for x in range(n):
                good = (
                    cost_at(indptr, indices, t, agent_of, x, w, model, lam, iso_cost)
                    < cur[x]
                )
                m, nact = _set_move(good, x, w, moves_a, moves_v, pos, cnt,
                                    active, apos, m, nact)

        # full rows for agents whose own cost changed
        for di in range(nd):
            d = dirty[di]
            for ei in range(n_empty):
                w = empties[ei]
                if nmark[w] == 1:
                    continue
                good = (
                    cost_at(indptr, indices, t, agent_of, d, w, model, lam, iso_cost)
                    < cur[d]
                )
                m, nact = _set_move(good, d, w, moves_a, moves_v, pos, cnt,
                                    active, apos, m, nact)

        for di in range(nd):
            mark[dirty[di]] = 0
        for wi in range(nn):
            nmark[dnodes[wi]] = 0
    return steps, m == 0
