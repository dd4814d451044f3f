"""Incremental swap-dynamics kernel.

The profitable-pair set is kept exact in indexed arrays; after each swap only
pairs involving occupants of the two touched closed neighborhoods are
re-evaluated.  Per-node aggregates over neighbor-occupant types (extreme two
values with the extreme agent, sum, count) give O(1) lower bounds on a
mover's hypothetical cost, so most candidate pairs are rejected without
touching the adjacency lists.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._kernels import MODEL_ADG, MODEL_MDG, cost_at, swap_cost

_HI = 2.0
_LO = -1.0


@njit(cache=True, inline="always")
def _recompute_agg(indptr, indices, t, agent_of, v, mn1, mx1, cnt, tsum):
    lo = _HI
    hi = _LO
    c = 0
    s = 0.0
    for k in range(indptr[v], indptr[v + 1]):
        occ = agent_of[indices[k]]
        if occ < 0:
            continue
        x = t[occ]
        c += 1
        s += x
        if x < lo:
            lo = x
        if x > hi:
            hi = x
    mn1[v] = lo
    mx1[v] = hi
    cnt[v] = c
    tsum[v] = s


@njit(cache=True, inline="always")
def _mdg_reject(ta, mn, mx, c):
    """True when the max-distance cost of type ta placed next to occupant
    types spanning [mn, mx] is certainly >= c.  Distances to the mover
    itself are zero, so the unexcluded extremes stay a valid lower bound."""
    return ta - mn >= c or mx - ta >= c


@njit(cache=True, inline="always")
def _adg_reject(ta, s, k, c):
    """True when the average-distance cost of type ta is certainly >= c,
    from the occupant-type sum s and count k (avg distance >= |mean - ta|;
    both with and without the mover in the aggregate must clear the bar)."""
    if k <= 1:
        return False
    lb1 = abs(k * ta - s) / (k + 1)
    lb2 = abs((k - 1) * ta - (s - ta)) / k
    return lb1 >= c and lb2 >= c


@njit(cache=True, inline="always")
def _partner_ok(indptr, indices, t, node_of, agent_of, cur, mn1, mx1, cnt,
                tsum, model, lam, iso_cost, d, x):
    """Exact profitability of the swap (d, x), cheap rejections first."""
    cd = cur[d]
    cx = cur[x]
    if cd <= 0.0 or cx <= 0.0:
        return False
    vd = node_of[d]
    vx = node_of[x]
    if model == MODEL_MDG:
        if _mdg_reject(t[x], mn1[vd], mx1[vd], cx):
            return False
        if _mdg_reject(t[d], mn1[vx], mx1[vx], cd):
            return False
    elif model == MODEL_ADG:
        if _adg_reject(t[x], tsum[vd], cnt[vd], cx):
            return False
        if _adg_reject(t[d], tsum[vx], cnt[vx], cd):
            return False
    return (
        swap_cost(indptr, indices, t, node_of, agent_of, d, x, model, lam,
                  iso_cost) < cd
        and swap_cost(indptr, indices, t, node_of, agent_of, x, d, model,
                      lam, iso_cost) < cx
    )


@njit(cache=True)
def swap_dynamics(
    indptr, indices, t, node_of, agent_of, model, lam, iso_cost, seed, max_steps,
    agent_first,
):
    """Randomized profitable swaps until none is left.

    agent_first = True draws a uniform agent among those with a profitable
    swap, then a uniform profitable partner; False draws uniformly over all
    profitable pairs.

    Deletion is lazy: the list may hold pairs that stopped being profitable,
    and they are dropped when drawn (each draw is re-verified exactly), so the
    accepted draw is uniform over the currently profitable pairs.  The list
    always contains every profitable pair, so an empty list certifies
    convergence.  The lazy scheme keeps the hot re-scan loop free of lookups
    in the large pair-index matrix."""
    np.random.seed(seed)
    n = t.size
    n_nodes = indptr.size - 1
    cur = np.empty(n)
    for a in range(n):
        cur[a] = cost_at(indptr, indices, t, agent_of, a, node_of[a], model, lam, iso_cost)

    mn1 = np.empty(n_nodes)
    mx1 = np.empty(n_nodes)
    cnt = np.empty(n_nodes, np.int64)
    tsum = np.empty(n_nodes)
    for v in range(n_nodes):
        _recompute_agg(indptr, indices, t, agent_of, v, mn1, mx1, cnt, tsum)

    cap = n * (n - 1) // 2 + 1
    moves_i = np.empty(cap, np.int32)
    moves_j = np.empty(cap, np.int32)
    pos = np.full((n, n), -1, np.int32)
    # listed pairs per agent; zero certifies no profitable swap for the
    # agent, so agent-first draws skip it without a partner scan
    acount = np.zeros(n, np.int64)
    m = 0
    for i in range(n):
        ci = cur[i]
        if ci <= 0.0:
            continue
        ti_ = t[i]
        vi = node_of[i]
        mn_i = mn1[vi]
        mx_i = mx1[vi]
        s_i = tsum[vi]
        c_i = cnt[vi]
        for j in range(i + 1, n):
            cj = cur[j]
            if cj <= 0.0:
                continue
            tj = t[j]
            if model == MODEL_MDG:
                if _mdg_reject(tj, mn_i, mx_i, cj):
                    continue
                vj = node_of[j]
                if _mdg_reject(ti_, mn1[vj], mx1[vj], ci):
                    continue
            elif model == MODEL_ADG:
                if _adg_reject(tj, s_i, c_i, cj):
                    continue
                vj = node_of[j]
                if _adg_reject(ti_, tsum[vj], cnt[vj], ci):
                    continue
            if (
                swap_cost(indptr, indices, t, node_of, agent_of, i, j, model,
                          lam, iso_cost) < ci
                and swap_cost(indptr, indices, t, node_of, agent_of, j, i,
                              model, lam, iso_cost) < cj
            ):
                moves_i[m] = i
                moves_j[m] = j
                pos[i, j] = m
                acount[i] += 1
                acount[j] += 1
                m += 1

    dirty = np.empty(n, np.int64)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n_nodes, np.int64)
    tmark = np.zeros(n_nodes, np.uint8)
    partners = np.empty(n, np.int64)
    steps = 0
    while m > 0 and steps < max_steps:
        # draw until a still-profitable pair comes up; stale entries are
        # evicted as they are hit
        i = np.int64(-1)
        j = np.int64(-1)
        while m > 0:
            k = np.random.randint(m)
            a = np.int64(moves_i[k])
            b = np.int64(moves_j[k])
            if _partner_ok(indptr, indices, t, node_of, agent_of, cur, mn1,
                           mx1, cnt, tsum, model, lam, iso_cost, a, b):
                i = a
                j = b
                break
            m -= 1
            if k != m:
                li = moves_i[m]
                lj = moves_j[m]
                moves_i[k] = li
                moves_j[k] = lj
                pos[li, lj] = k
            pos[a, b] = -1
            acount[a] -= 1
            acount[b] -= 1
        if i < 0:
            break
        if agent_first:
            # some profitable swap exists; redraw as uniform agent, then
            # uniform profitable partner
            while True:
                a = np.int64(np.random.randint(n))
                if acount[a] == 0:
                    continue
                np_ = 0
                for x in range(n):
                    if x != a and _partner_ok(indptr, indices, t, node_of,
                                              agent_of, cur, mn1, mx1, cnt,
                                              tsum, model, lam, iso_cost,
                                              a, x):
                        partners[np_] = x
                        np_ += 1
                if np_ > 0:
                    i = a
                    j = partners[np.random.randint(np_)]
                    break
        u = node_of[i]
        v = node_of[j]
        node_of[i] = v
        node_of[j] = u
        agent_of[u] = j
        agent_of[v] = i
        steps += 1

        nt = 0
        nd = 0
        for node in (u, v):
            occ = agent_of[node]
            if occ >= 0 and mark[occ] == 0:
                mark[occ] = 1
                dirty[nd] = occ
                nd += 1
            for kk in range(indptr[node], indptr[node + 1]):
                w = indices[kk]
                if tmark[w] == 0:
                    tmark[w] = 1
                    touched[nt] = w
                    nt += 1
                occ = agent_of[w]
                if occ >= 0 and mark[occ] == 0:
                    mark[occ] = 1
                    dirty[nd] = occ
                    nd += 1
        for ti_ in range(nt):
            w = touched[ti_]
            _recompute_agg(indptr, indices, t, agent_of, w, mn1, mx1, cnt, tsum)
            tmark[w] = 0
        for di in range(nd):
            d = dirty[di]
            cur[d] = cost_at(
                indptr, indices, t, agent_of, d, node_of[d], model, lam, iso_cost
            )

        # additions only; pairs that stopped being profitable stay listed
        # until a draw evicts them
        for di in range(nd):
            d = dirty[di]
            cd = cur[d]
            if cd <= 0.0:
                continue
            td = t[d]
            vd = node_of[d]
            mn_d = mn1[vd]
            mx_d = mx1[vd]
            s_d = tsum[vd]
            c_d = cnt[vd]
            for x in range(n):
                if x == d:
                    continue
                if mark[x] == 1 and x < d:
                    continue
                cx = cur[x]
                if cx <= 0.0:
                    continue
                tx = t[x]
                if model == MODEL_MDG:
                    if _mdg_reject(tx, mn_d, mx_d, cx):
                        continue
                    vx = node_of[x]
                    if _mdg_reject(td, mn1[vx], mx1[vx], cd):
                        continue
                elif model == MODEL_ADG:
                    if _adg_reject(tx, s_d, c_d, cx):
                        continue
                    vx = node_of[x]
                    if _adg_reject(td, tsum[vx], cnt[vx], cd):
                        continue
                if (
                    swap_cost(indptr, indices, t, node_of, agent_of,
                              d, x, model, lam, iso_cost) >= cd
                    or swap_cost(indptr, indices, t, node_of, agent_of,
                                 x, d, model, lam, iso_cost) >= cx
                ):
                    continue
                lo = d if d < x else x
                hi = x if d < x else d
                if pos[lo, hi] < 0:
                    moves_i[m] = lo
                    moves_j[m] = hi
                    pos[lo, hi] = m
                    acount[lo] += 1
                    acount[hi] += 1
                    m += 1
        for di in range(nd):
            mark[dirty[di]] = 0
    return steps, m == 0
