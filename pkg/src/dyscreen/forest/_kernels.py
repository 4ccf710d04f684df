"""Compiled kernels for decision-tree growth and prediction.

Everything here is deterministic: feature draws come from a splitmix64
stream seeded per tree, partitions are stable, and split ties break toward
the lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, nogil=True)
def _mix64(state):
    """One splitmix64 step; returns (next_state, output)."""
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, nogil=True)
def _scan_feature(
    X, y, w, samples, start, end, f, wt, wp, parent_gini, vals, best_gain, best_f, best_t
):
    """Try every threshold of feature f on samples[start:end]; fold into the running best.

    Thresholds sit at midpoints of adjacent distinct values. A midpoint that
    rounds up to the right value is pulled down to the left value so the
    left/right routing (<= t vs > t) stays faithful to the scanned boundary.
    """
    m = end - start
    for i in range(m):
        vals[i] = X[samples[start + i], f]
    order = np.argsort(vals[:m])

    cw = 0.0
    cwp = 0.0
    prev = vals[order[0]]
    for i in range(m - 1):
        s = samples[start + order[i]]
        cw += w[s]
        if y[s] == 1:
            cwp += w[s]
        nxt = vals[order[i + 1]]
        if nxt != prev:
            wl = cw
            wpl = cwp
            wr = wt - wl
            wpr = wp - wpl
            gl = 1.0 - (wpl / wl) ** 2 - ((wl - wpl) / wl) ** 2
            gr = 1.0 - (wpr / wr) ** 2 - ((wr - wpr) / wr) ** 2
            gain = parent_gini - (wl / wt) * gl - (wr / wt) * gr
            t = (prev + nxt) / 2.0
            if t == nxt:
                t = prev
            if gain > best_gain or (
                gain == best_gain
                and best_f >= 0
                and (f < best_f or (f == best_f and t < best_t))
            ):
                best_gain = gain
                best_f = f
                best_t = t
            prev = nxt
    return best_gain, best_f, best_t


@njit(cache=True, nogil=True)
def _best_split(X, y, w, samples, features):
    """Exhaustive scan over the given features; (-1, 0.0, 0.0) if no positive gain."""
    n = samples.shape[0]
    wt = 0.0
    wp = 0.0
    for i in range(n):
        s = samples[i]
        wt += w[s]
        if y[s] == 1:
            wp += w[s]
    best_gain = 0.0
    best_f = -1
    best_t = 0.0
    if wp == 0.0 or wp == wt:
        return best_f, best_t, best_gain
    parent_gini = 1.0 - (wp / wt) ** 2 - ((wt - wp) / wt) ** 2
    vals = np.empty(n, dtype=np.float64)
    for k in range(features.shape[0]):
        best_gain, best_f, best_t = _scan_feature(
            X, y, w, samples, 0, n, features[k], wt, wp, parent_gini, vals,
            best_gain, best_f, best_t,
        )
    return best_f, best_t, best_gain


@njit(cache=True, nogil=True)
def _grow(X, y, w, samples, mtry, max_depth, min_node_weight, seed):
    """Grow one tree over samples (index array, mutated in place for partitioning).

    Returns preorder parallel arrays (feature, threshold, left, right, leaf);
    feature -1 marks a leaf holding the positive weight fraction.
    max_depth -1 means unbounded.
    """
    n = samples.shape[0]
    F = X.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    leaf = np.full(cap, -1.0, dtype=np.float64)

    perm = np.arange(F)
    state = np.uint64(seed)

    vals = np.empty(n, dtype=np.float64)
    scratch = np.empty(n, dtype=np.int64)

    stack_start = np.empty(cap, dtype=np.int64)
    stack_end = np.empty(cap, dtype=np.int64)
    stack_depth = np.empty(cap, dtype=np.int64)
    stack_parent = np.empty(cap, dtype=np.int64)
    stack_side = np.empty(cap, dtype=np.int64)
    stack_start[0] = 0
    stack_end[0] = n
    stack_depth[0] = 0
    stack_parent[0] = -1
    stack_side[0] = -1
    top = 1
    n_nodes = 0

    while top > 0:
        top -= 1
        start = stack_start[top]
        end = stack_end[top]
        depth = stack_depth[top]
        parent = stack_parent[top]
        side = stack_side[top]

        node_id = n_nodes
        n_nodes += 1
        if parent >= 0:
            if side == 0:
                left[parent] = node_id
            else:
                right[parent] = node_id

        wt = 0.0
        wp = 0.0
        for i in range(start, end):
            s = samples[i]
            wt += w[s]
            if y[s] == 1:
                wp += w[s]

        if (
            wp == 0.0
            or wp == wt
            or (max_depth >= 0 and depth >= max_depth)
            or wt < min_node_weight
        ):
            leaf[node_id] = wp / wt
            continue

        parent_gini = 1.0 - (wp / wt) ** 2 - ((wt - wp) / wt) ** 2
        best_gain = 0.0
        best_f = -1
        best_t = 0.0

        # Partial Fisher-Yates over a persistent permutation: each node draws
        # mtry distinct features from the splitmix64 stream.
        for j in range(mtry):
            state, z = _mix64(state)
            r = j + np.int64(z % np.uint64(F - j))
            tmp = perm[j]
            perm[j] = perm[r]
            perm[r] = tmp
            best_gain, best_f, best_t = _scan_feature(
                X, y, w, samples, start, end, perm[j], wt, wp, parent_gini, vals,
                best_gain, best_f, best_t,
            )

        if best_f < 0 or best_gain <= 0.0:
            leaf[node_id] = wp / wt
            continue

        feature[node_id] = best_f
        threshold[node_id] = best_t

        # Stable two-buffer partition keeps sample order within each side.
        m = end - start
        nl = 0
        for i in range(start, end):
            if X[samples[i], best_f] <= best_t:
                scratch[nl] = samples[i]
                nl += 1
        nr = nl
        for i in range(start, end):
            if X[samples[i], best_f] > best_t:
                scratch[nr] = samples[i]
                nr += 1
        for i in range(m):
            samples[start + i] = scratch[i]

        # Push right then left so the left child pops first: preorder ids.
        stack_start[top] = start + nl
        stack_end[top] = end
        stack_depth[top] = depth + 1
        stack_parent[top] = node_id
        stack_side[top] = 1
        top += 1
        stack_start[top] = start
        stack_end[top] = start + nl
        stack_depth[top] = depth + 1
        stack_parent[top] = node_id
        stack_side[top] = 0
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        leaf[:n_nodes].copy(),
    )


@njit(cache=True, nogil=True)
def _predict_tree(feature, threshold, left, right, leaf, X, out):
    """Add each row's leaf fraction into out (accumulator across trees)."""
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += leaf[node]
