"""Numba-compiled versions of the bit-packed column kernels.

Same contracts as :mod:`multistage_gt._kernels_numpy`; the test suite checks
the two against each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def or_columns(packed, idx):
    n_words = packed.shape[1]
    out = np.zeros(n_words, dtype=np.uint64)
    for j in idx:
        for w in range(n_words):
            out[w] |= packed[j, w]
    return out


@njit(cache=True)
def covered(packed, members, r):
    n_words = packed.shape[1]
    out = np.empty(len(members), dtype=np.bool_)
    for i in range(len(members)):
        ok = True
        for w in range(n_words):
            if packed[members[i], w] & ~r[w]:
                ok = False
                break
        out[i] = ok
    return out


@njit(cache=True)
def partner_mask(packed, members, v, r):
    n_words = packed.shape[1]
    out = np.empty(len(members), dtype=np.bool_)
    for i in range(len(members)):
        u = members[i]
        ok = True
        for w in range(n_words):
            cu = packed[u, w]
            if (cu & ~r[w]) or ((cu | packed[v, w]) != r[w]):
                ok = False
                break
        out[i] = ok
    return out


@njit(cache=True)
def consistent_edges(packed, cand, r, s):
    # Depth-first walk over index tuples; DFS order is lexicographic order.
    m = len(cand)
    n_words = packed.shape[1]
    out = np.full((16, s), -1, dtype=np.int64)
    n_out = 0
    if m == 0 or s == 0:
        return out[:0]
    stack = np.zeros(s, dtype=np.int64)
    acc = np.zeros((s + 1, n_words), dtype=np.uint64)
    depth = 0
    stack[0] = 0
    while depth >= 0:
        if stack[depth] >= m:
            depth -= 1
            if depth >= 0:
                stack[depth] += 1
            continue
        j = cand[stack[depth]]
        equal = True
        for w in range(n_words):
            acc[depth + 1, w] = acc[depth, w] | packed[j, w]
            if acc[depth + 1, w] != r[w]:
                equal = False
        if equal:
            if n_out == out.shape[0]:
                grown = np.full((2 * n_out, s), -1, dtype=np.int64)
                grown[:n_out] = out
                out = grown
            for d in range(depth + 1):
                out[n_out, d] = cand[stack[d]]
            n_out += 1
        if depth + 1 < s and stack[depth] + 1 < m:
            stack[depth + 1] = stack[depth] + 1
            depth += 1
        else:
            stack[depth] += 1
    return out[:n_out]


@njit(cache=True)
def pool_hits(mask, flat, offsets):
    n = len(offsets) - 1
    out = np.zeros(n, dtype=np.bool_)
    for k in range(n):
        for i in range(offsets[k], offsets[k + 1]):
            if mask[flat[i]]:
                out[k] = True
                break
    return out
