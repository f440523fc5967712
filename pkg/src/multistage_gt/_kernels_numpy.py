"""Pure-numpy versions of the bit-packed column kernels.

Columns are stored as a ``(t, n_words)`` uint64 array; bit ``i % 64`` of word
``i // 64`` holds row ``i``.
"""

from __future__ import annotations

import itertools

import numpy as np


def or_columns(packed: np.ndarray, idx: np.ndarray) -> np.ndarray:
    if len(idx) == 0:
        return np.zeros(packed.shape[1], dtype=np.uint64)
    return np.bitwise_or.reduce(packed[idx], axis=0)


def covered(packed: np.ndarray, members: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Mask of ``members`` whose column is bitwise below ``r``."""
    return ~np.any(packed[members] & ~r, axis=1)


def partner_mask(packed: np.ndarray, members: np.ndarray, v: int, r: np.ndarray) -> np.ndarray:
    cols = packed[members]
    below = ~np.any(cols & ~r, axis=1)
    return below & np.all((cols | packed[v]) == r, axis=1)


def consistent_edges(packed: np.ndarray, cand: np.ndarray, r: np.ndarray, s: int) -> np.ndarray:
    """All subsets of ``cand`` of size 1..s whose OR equals ``r``.

    Returns an ``(n, s)`` int64 array, rows padded with -1, in lexicographic
    order of the index tuples.
    """
    cols = packed[cand]
    m = len(cand)
    found: list[tuple[int, ...]] = []
    for k in range(1, min(s, m) + 1):
        combos = np.array(list(itertools.combinations(range(m), k)), dtype=np.int64)
        acc = cols[combos[:, 0]].copy()
        for c in range(1, k):
            acc |= cols[combos[:, c]]
        hit = np.all(acc == r, axis=1)
        found.extend(tuple(int(cand[i]) for i in row) for row in combos[hit])
    found.sort()
    out = np.full((len(found), s), -1, dtype=np.int64)
    for i, e in enumerate(found):
        out[i, : len(e)] = e
    return out


def pool_hits(mask: np.ndarray, flat: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Pool k (``flat[offsets[k]:offsets[k+1]]``) is positive iff it hits ``mask``."""
    cs = np.concatenate(([0], np.cumsum(mask[flat], dtype=np.int64)))
    return cs[offsets[1:]] > cs[offsets[:-1]]
