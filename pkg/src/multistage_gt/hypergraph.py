"""Consistency hypergraph of a first-stage outcome and its greedy coloring."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .codes import BinaryCode, OutcomeVector
from .errors import InputError

UNCOLORED = -1


@dataclass(frozen=True)
class ConsistencyHypergraph:
    """Vertices ``0..t-1``; edges are the defect sets of size <= s matching ``r``.

    Edges are sorted tuples, listed in lexicographic order.
    """

    t: int
    s: int
    edges: tuple[tuple[int, ...], ...]

    @cached_property
    def neighbors(self) -> dict[int, set[int]]:
        nb: dict[int, set[int]] = defaultdict(set)
        for e in self.edges:
            for u in e:
                nb[u].update(e)
                nb[u].discard(u)
        return dict(nb)

    @cached_property
    def vertices(self) -> list[int]:
        """Vertices lying in at least one edge, ascending."""
        return sorted({v for e in self.edges for v in e})

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "s": self.s, "edges": [list(e) for e in self.edges]})


def build_hypergraph(code: BinaryCode, r: OutcomeVector, s: int) -> ConsistencyHypergraph:
    """Every subset of size 1..s whose outcome vector equals ``r`` exactly.

    Only samples whose column lies bitwise below ``r`` can belong to such a
    subset, so the subsets are drawn from that pool.
    """
    if r.n_rows != code.n_rows:
        raise InputError(f"outcome has {r.n_rows} bits, code has {code.n_rows} rows")
    if s < 1:
        raise InputError("s must be at least 1")
    if r.is_zero():
        return ConsistencyHypergraph(code.n_cols, s, ())
    everyone = np.arange(code.n_cols, dtype=np.int64)
    cand = everyone[_kernels.covered(code.packed, everyone, r.words)]
    rows = _kernels.consistent_edges(code.packed, cand, r.words, s)
    edges = tuple(tuple(int(v) for v in row if v >= 0) for row in rows)
    return ConsistencyHypergraph(code.n_cols, s, edges)


def adjacency(h: ConsistencyHypergraph) -> set[tuple[int, int]]:
    """Pairs ``(u, v)``, ``u < v``, that share some edge."""
    return {(u, v) for u, nb in h.neighbors.items() for v in nb if u < v}


def degree(h: ConsistencyHypergraph, v: int) -> int:
    """Number of edges containing ``v``."""
    return sum(1 for e in h.edges if v in e)


@dataclass(frozen=True)
class Coloring:
    color_of: np.ndarray  # length t, UNCOLORED for vertices in no edge
    k: int

    def classes(self) -> list[np.ndarray]:
        """Color class i as an ascending array of vertices, for i in 0..k-1."""
        order = np.argsort(self.color_of, kind="stable")
        sorted_colors = self.color_of[order]
        bounds = np.searchsorted(sorted_colors, np.arange(self.k + 1))
        return [order[bounds[i] : bounds[i + 1]] for i in range(self.k)]

    def is_good(self, h: ConsistencyHypergraph) -> bool:
        for e in h.edges:
            colors = [self.color_of[v] for v in e]
            if UNCOLORED in colors or len(set(colors)) != len(colors):
                return False
        return True


def greedy_coloring(h: ConsistencyHypergraph) -> Coloring:
    """First-fit coloring in ascending vertex order.

    Each vertex takes the smallest color unused by its already-colored
    neighbours, so ``k <= 1 + max degree`` in the adjacency graph.
    """
    color_of = np.full(h.t, UNCOLORED, dtype=np.int64)
    k = 0
    nb = h.neighbors
    for v in h.vertices:
        taken = {int(color_of[u]) for u in nb.get(v, ()) if color_of[u] != UNCOLORED}
        c = 0
        while c in taken:
            c += 1
        color_of[v] = c
        k = max(k, c + 1)
    return Coloring(color_of, k)
