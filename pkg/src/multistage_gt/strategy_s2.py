"""Four-stage search for at most two defects over a concatenated code.

The first-stage code stacks, for each of ``n_hat`` layers, the constant-weight
inner word indexed by that layer's outer symbol. The outer code is the first
``t`` words of {0..q-1}^n_hat in lexicographic order; symbol ``a`` maps to the
``a``-th inner word in lexicographic support order.

Stage 1 reads the per-layer weights of the outcome. Zero outcome means no
defect; every layer at the inner weight means one defect, decoded directly.
Otherwise some layer is heavier than the inner weight, and coloring samples by
their outer symbol in that layer separates the two defects (stage 2). Stage 3
locates one defect among the consistent samples of its class, stage 4 locates
its partner among the samples that complete the outcome vector. Both use
single-batch rank-bit pools.
"""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from . import _kernels
from .codes import (
    BinaryCode,
    ConstantWeightCode,
    OutcomeVector,
    QaryCode,
    concatenate,
    enumerate_constant_weight,
    full_qary_code,
    layer_weights,
)
from .errors import ConstructionError, ContractError, InputError
from .oracle import Oracle, decode_rank_bits, rank_bit_pools


def ceil_log(t: int, q: int) -> int:
    """Smallest n >= 1 with q**n >= t."""
    n, power = 1, q
    while power < t:
        n += 1
        power *= q
    return n


def ceil_root(t: int, n: int) -> int:
    """Smallest q >= 2 with q**n >= t."""
    q = max(2, round(t ** (1.0 / n)))
    while q**n < t:
        q += 1
    while q > 2 and (q - 1) ** n >= t:
        q -= 1
    return q


def _clog2(x: int) -> int:
    """ceil(log2 x) for a positive integer, exactly."""
    return (x - 1).bit_length()


@dataclass(frozen=True)
class S2Params:
    q: int
    n_hat: int
    n_prime: int
    inner_weight: int
    t: int

    def __post_init__(self) -> None:
        if self.t < 2:
            raise InputError("need at least two samples")
        if not 0 < self.inner_weight < self.n_prime:
            raise InputError("need 0 < inner_weight < n_prime")
        if self.q < 2 or self.n_hat < 1:
            raise InputError("need q >= 2 and n_hat >= 1")
        if self.q > comb(self.n_prime, self.inner_weight):
            raise ConstructionError(
                f"q={self.q} exceeds C({self.n_prime}, {self.inner_weight})"
                f"={comb(self.n_prime, self.inner_weight)} inner words"
            )
        if self.q**self.n_hat < self.t:
            raise ConstructionError(f"{self.q}^{self.n_hat} < t={self.t}")

    @property
    def relative_weight(self) -> float:
        return self.inner_weight / self.n_prime

    @property
    def n_rows(self) -> int:
        return self.n_hat * self.n_prime

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> S2Params:
        return cls(**{k: int(d[k]) for k in ("q", "n_hat", "n_prime", "inner_weight", "t")})


# The P0 instance used across the tests and docs.
P0 = S2Params(q=6, n_hat=2, n_prime=4, inner_weight=2, t=36)


@dataclass(frozen=True, eq=False)
class S2Design:
    params: S2Params
    outer: QaryCode
    inner: ConstantWeightCode
    code: BinaryCode
    classes: tuple[tuple[np.ndarray, ...], ...]  # classes[layer][symbol]


@functools.lru_cache(maxsize=32)
def build_design(p: S2Params) -> S2Design:
    outer = full_qary_code(p.q, p.n_hat, p.t)
    inner = enumerate_constant_weight(p.n_prime, p.inner_weight)
    code = concatenate(outer, inner)
    classes = tuple(
        tuple(np.flatnonzero(outer.words[:, i] == a) for a in range(p.q)) for i in range(p.n_hat)
    )
    return S2Design(p, outer, inner, code, classes)


@dataclass
class S2RunReport:
    answer: frozenset[int]
    tests_per_stage: list[int]
    layer_weights: list[int]
    n_stages: int

    @property
    def total(self) -> int:
        return sum(self.tests_per_stage)


# -- worst-case bound ---------------------------------------------------------


def _layer_factors(n_prime: int, w: int) -> list[tuple[int, int]]:
    """Per layer weight k in [w, min(2w, n_prime)]: (C(k, w), C(w, 2w - k))."""
    return [(comb(k, w), comb(w, 2 * w - k)) for k in range(w, min(2 * w, n_prime) + 1)]


@functools.lru_cache(maxsize=None)
def _frontier(n_prime: int, w: int, n_layers: int) -> tuple[tuple[int, int], ...]:
    """Pareto-maximal (class-size bound, degree bound) products over n_layers layers."""
    if n_layers == 0:
        return ((1, 1),)
    prev = _frontier(n_prime, w, n_layers - 1)
    pts = sorted({(a * x, b * y) for a, b in prev for x, y in _layer_factors(n_prime, w)}, reverse=True)
    out, best_b = [], 0
    for a, b in pts:
        if b > best_b:
            out.append((a, b))
            best_b = b
    return tuple(out)


def stage34_worst(n_prime: int, w: int, n_hat: int) -> int:
    """Max over layer-weight profiles of ceil(log2 t_hat) + ceil(log2 deg).

    The two ceilings do not separate across layers, so the maximum is taken
    over the exact Pareto frontier of the two products.
    """
    return max(_clog2(a) + _clog2(b) for a, b in _frontier(n_prime, w, n_hat))


def bound_breakdown(p: S2Params) -> dict[str, int]:
    return {
        "stage1": p.n_rows,
        "stage2": p.q,
        "stage34": stage34_worst(p.n_prime, p.inner_weight, p.n_hat),
    }


def worst_case_bound(p: S2Params) -> int:
    """Deterministic worst-case total tests over all four stages."""
    return sum(bound_breakdown(p).values())


def select_params(
    t: int,
    *,
    n_prime_max: int = 24,
    n_primes: Sequence[int] | None = None,
    inner_weights: Sequence[int] | None = None,
    qs: Sequence[int] | None = None,
) -> S2Params:
    """Parameters minimizing :func:`worst_case_bound` for ``t`` samples.

    Ties go to smaller n_prime, then smaller q. Without an explicit ``qs`` the
    search only visits, for each n_hat, the smallest q reaching t: any larger
    q with the same n_hat has a strictly larger bound, so this is equivalent
    to scanning every q.
    """
    if t < 2:
        raise InputError("need t >= 2")
    best: tuple | None = None
    max_layers = _clog2(t)
    for n_prime in n_primes if n_primes is not None else range(2, n_prime_max + 1):
        for w in inner_weights if inner_weights is not None else range(1, n_prime):
            if not 0 < w < n_prime:
                continue
            cap = comb(n_prime, w)
            if qs is not None:
                pairs = {(q, ceil_log(t, q)) for q in qs if 2 <= q <= cap}
            else:
                pairs = set()
                for n_hat in range(1, max_layers + 1):
                    q = ceil_root(t, n_hat)
                    if q <= cap:
                        pairs.add((q, ceil_log(t, q)))
            for q, n_hat in pairs:
                bound = n_hat * n_prime + q + stage34_worst(n_prime, w, n_hat)
                key = (bound, n_prime, q, w, n_hat)
                if best is None or key < best:
                    best = key
    if best is None:
        raise ConstructionError(f"no admissible parameters for t={t} in the search space")
    _, n_prime, q, w, n_hat = best
    return S2Params(q=q, n_hat=n_hat, n_prime=n_prime, inner_weight=w, t=t)


# -- strategy -----------------------------------------------------------------


def consistent_partners(
    p: S2Params,
    code: BinaryCode,
    r: OutcomeVector,
    v: int,
    class_members: Sequence[int] | np.ndarray,
) -> list[int]:
    """Members ``u != v`` with column below ``r`` and ``x(v) | x(u) == r``, ascending."""
    members = np.sort(np.asarray(class_members, dtype=np.int64))
    mask = _kernels.partner_mask(code.packed, members, int(v), r.words) & (members != v)
    return [int(u) for u in members[mask]]


def consistent_in_class(code: BinaryCode, r: OutcomeVector, members: np.ndarray) -> np.ndarray:
    return members[_kernels.covered(code.packed, members, r.words)]


def _decode_single(design: S2Design, r: OutcomeVector) -> int:
    p = design.params
    index = design.inner.index
    layers = r.bits.reshape(p.n_hat, p.n_prime)
    word = []
    for layer in layers:
        a = index.get(layer.tobytes())
        if a is None or a >= p.q:
            raise ContractError("layer pattern is not an inner codeword")
        word.append(a)
    j = design.outer.index_of(word)
    if j >= p.t:
        raise ContractError("decoded outer word lies beyond the population")
    return j


def run_s2(p: S2Params, oracle: Oracle) -> S2RunReport:
    """Identify up to two defects; the answer is also declared on the oracle."""
    if oracle.t != p.t:
        raise InputError(f"oracle has {oracle.t} samples, parameters expect {p.t}")
    if oracle.s > 2:
        raise InputError("this strategy handles at most two defects")
    design = build_design(p)
    code = design.code
    w = p.inner_weight
    tests = [0, 0, 0, 0]

    outcomes = oracle.run_stage(code.row_pools)
    tests[0] = len(outcomes)
    r = OutcomeVector.from_bits(np.array(outcomes, dtype=np.uint8), layer_length=p.n_prime)
    weights = layer_weights(r)

    def finish(answer) -> S2RunReport:
        ans = oracle.declare(answer)
        return S2RunReport(ans, tests, weights, oracle.transcript.n_stages)

    if r.is_zero():
        return finish(())
    if all(x == w for x in weights):
        return finish((_decode_single(design, r),))

    layer = next(i for i, x in enumerate(weights) if x > w)
    classes = [c for c in design.classes[layer] if len(c)]
    hits = oracle.run_stage(classes)
    tests[1] = len(classes)
    positive = [c for c, hit in zip(classes, hits) if hit]
    if len(positive) != 2:
        raise ContractError(f"{len(positive)} positive classes; at most two defects were promised")

    cands = consistent_in_class(code, r, positive[0])
    pools = rank_bit_pools(cands)
    if pools:
        out = oracle.run_stage(pools)
        tests[2] = len(pools)
    else:
        out = []
    v = decode_rank_bits(cands, out)

    partners = np.array(consistent_partners(p, code, r, v, positive[1]), dtype=np.int64)
    pools = rank_bit_pools(partners)
    if pools:
        out = oracle.run_stage(pools)
        tests[3] = len(pools)
    else:
        out = []
    u = decode_rank_bits(partners, out)
    return finish((v, u))
