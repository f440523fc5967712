"""Four-stage hypergraph search for up to ``s`` defects over any first-stage code.

Stage 1 tests every row of the code. Stage 2 tests each color class of a good
coloring of the consistency hypergraph; exactly one class per defect is
positive. Stage 3 finds the defect in the first positive class with rank-bit
pools. Stage 4 tests the complement of every candidate edge through that
vertex; the defect set is the intersection of the candidates whose
complement tests negative.

With ``identify_all_at_stage3`` set, stage 3 searches every positive class at
once and stage 4 is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import BinaryCode, OutcomeVector
from .errors import ContractError, InputError
from .hypergraph import build_hypergraph, greedy_coloring
from .oracle import Oracle, decode_rank_bits, rank_bit_pools


@dataclass(frozen=True)
class GenericStrategyConfig:
    code: BinaryCode
    s: int
    identify_all_at_stage3: bool = False

    def __post_init__(self) -> None:
        if self.s < 1:
            raise InputError("s must be at least 1")

    @property
    def max_stages(self) -> int:
        return 3 if self.identify_all_at_stage3 else 4


def _stage1(code: BinaryCode, oracle: Oracle) -> OutcomeVector:
    outcomes = oracle.run_stage(code.row_pools)
    return OutcomeVector.from_bits(np.array(outcomes, dtype=np.uint8))


def run_generic(config: GenericStrategyConfig, oracle: Oracle) -> frozenset[int]:
    """Identify the oracle's defect set; the answer is also declared on the oracle."""
    code = config.code
    if oracle.t != code.n_cols:
        raise InputError(f"oracle has {oracle.t} samples, code has {code.n_cols} columns")
    if oracle.s > config.s:
        raise InputError(f"oracle allows {oracle.s} defects, strategy handles {config.s}")

    r = _stage1(code, oracle)
    if r.is_zero():
        return oracle.declare(())

    h = build_hypergraph(code, r, config.s)
    coloring = greedy_coloring(h)
    classes = [c for c in coloring.classes() if len(c)]
    hits = oracle.run_stage(classes)
    positive = [c for c, hit in zip(classes, hits) if hit]
    if not positive:
        raise ContractError("nonzero outcome but no color class tested positive")
    if len(positive) > config.s:
        raise ContractError(f"{len(positive)} positive classes exceed s={config.s}")

    searched = positive if config.identify_all_at_stage3 else positive[:1]
    pool_sets = [rank_bit_pools(c) for c in searched]
    flat = [p for pools in pool_sets for p in pools]
    outcomes = oracle.run_stage(flat) if flat else []
    found, pos = [], 0
    for c, pools in zip(searched, pool_sets):
        found.append(decode_rank_bits(c, outcomes[pos : pos + len(pools)]))
        pos += len(pools)
    if config.identify_all_at_stage3:
        return oracle.declare(found)

    v = found[0]
    allowed = np.zeros(code.n_cols, dtype=bool)
    for c in positive[1:]:
        allowed[c] = True
    allowed[v] = True
    candidates = [e for e in h.edges if v in e and allowed[list(e)].all()]
    if not candidates:
        raise ContractError(f"no consistent edge through found vertex {v}")
    if len(candidates) == 1:
        return oracle.declare(candidates[0])

    everyone = np.arange(code.n_cols)
    complements = [np.setdiff1d(everyone, e) for e in candidates]
    negatives = [set(e) for e, hit in zip(candidates, oracle.run_stage(complements)) if not hit]
    if not negatives:
        raise ContractError("every candidate complement tested positive")
    return oracle.declare(set.intersection(*negatives))
