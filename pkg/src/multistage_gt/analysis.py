"""Reference test-count formulas and the exhaustive verification harness."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import InputError
from .oracle import Oracle
from .strategy_generic import GenericStrategyConfig, run_generic
from .strategy_s2 import S2Params, run_s2, worst_case_bound

MAX_DEFECT_SETS = 10**6

LOG2_E = math.log2(math.e)


def entropy(x: float) -> float:
    """Binary entropy in bits."""
    if not 0 < x < 1:
        raise InputError(f"entropy needs 0 < x < 1, got {x}")
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def dr82_coefficient(s: int) -> float:
    """Leading coefficient of the non-adaptive lower bound, times log2 t."""
    return s * s / (2 * math.log2(math.e * (s + 1) / 2))


def two_stage_coefficient(s: int) -> float:
    """Leading coefficient of the two-stage upper bound (stated for large s)."""
    return s * math.e / LOG2_E


@dataclass(frozen=True)
class BoundReport:
    """Main terms only; o(1) corrections are not modelled."""

    t: int
    s: int
    info_bound: float
    dr82_nonadaptive: float
    two_stage: float
    damaschke_2stage: float | None

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "t": self.t,
            "s": self.s,
            "info_bound": self.info_bound,
            "dr82_nonadaptive": self.dr82_nonadaptive,
            "two_stage": self.two_stage,
            "two_stage_note": "asymptotic in s; extrapolated at small s",
            "damaschke_2stage": self.damaschke_2stage,
            "note": "main terms without o(1) corrections",
        }


def reference_bounds(t: int, s: int) -> BoundReport:
    if t < 2 or s < 1:
        raise InputError("need t >= 2 and s >= 1")
    lt = math.log2(t)
    return BoundReport(
        t=t,
        s=s,
        info_bound=s * lt,
        dr82_nonadaptive=dr82_coefficient(s) * lt,
        two_stage=two_stage_coefficient(s) * lt,
        damaschke_2stage=2.5 * lt if s == 2 else None,
    )


def count_defect_sets(t: int, s: int) -> int:
    """Number of subsets of [t] with at most s elements, empty set included."""
    return sum(math.comb(t, k) for k in range(s + 1))


def defect_sets(t: int, s: int):
    """Every subset of size 0..s, by size then lexicographically."""
    for k in range(s + 1):
        yield from itertools.combinations(range(t), k)


@dataclass
class VerifySummary:
    strategy: str
    t: int
    s: int
    n_sets: int = 0
    all_correct: bool = True
    worst_total: int = -1
    worst_case_set: tuple[int, ...] = ()
    histogram: Counter = field(default_factory=Counter)
    max_stages: int = 0
    failures: list[tuple[int, ...]] = field(default_factory=list)
    bound: int | None = None
    rows: list[dict] | None = None

    def add(self, defects: tuple[int, ...], answer: frozenset[int], total: int, stages: int) -> None:
        correct = answer == frozenset(defects)
        self.n_sets += 1
        if not correct:
            self.all_correct = False
            self.failures.append(defects)
        self.histogram[total] += 1
        self.max_stages = max(self.max_stages, stages)
        if total > self.worst_total or (total == self.worst_total and defects < self.worst_case_set):
            self.worst_total = total
            self.worst_case_set = defects
        if self.rows is not None:
            self.rows.append(
                {
                    "defects": defects,
                    "answer": tuple(sorted(answer)),
                    "total": total,
                    "stages": stages,
                    "correct": correct,
                }
            )

    def to_dict(self, one_based: bool = True) -> dict:
        off = 1 if one_based else 0
        return {
            "schema": 1,
            "strategy": self.strategy,
            "t": self.t,
            "s": self.s,
            "n_sets": self.n_sets,
            "all_correct": self.all_correct,
            "worst_total": self.worst_total,
            "worst_case_set": [i + off for i in self.worst_case_set],
            "histogram": {str(k): self.histogram[k] for k in sorted(self.histogram)},
            "max_stages": self.max_stages,
            "bound": self.bound,
            "failures": [[i + off for i in f] for f in self.failures],
        }


def verify_exhaustive(
    strategy: GenericStrategyConfig | S2Params,
    t: int,
    s: int,
    *,
    keep_rows: bool = False,
) -> VerifySummary:
    """Run ``strategy`` against a fresh oracle for every defect set of size <= s."""
    if s < 1:
        raise InputError("s must be at least 1")
    n = count_defect_sets(t, s)
    if n > MAX_DEFECT_SETS:
        raise InputError(
            f"refusing to enumerate {n} defect sets (limit {MAX_DEFECT_SETS}); lower t or s"
        )
    if isinstance(strategy, S2Params):
        if strategy.t != t or s > 2:
            raise InputError("s2 parameters need matching t and s <= 2")
        summary = VerifySummary("s2", t, s, bound=worst_case_bound(strategy))

        def one(oracle):
            return run_s2(strategy, oracle).answer

    elif isinstance(strategy, GenericStrategyConfig):
        if strategy.code.n_cols != t or s > strategy.s:
            raise InputError("generic config needs code size t and s <= config.s")
        summary = VerifySummary("generic", t, s)

        def one(oracle):
            return run_generic(strategy, oracle)

    else:
        raise InputError(f"unknown strategy {type(strategy).__name__}")

    if keep_rows:
        summary.rows = []
    for defects in defect_sets(t, s):
        oracle = Oracle(t, defects, s)
        answer = one(oracle)
        tr = oracle.transcript
        summary.add(defects, answer, sum(tr.tests_per_stage), tr.n_stages)
    return summary
