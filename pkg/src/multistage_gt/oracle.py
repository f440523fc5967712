"""Stage-disciplined test oracle and its transcript.

A strategy sees the hidden defect set only through :meth:`Oracle.run_stage`,
which answers a whole batch of pools at once. Every batch is recorded, so the
per-stage test counts and the total can be read off the transcript afterwards.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractError, InputError


@dataclass(frozen=True)
class Stage:
    pools: tuple[np.ndarray, ...]
    outcomes: tuple[bool, ...]

    @property
    def n_tests(self) -> int:
        return len(self.pools)


@dataclass
class StageTranscript:
    stages: list[Stage] = field(default_factory=list)
    defects_declared: frozenset[int] | None = None

    @property
    def tests_per_stage(self) -> list[int]:
        return [st.n_tests for st in self.stages]

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def replay(self, hidden: Iterable[int]) -> bool:
        """True iff every recorded outcome matches ``hidden``."""
        hidden = set(hidden)
        return all(
            bool(hidden.intersection(pool.tolist())) == out
            for st in self.stages
            for pool, out in zip(st.pools, st.outcomes)
        )

    def to_dict(self, one_based: bool = True) -> dict:
        """JSON-ready form; sample labels are 1-based unless told otherwise."""
        off = 1 if one_based else 0
        answer = None
        if self.defects_declared is not None:
            answer = [i + off for i in sorted(self.defects_declared)]
        return {
            "schema": 1,
            "stages": [
                {
                    "pools": [[int(i) + off for i in pool] for pool in st.pools],
                    "outcomes": list(st.outcomes),
                }
                for st in self.stages
            ],
            "answer": answer,
        }

    def to_json(self, one_based: bool = True) -> str:
        return json.dumps(self.to_dict(one_based))


def total_tests(transcript: StageTranscript) -> int:
    return sum(st.n_tests for st in transcript.stages)


class Oracle:
    """Holds a hidden defect set among ``t`` samples and answers pool batches.

    ``s`` is the largest defect count the caller promises strategies.
    """

    def __init__(self, t: int, defects: Iterable[int], s: int) -> None:
        hidden = frozenset(int(d) for d in defects)
        if t < 1:
            raise InputError("population size must be positive")
        if any(not 0 <= d < t for d in hidden):
            raise InputError(f"defect index outside [0, {t})")
        if len(hidden) > s:
            raise InputError(f"{len(hidden)} defects exceed the promised maximum s={s}")
        self.t = t
        self.s = s
        self.transcript = StageTranscript()
        self.__mask = np.zeros(t, dtype=bool)
        self.__mask[list(hidden)] = True

    def run_stage(self, pools: Sequence[Iterable[int]]) -> list[bool]:
        """Test every pool in one batch; pool k is positive iff it meets the defect set."""
        if len(pools) == 0:
            raise ContractError("empty batch; skip the stage instead of submitting nothing")
        batch = [
            pool if isinstance(pool, np.ndarray) else np.asarray(list(pool), dtype=np.int64)
            for pool in pools
        ]
        offsets = np.zeros(len(batch) + 1, dtype=np.int64)
        np.cumsum([len(b) for b in batch], out=offsets[1:])
        flat = np.concatenate(batch).astype(np.int64, copy=False)
        if flat.size and (flat.min() < 0 or flat.max() >= self.t):
            raise InputError(f"pool member outside [0, {self.t})")
        outcomes = tuple(_kernels.pool_hits(self.__mask, flat, offsets).tolist())
        self.transcript.stages.append(Stage(tuple(batch), outcomes))
        return list(outcomes)

    def declare(self, answer: Iterable[int]) -> frozenset[int]:
        self.transcript.defects_declared = frozenset(int(a) for a in answer)
        return self.transcript.defects_declared


def rank_bit_pools(members: Sequence[int] | np.ndarray) -> list[np.ndarray]:
    """ceil(log2 m) pools; pool b holds the members whose rank has bit b set.

    With exactly one defective among ``members`` the outcomes spell out its
    rank in binary (see :func:`decode_rank_bits`).
    """
    members = np.asarray(members, dtype=np.int64)
    m = len(members)
    n_bits = (m - 1).bit_length() if m > 1 else 0
    ranks = np.arange(m)
    return [members[(ranks >> b) & 1 == 1] for b in range(n_bits)]


def decode_rank_bits(members: Sequence[int] | np.ndarray, outcomes: Sequence[bool]) -> int:
    rank = sum(1 << b for b, pos in enumerate(outcomes) if pos)
    if rank >= len(members):
        raise ContractError("rank-bit outcomes point past the candidate list")
    return int(members[rank])
