"""Binary, q-ary, constant-weight and concatenated codes.

A binary code of length N and size t is an N x t 0/1 matrix: column j is the
codeword of sample j, row i is the i-th test pool. Internally columns are
word-packed (see :mod:`multistage_gt._kernels_numpy`) so that the outcome
vector of a defect set is a short OR loop over whole words.

Sample indices are 0-based throughout the in-process API.
"""

from __future__ import annotations

import functools
import itertools
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .errors import ConstructionError, ContractError, InputError

_WORD = 64
_SHIFTS = np.arange(_WORD, dtype=np.uint64)


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack an (N, t) 0/1 matrix into a (t, ceil(N/64)) uint64 array."""
    n_rows, n_cols = bits.shape
    n_words = max(1, -(-n_rows // _WORD))
    packed = np.zeros((n_cols, n_words), dtype=np.uint64)
    for w in range(n_words):
        chunk = bits[w * _WORD : (w + 1) * _WORD].astype(np.uint64)
        shifted = chunk << _SHIFTS[: chunk.shape[0], None]
        packed[:, w] = np.bitwise_or.reduce(shifted, axis=0) if chunk.shape[0] else 0
    return packed


def _unpack(words: np.ndarray, n_rows: int) -> np.ndarray:
    """Inverse of :func:`_pack` for a single packed vector or a stack of them."""
    words = np.atleast_2d(words)
    bits = ((words[:, :, None] >> _SHIFTS) & np.uint64(1)).astype(np.uint8)
    return bits.reshape(words.shape[0], -1)[:, :n_rows]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BinaryCode:
    """An N x t binary code with distinct, nonzero columns.

    Build one with :meth:`from_matrix` or :meth:`from_bitstrings`; the
    constructor takes the packed representation directly.
    """

    packed: np.ndarray
    n_rows: int

    def __post_init__(self) -> None:
        if self.packed.ndim != 2 or self.packed.dtype != np.uint64:
            raise InputError("packed columns must be a 2-D uint64 array")
        if self.n_rows < 1:
            raise InputError("a code needs at least one row")
        if np.any(~self.packed.any(axis=1)):
            zero = int(np.flatnonzero(~self.packed.any(axis=1))[0])
            raise ConstructionError(f"column {zero} is all-zero; such a sample is untestable")
        if len(np.unique(self.packed, axis=0)) != self.packed.shape[0]:
            raise ConstructionError("code columns must be pairwise distinct")
        _frozen(self.packed)

    @classmethod
    def from_matrix(cls, bits: Sequence[Sequence[int]] | np.ndarray) -> BinaryCode:
        """Build from an N x t matrix (rows are tests, columns are samples)."""
        arr = np.asarray(bits)
        if arr.ndim != 2 or arr.size == 0:
            raise InputError("expected a non-empty 2-D matrix")
        if not np.isin(arr, (0, 1)).all():
            raise InputError("code entries must be 0 or 1")
        return cls(_pack(arr.astype(np.uint8)), arr.shape[0])

    @classmethod
    def from_bitstrings(cls, columns: Sequence[str]) -> BinaryCode:
        """Build from one bitstring per column, e.g. ``["1100", "1010"]``."""
        if not columns or len({len(c) for c in columns}) != 1:
            raise InputError("columns must be non-empty bitstrings of equal length")
        try:
            mat = np.array([[int(ch) for ch in col] for col in columns], dtype=np.int64).T
        except ValueError as exc:
            raise InputError(f"bad bitstring: {exc}") from None
        return cls.from_matrix(mat)

    @property
    def n_cols(self) -> int:
        return self.packed.shape[0]

    @property
    def n_words(self) -> int:
        return self.packed.shape[1]

    @functools.cached_property
    def bits(self) -> np.ndarray:
        """Dense (N, t) uint8 view."""
        return _frozen(np.ascontiguousarray(_unpack(self.packed, self.n_rows).T))

    def column(self, j: int) -> np.ndarray:
        return self.bits[:, j]

    @functools.cached_property
    def row_pools(self) -> tuple[np.ndarray, ...]:
        """Row i as the array of sample indices it tests."""
        return tuple(_frozen(np.flatnonzero(row)) for row in self.bits)

    def to_dict(self) -> dict:
        cols = ["".join(map(str, self.bits[:, j])) for j in range(self.n_cols)]
        return {"n_rows": self.n_rows, "n_cols": self.n_cols, "columns": cols}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> BinaryCode:
        code = cls.from_bitstrings(d["columns"])
        if code.n_rows != d["n_rows"] or code.n_cols != d["n_cols"]:
            raise InputError("n_rows/n_cols disagree with the column data")
        return code

    @classmethod
    def from_json(cls, text: str) -> BinaryCode:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class OutcomeVector:
    """Packed length-N outcome vector, optionally split into layers."""

    words: np.ndarray
    n_rows: int
    layer_length: int | None = None

    def __post_init__(self) -> None:
        if self.layer_length is not None and (
            self.layer_length < 1 or self.n_rows % self.layer_length
        ):
            raise InputError("n_rows must be a multiple of layer_length")
        _frozen(self.words)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray, layer_length: int | None = None) -> OutcomeVector:
        arr = np.asarray(bits, dtype=np.uint8).reshape(-1, 1)
        if not np.isin(arr, (0, 1)).all():
            raise InputError("outcome bits must be 0 or 1")
        return cls(_pack(arr)[0], arr.shape[0], layer_length)

    @functools.cached_property
    def bits(self) -> np.ndarray:
        return _frozen(_unpack(self.words, self.n_rows)[0])

    @property
    def weight(self) -> int:
        return int(self.bits.sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    def to_bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OutcomeVector):
            return NotImplemented
        return self.n_rows == other.n_rows and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.n_rows, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"OutcomeVector({self.to_bitstring()!r}, layer_length={self.layer_length})"


def _check_indices(indices: Iterable[int], t: int) -> np.ndarray:
    idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= t):
        bad = int(idx[(idx < 0) | (idx >= t)][0])
        raise InputError(f"sample index {bad} outside [0, {t})")
    return idx


def outcome_vector(
    code: BinaryCode, defects: Iterable[int], layer_length: int | None = None
) -> OutcomeVector:
    """Bitwise OR of the columns indexed by ``defects`` (all-zero for no defects)."""
    idx = _check_indices(defects, code.n_cols)
    return OutcomeVector(_kernels.or_columns(code.packed, idx), code.n_rows, layer_length)


def layer_weights(r: OutcomeVector) -> list[int]:
    """Popcount of each length-``layer_length`` block of ``r``."""
    if r.layer_length is None:
        raise ContractError("outcome vector has no layer structure")
    return [int(x) for x in r.bits.reshape(-1, r.layer_length).sum(axis=1)]


@dataclass(frozen=True, eq=False)
class QaryCode:
    q: int
    length: int
    words: np.ndarray  # (size, length) symbols in 0..q-1

    def __post_init__(self) -> None:
        if self.q < 2 or self.length < 1:
            raise InputError("need q >= 2 and length >= 1")
        if self.words.ndim != 2 or self.words.shape[1] != self.length:
            raise InputError("words must have shape (size, length)")
        if self.words.size and (self.words.min() < 0 or self.words.max() >= self.q):
            raise InputError("symbols must lie in 0..q-1")
        if len(np.unique(self.words, axis=0)) != len(self.words):
            raise ConstructionError("q-ary words must be distinct")
        _frozen(self.words)

    @property
    def size(self) -> int:
        return self.words.shape[0]

    def index_of(self, word: Sequence[int]) -> int:
        """Position of ``word`` in a lexicographic full code (base-q value)."""
        value = 0
        for a in word:
            value = value * self.q + int(a)
        return value


def full_qary_code(q: int, length: int, size: int | None = None) -> QaryCode:
    """The first ``size`` words of {0..q-1}^length in lexicographic order.

    Word j is the base-q expansion of j, most significant symbol first.
    """
    total = q**length
    size = total if size is None else size
    if not 1 <= size <= total:
        raise ConstructionError(f"size {size} not in [1, {q}^{length}]")
    j = np.arange(size, dtype=np.int64)
    powers = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return QaryCode(q, length, (j[:, None] // powers) % q)


@dataclass(frozen=True, eq=False)
class ConstantWeightCode:
    length: int
    weight: int
    words: np.ndarray  # (count, length) uint8

    def __post_init__(self) -> None:
        if self.words.ndim != 2 or self.words.shape[1] != self.length:
            raise InputError("words must have shape (count, length)")
        if np.any(self.words.sum(axis=1) != self.weight):
            raise InputError(f"every word must have weight {self.weight}")
        if len(self.words) > comb(self.length, self.weight):
            raise InputError("more words than C(length, weight)")
        _frozen(self.words)

    @property
    def relative_weight(self) -> float:
        return self.weight / self.length

    def __len__(self) -> int:
        return self.words.shape[0]

    @functools.cached_property
    def index(self) -> dict[bytes, int]:
        """Map from a word's bytes to its position in the code."""
        return {w.tobytes(): i for i, w in enumerate(self.words)}


def enumerate_constant_weight(length: int, weight: int) -> ConstantWeightCode:
    """All C(length, weight) words, ordered lexicographically by support set."""
    if not 0 < weight < length:
        raise InputError(f"need 0 < weight < length, got weight={weight}, length={length}")
    supports = list(itertools.combinations(range(length), weight))
    words = np.zeros((len(supports), length), dtype=np.uint8)
    rows = np.repeat(np.arange(len(supports)), weight)
    words[rows, np.array(supports).ravel()] = 1
    return ConstantWeightCode(length, weight, words)


def concatenate(outer: QaryCode, inner: ConstantWeightCode) -> BinaryCode:
    """Column j stacks inner word ``outer.words[j, i]`` for each layer i."""
    if len(inner) < outer.q:
        raise ConstructionError(
            f"inner code has {len(inner)} words, fewer than the outer alphabet q={outer.q}"
        )
    # (size, layers, inner_len) -> (layers * inner_len, size)
    stacked = inner.words[outer.words]
    bits = stacked.reshape(outer.size, -1).T
    return BinaryCode.from_matrix(bits)


def random_constant_weight_code(
    n_rows: int, t: int, weight: int, seed: int | np.random.SeedSequence
) -> BinaryCode:
    """``t`` distinct random columns of length ``n_rows`` and fixed ``weight``."""
    if not 0 < weight < n_rows:
        raise InputError(f"need 0 < weight < n_rows, got weight={weight}, n_rows={n_rows}")
    if comb(n_rows, weight) < t:
        raise ConstructionError(f"only C({n_rows}, {weight}) distinct columns available, need {t}")
    rng = np.random.default_rng(seed)
    seen: set[tuple[int, ...]] = set()
    supports: list[tuple[int, ...]] = []
    while len(supports) < t:
        sup = tuple(sorted(rng.choice(n_rows, size=weight, replace=False).tolist()))
        if sup not in seen:
            seen.add(sup)
            supports.append(sup)
    bits = np.zeros((n_rows, t), dtype=np.uint8)
    for j, sup in enumerate(supports):
        bits[list(sup), j] = 1
    return BinaryCode.from_matrix(bits)
