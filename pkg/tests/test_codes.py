import itertools
import json
from math import factorial
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistage_gt.codes import (
    BinaryCode,
    ConstantWeightCode,
    OutcomeVector,
    QaryCode,
    concatenate,
    enumerate_constant_weight,
    full_qary_code,
    layer_weights,
    outcome_vector,
    random_constant_weight_code,
)
from multistage_gt.errors import ConstructionError, ContractError, InputError
from multistage_gt.strategy_s2 import P0, build_design

GOLDEN = Path(__file__).parent / "golden"


def binom(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


@pytest.fixture(scope="module")
def p0_code():
    return build_design(P0).code


def test_outcome_vector_or_of_two_columns():
    code = BinaryCode.from_bitstrings(["1100", "1010"])
    assert outcome_vector(code, [0, 1]).to_bitstring() == "1110"


def test_outcome_vector_empty_set_is_zero(p0_code):
    r = outcome_vector(p0_code, [])
    assert r.is_zero() and r.to_bitstring() == "0" * 8


def test_outcome_vector_single_is_column(p0_code):
    assert np.array_equal(outcome_vector(p0_code, [0]).bits, p0_code.column(0))


def test_outcome_vector_index_out_of_range(p0_code):
    with pytest.raises(InputError):
        outcome_vector(p0_code, [36])
    with pytest.raises(InputError):
        outcome_vector(p0_code, [-1])


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (6, 3), (7, 1)])
def test_enumerate_constant_weight_counts(n, k):
    code = enumerate_constant_weight(n, k)
    assert len(code) == binom(n, k)
    assert len({w.tobytes() for w in code.words}) == len(code)
    assert (code.words.sum(axis=1) == k).all()


def test_enumerate_constant_weight_order():
    code = enumerate_constant_weight(3, 1)
    assert ["".join(map(str, w)) for w in code.words] == ["100", "010", "001"]
    code = enumerate_constant_weight(4, 2)
    assert ["".join(map(str, w)) for w in code.words] == [
        "1100", "1010", "1001", "0110", "0101", "0011",
    ]


@pytest.mark.parametrize("n,k", [(4, 0), (4, 4), (4, 5), (3, -1)])
def test_enumerate_constant_weight_rejects(n, k):
    with pytest.raises(InputError):
        enumerate_constant_weight(n, k)


def test_constant_weight_code_rejects_wrong_weight():
    with pytest.raises(InputError):
        ConstantWeightCode(3, 1, np.array([[1, 1, 0]], dtype=np.uint8))


def test_concatenate_identity_scale():
    outer = full_qary_code(2, 1)
    inner = enumerate_constant_weight(2, 1)
    code = concatenate(outer, inner)
    assert code.to_dict()["columns"] == ["10", "01"]


def test_concatenate_p0_shape_and_golden(p0_code):
    assert (p0_code.n_rows, p0_code.n_cols) == (8, 36)
    assert p0_code.column(0).tolist() == [1, 1, 0, 0, 1, 1, 0, 0]
    golden = json.loads((GOLDEN / "p0_code.json").read_text())
    assert p0_code.to_dict() == golden


def test_concatenate_inner_too_small():
    with pytest.raises(ConstructionError):
        concatenate(full_qary_code(7, 2), enumerate_constant_weight(4, 2))


def test_full_qary_code_truncation_is_lexicographic():
    c = full_qary_code(3, 2, 5)
    assert c.words.tolist() == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1]]
    assert c.index_of([1, 1]) == 4
    with pytest.raises(ConstructionError):
        full_qary_code(3, 2, 10)


def test_qary_code_rejects_duplicates():
    with pytest.raises(ConstructionError):
        QaryCode(2, 1, np.array([[0], [0]]))


@pytest.mark.parametrize(
    "bits,weights",
    [("11001100", [2, 2]), ("11101100", [3, 2]), ("00000000", [0, 0])],
)
def test_layer_weights(bits, weights):
    assert layer_weights(OutcomeVector.from_bits([int(b) for b in bits], layer_length=4)) == weights


def test_layer_weights_needs_layers():
    with pytest.raises(ContractError):
        layer_weights(OutcomeVector.from_bits([1, 0]))


def test_layer_length_must_divide():
    with pytest.raises(InputError):
        OutcomeVector.from_bits([1, 0, 1], layer_length=2)


def test_zero_and_duplicate_columns_rejected():
    with pytest.raises(ConstructionError):
        BinaryCode.from_bitstrings(["10", "00"])
    with pytest.raises(ConstructionError):
        BinaryCode.from_bitstrings(["10", "10"])
    with pytest.raises(InputError):
        BinaryCode.from_matrix([[0, 2]])


def test_json_round_trip_multiword():
    rng = np.random.default_rng(5)
    code = random_constant_weight_code(130, 40, 9, seed=rng.integers(1 << 30))
    again = BinaryCode.from_json(code.to_json())
    assert np.array_equal(again.bits, code.bits)
    assert code.n_words == 3


def test_random_constant_weight_code_deterministic():
    a = random_constant_weight_code(12, 16, 3, seed=4)
    b = random_constant_weight_code(12, 16, 3, seed=4)
    assert np.array_equal(a.bits, b.bits)
    assert (a.bits.sum(axis=0) == 3).all()
    with pytest.raises(ConstructionError):
        random_constant_weight_code(4, 7, 2, seed=0)


@st.composite
def code_and_sets(draw):
    n_rows = draw(st.integers(6, 70))
    t = draw(st.integers(2, 12))
    seed = draw(st.integers(0, 2**31))
    w = draw(st.integers(1, n_rows - 1))
    if binom(n_rows, w) < t:
        w = n_rows // 2
    code = random_constant_weight_code(n_rows, t, w, seed)
    a = draw(st.sets(st.integers(0, t - 1), max_size=4))
    b = draw(st.sets(st.integers(0, t - 1), max_size=4))
    return code, a, b


@settings(max_examples=80, deadline=None)
@given(code_and_sets())
def test_outcome_union_is_or(case):
    code, a, b = case
    ra, rb, rab = (outcome_vector(code, x) for x in (a, b, a | b))
    assert np.array_equal(rab.bits, ra.bits | rb.bits)


@settings(max_examples=80, deadline=None)
@given(code_and_sets())
def test_outcome_monotone(case):
    code, a, b = case
    small, big = outcome_vector(code, a), outcome_vector(code, a | b)
    assert (small.bits <= big.bits).all()


def test_p0_layer_weight_dichotomy(p0_code):
    w = P0.inner_weight
    for j in range(36):
        assert layer_weights(outcome_vector(p0_code, [j], layer_length=4)) == [w, w]
    for pair in itertools.combinations(range(36), 2):
        assert max(layer_weights(outcome_vector(p0_code, pair, layer_length=4))) > w
