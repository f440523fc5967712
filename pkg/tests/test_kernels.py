import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BACKENDS, brute_edges
from multistage_gt import _kernels
from multistage_gt.codes import BinaryCode, OutcomeVector


def test_backend_selected():
    assert _kernels.BACKEND in {"numba", "numpy"}


def test_disable_flag_selects_numpy(monkeypatch):
    import importlib

    monkeypatch.setenv("MULTISTAGE_GT_DISABLE_NUMBA", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "numpy"
    finally:
        monkeypatch.delenv("MULTISTAGE_GT_DISABLE_NUMBA")
        importlib.reload(_kernels)


@st.composite
def code_and_r(draw, max_rows=80, max_t=14):
    n_rows = draw(st.integers(2, max_rows))
    t = draw(st.integers(1, min(max_t, 2**n_rows - 1)))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    cols = set()
    while len(cols) < t:
        col = tuple(rng.integers(0, 2, n_rows).tolist())
        if any(col):
            cols.add(col)
    bits = np.array(sorted(cols), dtype=np.uint8).T
    k = draw(st.integers(0, min(3, t)))
    defects = rng.choice(t, size=k, replace=False)
    r = bits[:, defects].max(axis=1) if k else np.zeros(n_rows, dtype=np.uint8)
    return bits, r


@settings(max_examples=60, deadline=None)
@given(code_and_r())
def test_backends_agree(case):
    bits, r_bits = case
    code = BinaryCode.from_matrix(bits)
    r = OutcomeVector.from_bits(r_bits).words
    everyone = np.arange(code.n_cols, dtype=np.int64)
    results = []
    for k in BACKENDS:
        cov = k.covered(code.packed, everyone, r)
        cand = everyone[cov]
        edges = k.consistent_edges(code.packed, cand, r, 3)
        pm = k.partner_mask(code.packed, everyone, 0, r)
        orc = k.or_columns(code.packed, everyone[:2])
        results.append((cov.tolist(), edges.tolist(), pm.tolist(), orc.tolist()))
    assert all(res == results[0] for res in results)


@settings(max_examples=40, deadline=None)
@given(code_and_r(max_rows=12, max_t=10))
def test_edges_match_brute_force(case):
    bits, r_bits = case
    code = BinaryCode.from_matrix(bits)
    r = OutcomeVector.from_bits(r_bits).words
    expect = brute_edges(bits, r_bits, 3) if r_bits.any() else []
    everyone = np.arange(code.n_cols, dtype=np.int64)
    for k in BACKENDS:
        cand = everyone[k.covered(code.packed, everyone, r)]
        got = [tuple(v for v in row if v >= 0) for row in k.consistent_edges(code.packed, cand, r, 3).tolist()]
        if not r_bits.any():
            got = []
        assert got == expect


def test_edges_empty_candidates(kernels):
    code = BinaryCode.from_bitstrings(["10", "01"])
    r = OutcomeVector.from_bits([1, 1]).words
    out = kernels.consistent_edges(code.packed, np.array([], dtype=np.int64), r, 2)
    assert out.shape == (0, 2)


def test_many_edges_grow_buffer(kernels):
    # identity columns plus all-ones column: many subsets reach the all-ones outcome
    n = 6
    bits = np.vstack([np.eye(n, dtype=np.uint8).T]).T
    bits = np.hstack([bits, np.ones((n, 1), dtype=np.uint8), 1 - np.eye(n, dtype=np.uint8)])
    code = BinaryCode.from_matrix(bits)
    r_bits = np.ones(n, dtype=np.uint8)
    r = OutcomeVector.from_bits(r_bits).words
    everyone = np.arange(code.n_cols, dtype=np.int64)
    got = kernels.consistent_edges(code.packed, everyone, r, 3)
    got = [tuple(v for v in row if v >= 0) for row in got.tolist()]
    assert got == brute_edges(bits, r_bits, 3)
    assert len(got) > 16


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.booleans(), min_size=1, max_size=30).flatmap(
        lambda mask: st.tuples(
            st.just(mask),
            st.lists(st.lists(st.integers(0, len(mask) - 1), max_size=6), min_size=1, max_size=6),
        )
    )
)
def test_pool_hits_backends(case):
    mask, pools = case
    mask = np.array(mask)
    flat = np.array([i for p in pools for i in p], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum([len(p) for p in pools]))).astype(np.int64)
    expect = [any(mask[i] for i in p) for p in pools]
    for k in BACKENDS:
        assert k.pool_hits(mask, flat, offsets).tolist() == expect
