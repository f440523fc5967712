import itertools
from math import ceil, log2

import numpy as np
import pytest

from multistage_gt.codes import BinaryCode, outcome_vector, random_constant_weight_code
from multistage_gt.errors import InputError
from multistage_gt.hypergraph import build_hypergraph, degree, greedy_coloring
from multistage_gt.oracle import Oracle
from multistage_gt.strategy_generic import GenericStrategyConfig, run_generic

TOY = BinaryCode.from_matrix([[1, 0, 1], [0, 1, 1]])


def all_sets(t, s):
    for k in range(s + 1):
        yield from itertools.combinations(range(t), k)


def test_empty_set_shortcut():
    o = Oracle(3, (), s=2)
    assert run_generic(GenericStrategyConfig(TOY, 2), o) == frozenset()
    assert o.transcript.tests_per_stage == [2]


def test_toy_trace():
    # r = 11; edges {0,1},{0,2},{1,2},{2}; greedy colors 0,1,2 -> singleton classes.
    # Stage 2 hits classes {0} and {1}; stage 3 needs no test for a singleton class;
    # the only edge through 0 inside {0} u {1} is {0,1}.
    o = Oracle(3, (0, 1), s=2)
    assert run_generic(GenericStrategyConfig(TOY, 2), o) == {0, 1}
    tr = o.transcript
    assert tr.tests_per_stage == [2, 3]
    assert tr.stages[1].outcomes == (True, True, False)
    assert tr.replay({0, 1})


@pytest.mark.parametrize("defects", list(all_sets(3, 2)))
def test_toy_exhaustive(defects):
    o = Oracle(3, defects, s=2)
    assert run_generic(GenericStrategyConfig(TOY, 2), o) == set(defects)


@pytest.mark.parametrize("flag", [False, True])
def test_random_code_t16_n10_s3_exhaustive(flag):
    code = random_constant_weight_code(10, 16, 3, seed=11)
    config = GenericStrategyConfig(code, 3, identify_all_at_stage3=flag)
    n = 0
    for defects in all_sets(16, 3):
        o = Oracle(16, defects, s=3)
        assert run_generic(config, o) == set(defects)
        assert o.transcript.n_stages <= config.max_stages
        assert o.transcript.replay(defects)
        n += 1
    assert n == 697


def test_stage_budgets_hold():
    code = random_constant_weight_code(12, 16, 3, seed=2)
    config = GenericStrategyConfig(code, 3)
    for defects in itertools.islice(all_sets(16, 3), 17, None, 7):
        o = Oracle(16, defects, s=3)
        run_generic(config, o)
        stages = o.transcript.stages
        r = outcome_vector(code, defects)
        h = build_hypergraph(code, r, 3)
        coloring = greedy_coloring(h)
        classes = [c for c in coloring.classes() if len(c)]
        positive = [c for c, hit in zip(classes, stages[1].outcomes) if hit]
        assert len(positive) == len(defects)
        for c in positive:
            assert int(np.isin(c, defects).sum()) == 1
        first = positive[0]
        v = int(first[np.isin(first, defects)][0])
        if len(first) > 1:
            assert stages[2].n_tests <= ceil(log2(len(first)))
        if len(stages) == 4:
            assert stages[3].n_tests <= degree(h, v)
            # complement of e is negative iff the defect set lies inside e
            for pool, out in zip(stages[3].pools, stages[3].outcomes):
                e = set(range(16)) - set(pool.tolist())
                assert (not out) == set(defects).issubset(e)


def test_config_and_oracle_mismatch():
    with pytest.raises(InputError):
        run_generic(GenericStrategyConfig(TOY, 2), Oracle(4, (), s=2))
    with pytest.raises(InputError):
        run_generic(GenericStrategyConfig(TOY, 1), Oracle(3, (), s=2))
    with pytest.raises(InputError):
        GenericStrategyConfig(TOY, 0)
