import random

import pytest
from hypothesis import given, strategies as st

from pdcount._pool import Workers
from pdcount.brute import BruteDefectOracle, BruteRestrictedOracle, brute_defects, brute_perfmatch
from pdcount.errors import PromiseViolation, ValidationError
from pdcount.generators import cycle_graph, path_graph, random_plane_graph, random_promise_instance
from pdcount.plane_graph import ApexInstance
from pdcount.reductions import (
    DEFECT,
    RESTRICTED,
    FaceSpectrumOracle,
    OracleTranscript,
    RestrDefectInstance,
    apex_to_defect,
    apex_to_restricted,
    audit,
    restricted_to_defect,
)


def promise_instance(rng, n_max=10, k_max=3):
    return random_promise_instance(rng.randint(2, n_max), rng.randint(1, k_max), rng, s=rng.randint(1, 2))


def test_path_example():
    t = OracleTranscript()
    inst = RestrDefectInstance(path_graph(3), frozenset(), 1)
    assert restricted_to_defect(inst, BruteDefectOracle(), t) == 2
    assert audit(t) == (1, 4)


def test_c4_restricted_example():
    t = OracleTranscript()
    trace = {}
    inst = RestrDefectInstance(cycle_graph(4), frozenset({0}), 2)
    assert restricted_to_defect(inst, BruteDefectOracle(max_vertices=64), t, trace) == 2
    assert audit(t) == (2, 9)
    assert trace["nodes"] == [1, 2, 3]


@given(st.integers(0, 10**6))
def test_restricted_matches_brute(seed):
    rng = random.Random(seed)
    g = random_plane_graph(rng.randint(1, 8), rng, connected=rng.random() < 0.7)
    S = frozenset(v for v in range(g.n) if rng.random() < 0.4)
    k = rng.randint(0, 3)
    got = restricted_to_defect(RestrDefectInstance(g, S, k), BruteDefectOracle(max_vertices=128))
    assert got == brute_defects(g, k, S)


@given(st.integers(0, 10**6))
def test_apex_to_restricted_matches_brute(seed):
    inst = promise_instance(random.Random(seed))
    t = OracleTranscript()
    assert apex_to_restricted(inst, BruteRestrictedOracle(), t) == brute_perfmatch(inst.to_graph())
    assert audit(t) == (inst.k, 2**inst.k)


@given(st.integers(0, 10**6))
def test_chain_matches_brute_with_linear_parameter(seed):
    inst = promise_instance(random.Random(seed), n_max=8)
    t = OracleTranscript()
    got = apex_to_defect(inst, BruteDefectOracle(max_vertices=128), t)
    assert got == brute_perfmatch(inst.to_graph())
    assert {q.parameter for q in t.of(RESTRICTED)} == {inst.k}
    assert max(q.parameter for q in t.of(DEFECT)) == inst.k


def test_spectrum_oracle_agrees_with_brute():
    rng = random.Random(8)
    for _ in range(10):
        g = random_plane_graph(rng.randint(1, 8), rng, density=0.3)
        if len(g.faces()) > 12:
            continue
        for k in range(g.n + 1):
            assert FaceSpectrumOracle()(g, k) == brute_defects(g, k)


def test_parallel_queries_are_identical():
    inst = RestrDefectInstance(cycle_graph(6), frozenset({0, 3}), 2)
    t1, t2 = OracleTranscript(), OracleTranscript()
    oracle = BruteDefectOracle(max_vertices=128)
    assert restricted_to_defect(inst, oracle, t1, workers=Workers(1)) == restricted_to_defect(
        inst, oracle, t2, workers=Workers(2)
    )
    assert t1.queries == t2.queries


def test_promise_violations():
    c4 = cycle_graph(4)
    f = c4.outer_face().id
    with pytest.raises(PromiseViolation):
        apex_to_restricted(ApexInstance.build(c4, 2, [(0, 0), (1, 1)], [(0, 1)], [f]), BruteRestrictedOracle())
    with pytest.raises(PromiseViolation):
        apex_to_restricted(ApexInstance.build(c4, 2, [(0, 0), (1, 0)], (), [f]), BruteRestrictedOracle())
    with pytest.raises(PromiseViolation):
        apex_to_restricted(ApexInstance.build(c4, 1, [(0, 0, 2)], (), [f]), BruteRestrictedOracle())
    with pytest.raises(ValidationError):
        RestrDefectInstance(c4, frozenset({9}), 1)
