import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from trekmoments import (
    DirectedGraph,
    InputError,
    ModelParameters,
    MomentData,
    forward_moments,
    is_positive_definite,
    moments_equal,
    params_to_ab,
    sample_params,
    trek_rule_moments,
)

from conftest import CHAIN3, STAR5, TWO_NODE, random_dag


def two_node_params(lam=Fraction(2), w2=(1, 1), w3=(1, 1)):
    return ModelParameters(
        {(1, 2): lam},
        {1: Fraction(w2[0]), 2: Fraction(w2[1])},
        {1: Fraction(w3[0]), 2: Fraction(w3[1])},
    )


def test_forward_moments_two_node_by_hand():
    # X1 = e1, X2 = 2 X1 + e2 with unit error moments
    m = forward_moments(TWO_NODE, two_node_params())
    assert m.s(1, 1) == 1
    assert m.s(1, 2) == 2
    assert m.s(2, 2) == 5  # 4*1 + 1
    assert m.t(1, 1, 1) == 1
    assert m.t(1, 1, 2) == 2
    assert m.t(1, 2, 2) == 4
    assert m.t(2, 2, 2) == 9  # 8*1 + 1


def test_change_of_parameters_diagonal_identities():
    p = sample_params(STAR5, seed=3)
    q = params_to_ab(STAR5, p)
    m = forward_moments(STAR5, p)
    for v in STAR5.vertices:
        assert q.a[v] == m.s(v, v)
        assert q.b[v] == m.t(v, v, v)


def test_trek_rule_equals_forward_chain():
    for seed in range(30):
        p = sample_params(CHAIN3, seed=seed)
        assert moments_equal(
            forward_moments(CHAIN3, p), trek_rule_moments(CHAIN3, params_to_ab(CHAIN3, p))
        )


def test_trek_rule_equals_forward_random_dags():
    rng = random.Random(11)
    for _ in range(10):
        g = random_dag(5, rng)
        for seed in range(5):
            p = sample_params(g, seed=seed)
            assert moments_equal(
                forward_moments(g, p), trek_rule_moments(g, params_to_ab(g, p))
            )


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_sampled_covariance_is_pd(seed):
    p = sample_params(STAR5, seed=seed)
    m = forward_moments(STAR5, p)
    assert is_positive_definite(m.s_matrix())


def test_moment_json_round_trip():
    m = forward_moments(TWO_NODE, two_node_params())
    again = MomentData.from_json(m.to_json())
    assert moments_equal(m, again)
    assert isinstance(again.s(1, 2), Fraction)


def test_moment_json_rejects_garbage():
    with pytest.raises(InputError):
        MomentData.from_json("[]")
    with pytest.raises(InputError):
        MomentData.from_json('{"n": 2, "S": [[1, 2]]}')
    with pytest.raises(InputError):
        MomentData.from_json('{"n": 2, "S": [[2, 1, "1"]], "T": []}')


def test_float_mode_sampling():
    from trekmoments import SampleConfig

    p = sample_params(CHAIN3, seed=1, config=SampleConfig(kind="float"))
    m = forward_moments(CHAIN3, p)
    assert isinstance(m.s(1, 2), float)


def test_sampling_is_deterministic():
    g = DirectedGraph(4, ((1, 2), (2, 3), (2, 4)))
    assert sample_params(g, seed=42) == sample_params(g, seed=42)
    assert sample_params(g, seed=42) != sample_params(g, seed=43)
