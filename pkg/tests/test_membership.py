import random
from fractions import Fraction

import pytest

from trekmoments import (
    MomentData,
    NotPolytree,
    ShapeMismatch,
    decide_membership,
    edge_generator_set,
    evaluate_generators,
    forward_moments,
    recover_lambda,
    sample_params,
)

from conftest import CHAIN3, STAR5, TRIANGLE, TWO_NODE, random_polytree


def perturb_t(m: MomentData, key, delta=Fraction(1)) -> MomentData:
    T = dict(m.T)
    T[key] = T.get(key, 0) + delta
    return MomentData(m.n, m.S, T)


def perturb_s(m: MomentData, key, delta=Fraction(1, 7)) -> MomentData:
    S = dict(m.S)
    S[key] = S.get(key, 0) + delta
    return MomentData(m.n, S, m.T)


def test_round_trip_recovers_parameters():
    for seed in range(25):
        p = sample_params(STAR5, seed=seed)
        m = forward_moments(STAR5, p)
        result = decide_membership(STAR5, m)
        assert result.inside
        assert result.recovered.lam == p.lam
        assert result.recovered.omega2 == p.omega2
        assert result.recovered.omega3 == p.omega3


def test_perturbed_tensor_is_outside_with_certificate():
    m = forward_moments(CHAIN3, sample_params(CHAIN3, seed=2))
    bad = perturb_t(m, (1, 2, 3))
    result = decide_membership(CHAIN3, bad)
    assert not result.inside
    assert result.certificate
    assert any(v.kind == "T'" for v in result.certificate)


def test_perturbed_covariance_is_outside():
    m = forward_moments(CHAIN3, sample_params(CHAIN3, seed=2))
    bad = perturb_s(m, (1, 3))
    result = decide_membership(CHAIN3, bad)
    assert not result.inside


def test_non_pd_covariance_rejected_early():
    m = forward_moments(TWO_NODE, sample_params(TWO_NODE, seed=0))
    S = dict(m.S)
    S[(1, 1)] = Fraction(-1)
    result = decide_membership(TWO_NODE, MomentData(m.n, S, m.T))
    assert not result.inside
    assert all(v.kind == "pd_minor" for v in result.certificate)


def test_wrong_graph_direction_detected():
    # moments generated from 1 <- 2 are generically outside the 1 -> 2 model?
    # No: the two-node models coincide as sets, so use the three-node collider
    # versus chain instead.
    from conftest import COLLIDER

    m = forward_moments(COLLIDER, sample_params(COLLIDER, seed=4))
    result = decide_membership(CHAIN3, m)
    assert not result.inside


def test_shape_and_class_errors():
    m = forward_moments(TWO_NODE, sample_params(TWO_NODE, seed=0))
    with pytest.raises(ShapeMismatch):
        decide_membership(CHAIN3, m)
    with pytest.raises(NotPolytree):
        decide_membership(TRIANGLE, forward_moments(TRIANGLE, sample_params(TRIANGLE, seed=0)))


def test_recover_lambda_ratio():
    p = sample_params(TWO_NODE, seed=9)
    m = forward_moments(TWO_NODE, p)
    lam = recover_lambda(TWO_NODE, m)
    assert lam[(1, 2)] == p.lam[(1, 2)]
    assert lam[(1, 2)] == m.s(1, 2) / m.s(1, 1)


def test_verdict_matches_generator_residuals():
    rng = random.Random(17)
    for trial in range(15):
        g = random_polytree(rng.randint(2, 6), rng)
        gens = edge_generator_set(g)
        m = forward_moments(g, sample_params(g, seed=trial))
        inside = decide_membership(g, m).inside
        residual = evaluate_generators(gens, m)
        assert inside
        assert residual.max_abs_residual == 0
        bad = perturb_t(m, tuple(sorted((1, 1, g.n))))
        inside_bad = decide_membership(g, bad).inside
        residual_bad = evaluate_generators(gens, bad)
        from trekmoments import is_positive_definite

        pd = is_positive_definite(bad.s_matrix())
        assert inside_bad == (residual_bad.max_abs_residual == 0 and pd)


def test_float_tolerance_accepts_rounded_moments():
    p = sample_params(CHAIN3, seed=6)
    m = forward_moments(CHAIN3, p)
    floats = MomentData(
        m.n,
        {k: float(v) for k, v in m.S.items()},
        {k: float(v) for k, v in m.T.items()},
    )
    assert decide_membership(CHAIN3, floats, tolerance=1e-9).inside
