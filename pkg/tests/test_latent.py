import random

import pytest

from trekmoments import (
    DirectedGraph,
    DownstreamEdge,
    MomentVariable,
    NotPartition,
    check_homogeneous,
    degree2_span_rank,
    forward_moments,
    full_generator_set,
    monomial_multidegree,
    observed_generators,
    restricted_matrix,
    sample_params,
    validate_upstream,
    variable_multidegree,
)

from conftest import CHAIN4, STAR5, random_polytree


def star_partition():
    return validate_upstream(STAR5, {1}, {2, 3, 4, 5})


def test_partition_validation():
    with pytest.raises(NotPartition):
        validate_upstream(STAR5, {1, 2}, {2, 3, 4, 5})
    with pytest.raises(NotPartition):
        validate_upstream(STAR5, {1}, {2, 3, 4})
    # hiding a sink puts an observed -> hidden edge in the graph
    with pytest.raises(DownstreamEdge):
        validate_upstream(STAR5, {2}, {1, 3, 4, 5})


def test_multidegrees():
    part = star_partition()
    assert variable_multidegree(MomentVariable.cov(1, 1), part) == (1, 1)
    assert variable_multidegree(MomentVariable.cov(1, 2), part) == (1, 2)
    assert variable_multidegree(MomentVariable.cov(2, 3), part) == (1, 3)
    assert variable_multidegree(MomentVariable.third(1, 1, 1), part) == (1, 0)
    assert variable_multidegree(MomentVariable.third(1, 2, 3), part) == (1, 2)
    assert variable_multidegree(MomentVariable.third(2, 3, 4), part) == (1, 3)


def test_full_generators_homogeneous_under_all_upstream_partitions():
    for g in (STAR5, CHAIN4):
        gens = full_generator_set(g)
        for mask in range(2 ** g.n):
            hidden = {v for v in g.vertices if mask >> (v - 1) & 1}
            observed = set(g.vertices) - hidden
            try:
                part = validate_upstream(g, hidden, observed)
            except DownstreamEdge:
                continue
            for b in gens.quadrics:
                assert check_homogeneous(b, part), (hidden, str(b))


def test_inhomogeneous_binomial_detected():
    from trekmoments import Binomial, Monomial

    part = star_partition()
    b = Binomial(
        Monomial.of(MomentVariable.cov(1, 1), MomentVariable.cov(2, 3)),
        Monomial.of(MomentVariable.cov(1, 2), MomentVariable.cov(1, 3)),
    )
    assert check_homogeneous(b, part)
    assert monomial_multidegree(b.lhs.vars, part) == (2, 4)
    b2 = Binomial(
        Monomial.of(MomentVariable.cov(1, 1), MomentVariable.cov(2, 3)),
        Monomial.of(MomentVariable.cov(1, 2), MomentVariable.cov(1, 1)),
    )
    assert monomial_multidegree(b2.rhs.vars, part) == (2, 3)
    assert not check_homogeneous(b2, part)


def test_restricted_matrix_keeps_observed_columns_only():
    part = star_partition()
    mat = restricted_matrix(STAR5, 2, 3, part)
    for tag, payload in mat.columns:
        labels = (payload,) if tag == "v" else payload
        assert all(v in part.observed for v in labels)


def test_observed_rank_star():
    assert degree2_span_rank(observed_generators(STAR5, star_partition())) == 126


def test_observed_generators_vanish_on_marginals():
    rng = random.Random(23)
    for trial in range(20):
        g = random_polytree(rng.randint(3, 6), rng)
        roots = [v for v in g.vertices if not g.parents(v)]
        hidden = {roots[0]}
        observed = set(g.vertices) - hidden
        try:
            part = validate_upstream(g, hidden, observed)
        except DownstreamEdge:
            continue
        gens = observed_generators(g, part)
        m = forward_moments(g, sample_params(g, seed=trial))
        assert all(v.evaluate(m) == 0 for v in gens.linear)
        assert all(b.evaluate(m) == 0 for b in gens.quadrics)


def test_observed_generators_use_observed_variables_only():
    part = star_partition()
    gens = observed_generators(STAR5, part)
    for b in gens.quadrics:
        for var in b.variables():
            assert all(i in part.observed for i in var.idx)
    for v in gens.linear:
        assert all(i in part.observed for i in v.idx)


def test_chain_with_two_hidden():
    g = DirectedGraph(4, ((1, 2), (2, 3), (3, 4)))
    part = validate_upstream(g, {1, 2}, {3, 4})
    gens = observed_generators(g, part)
    m = forward_moments(g, sample_params(g, seed=8))
    assert all(b.evaluate(m) == 0 for b in gens.quadrics)
