from fractions import Fraction
from itertools import product

import pytest

from trekmoments import (
    DimensionMismatch,
    Disconnected,
    DirectedGraph,
    NotPolytree,
    check_vh_equality,
    exponent_vector,
    h_rep,
    lp_maximize,
    point_in_h,
    vertex_set,
)
from trekmoments.polytope import Constraint, HRep
from trekmoments.errors import Infeasible, Unbounded

from conftest import CHAIN3, STAR5, TRIANGLE, TWO_NODE


def test_exponent_vector_star():
    e = exponent_vector(STAR5, 1, 2, 3)
    assert e.z == (1, 0, 0, 0, 0)
    assert e.y == (1, 1, 0, 0)
    e2 = exponent_vector(STAR5, 2, 2, 3)
    assert e2.z == (1, 0, 0, 0, 0)
    assert e2.y == (2, 1, 0, 0)
    e3 = exponent_vector(STAR5, 4, 4, 4)
    assert e3.z == (0, 0, 0, 1, 0)
    assert e3.y == (0, 0, 0, 0)


def test_vertex_set_counts():
    # every triple has a 3-trek on the star, so C(5+2, 3) index choices
    assert len(vertex_set(STAR5)) == 35
    assert len(vertex_set(TWO_NODE)) == 4


def test_vertex_set_rejects_bad_graphs():
    with pytest.raises(NotPolytree):
        vertex_set(TRIANGLE)
    with pytest.raises(Disconnected):
        vertex_set(DirectedGraph(3, ((1, 2),)))


def test_vertices_satisfy_h_rep():
    for g in (TWO_NODE, CHAIN3, STAR5):
        h = h_rep(g)
        for v in vertex_set(g):
            assert point_in_h(h, [Fraction(c) for c in v.as_point()])


def test_point_outside_h():
    h = h_rep(TWO_NODE)
    # z does not sum to one
    assert not point_in_h(h, [Fraction(1), Fraction(1), Fraction(0)])
    # negative edge coordinate
    assert not point_in_h(h, [Fraction(1), Fraction(0), Fraction(-1)])
    with pytest.raises(DimensionMismatch):
        point_in_h(h, [Fraction(1)])


def test_lp_simple_box():
    # max x subject to x >= 0, -x >= -5 (i.e. x <= 5)
    variables = (("z", 1),)
    cons = (
        Constraint(((("z", 1), 1),), ">=", 0, ("lo",)),
        Constraint(((("z", 1), -1),), ">=", -5, ("hi",)),
    )
    res = lp_maximize(HRep(variables, cons), [Fraction(1)])
    assert res.optimum == 5
    assert res.argmax == (Fraction(5),)


def test_lp_infeasible_and_unbounded():
    variables = (("z", 1),)
    infeasible = (
        Constraint(((("z", 1), 1),), ">=", 1, ("a",)),
        Constraint(((("z", 1), -1),), ">=", 0, ("b",)),
    )
    with pytest.raises(Infeasible):
        lp_maximize(HRep(variables, infeasible), [Fraction(1)])
    unbounded = (Constraint(((("z", 1), 1),), ">=", 0, ("a",)),)
    with pytest.raises(Unbounded):
        lp_maximize(HRep(variables, unbounded), [Fraction(1)])


def test_lp_matches_vertex_max_exhaustively_two_node():
    h = h_rep(TWO_NODE)
    points = [tuple(Fraction(c) for c in v.as_point()) for v in vertex_set(TWO_NODE)]
    for objective in product(range(-2, 3), repeat=3):
        lp = lp_maximize(h, [Fraction(c) for c in objective])
        best = max(sum(c * x for c, x in zip(objective, p)) for p in points)
        assert lp.optimum == best, objective


def test_check_vh_equality_clean():
    rep = check_vh_equality(CHAIN3, trials=40, seed=0)
    assert rep.ok
    assert rep.vertices_in_h
    assert not rep.discrepancies


def test_mutated_h_rep_detected():
    h = h_rep(CHAIN3)
    for edge in CHAIN3.edges:
        mutated = h.drop(("edge", edge))
        assert len(mutated.constraints) == len(h.constraints) - 1
        rep = check_vh_equality(CHAIN3, trials=40, seed=0, h=mutated)
        assert not rep.ok, edge
