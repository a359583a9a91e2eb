"""The third-order moment polytope: exponent vectors, inequality description,
exact rational LP, and V/H cross-validation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import Disconnected, DimensionMismatch, Infeasible, NoTrek, Unbounded
from .graph import DirectedGraph, GraphClass, classify, require_polytree, simple_trek

VarKey = tuple[str, object]  # ("z", vertex) or ("y", edge)


@dataclass(frozen=True)
class ExponentVector:
    """Exponents (z over vertices, y over edges) of a t_{ijk} trek monomial."""

    z: tuple[int, ...]
    y: tuple[int, ...]
    triple: tuple[int, int, int]

    def as_point(self) -> tuple[int, ...]:
        return self.z + self.y


def exponent_vector(g: DirectedGraph, i: int, j: int, k: int) -> ExponentVector:
    trek = simple_trek(g, tuple(sorted((i, j, k))))
    if trek is None:
        raise NoTrek(f"no 3-trek between {i}, {j}, {k}")
    z = [0] * g.n
    z[trek.top - 1] = 1
    mult = trek.edge_multiplicities()
    y = [mult.get(e, 0) for e in g.edges]
    return ExponentVector(tuple(z), tuple(y), tuple(sorted((i, j, k))))


def vertex_set(g: DirectedGraph) -> list[ExponentVector]:
    """One exponent vector per sorted triple admitting a 3-trek."""
    cls = classify(g)
    if cls is GraphClass.POLYFOREST:
        raise Disconnected("polytope construction requires a connected polytree")
    require_polytree(g)
    out = []
    for i, j, k in combinations_with_replacement(g.vertices, 3):
        if simple_trek(g, (i, j, k)) is not None:
            out.append(exponent_vector(g, i, j, k))
    return out


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[VarKey, int], ...]
    rel: str  # ">=" or "=="
    rhs: int
    tag: tuple

    def coeff_map(self) -> dict:
        return dict(self.coeffs)


@dataclass(frozen=True)
class HRep:
    variables: tuple[VarKey, ...]
    constraints: tuple[Constraint, ...]

    def drop(self, tag: tuple) -> "HRep":
        """Copy without the constraints carrying the given tag (mutation tests)."""
        return HRep(self.variables, tuple(c for c in self.constraints if c.tag != tag))


def h_rep(g: DirectedGraph) -> HRep:
    """Inequality description: nonnegativity, sum of z equal to one, one
    edge inequality per edge, one flow inequality per vertex."""
    require_polytree(g)
    variables = tuple(("z", v) for v in g.vertices) + tuple(("y", e) for e in g.edges)
    cons = []
    for v in g.vertices:
        cons.append(Constraint(((("z", v), 1),), ">=", 0, ("z_nonneg", v)))
    for e in g.edges:
        cons.append(Constraint(((("y", e), 1),), ">=", 0, ("y_nonneg", e)))
    cons.append(Constraint(tuple((("z", v), 1) for v in g.vertices), "==", 1, ("z_sum",)))
    for l, m in g.edges:
        coeffs = [(("z", l), 2)]
        coeffs += [(("y", (h, l)), 1) for h, l2 in g.edges if l2 == l]
        coeffs.append((("y", (l, m)), -1))
        cons.append(Constraint(_merge(coeffs), ">=", 0, ("edge", (l, m))))
    for l in g.vertices:
        coeffs = [(("z", l), 3)]
        coeffs += [(("y", (h, l)), 1) for h, l2 in g.edges if l2 == l]
        coeffs += [(("y", (l, m)), -1) for l2, m in g.edges if l2 == l]
        cons.append(Constraint(_merge(coeffs), ">=", 0, ("vertex", l)))
    return HRep(variables, tuple(cons))


def _merge(coeffs) -> tuple:
    acc: dict = {}
    for key, c in coeffs:
        acc[key] = acc.get(key, 0) + c
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


def point_in_h(h: HRep, point) -> bool:
    """Exact satisfaction of every constraint by the given (z, y) vector."""
    if len(point) != len(h.variables):
        raise DimensionMismatch(f"point has {len(point)} coords, expected {len(h.variables)}")
    index = {key: i for i, key in enumerate(h.variables)}
    for con in h.constraints:
        value = sum(c * point[index[key]] for key, c in con.coeffs)
        if con.rel == "==" and value != con.rhs:
            return False
        if con.rel == ">=" and value < con.rhs:
            return False
    return True


@dataclass(frozen=True)
class LPResult:
    optimum: Fraction
    argmax: tuple[Fraction, ...]


def _pivot(tab, basis, row, col):
    p = tab[row][col]
    tab[row] = [x / p for x in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col] != 0:
            f = tab[r][col]
            tab[r] = [x - f * y for x, y in zip(tab[r], tab[row])]
    basis[row] = col


def _simplex(tab, basis, costs, allowed):
    """Primal simplex with Bland's rule; maximizes costs over the tableau."""
    m = len(tab)
    ncols = len(tab[0]) - 1
    while True:
        entering = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            reduced = costs[j] - sum(costs[basis[i]] * tab[i][j] for i in range(m))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return
        leaving = None
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise Unbounded("objective is unbounded above")
        _pivot(tab, basis, leaving, entering)


def lp_maximize(h: HRep, objective) -> LPResult:
    """Exact two-phase simplex over the constraint system.

    ``objective`` is a rational vector aligned with ``h.variables``;
    variables are treated as free (nonnegativity enters only through the
    explicit constraints).
    """
    d = len(h.variables)
    if len(objective) != d:
        raise DimensionMismatch(f"objective has {len(objective)} coords, expected {d}")
    index = {key: i for i, key in enumerate(h.variables)}
    ineq_rows = [c for c in h.constraints if c.rel == ">="]
    n_rows = len(h.constraints)
    n_slack = len(ineq_rows)
    # Columns: u (d), w (d) with x = u - w, slacks, artificials.
    ncols = 2 * d + n_slack + n_rows
    tab = []
    slack_pos = 0
    for r, con in enumerate(h.constraints):
        row = [Fraction(0)] * (ncols + 1)
        for key, c in con.coeffs:
            i = index[key]
            row[i] += c
            row[d + i] -= c
        if con.rel == ">=":
            row[2 * d + slack_pos] = Fraction(-1)
            slack_pos += 1
        row[-1] = Fraction(con.rhs)
        if row[-1] < 0:
            row = [-x for x in row]
        row[2 * d + n_slack + r] = Fraction(1)
        tab.append(row)
    basis = [2 * d + n_slack + r for r in range(n_rows)]

    structural = set(range(2 * d + n_slack))
    # Phase 1: drive artificials to zero.
    costs1 = [Fraction(0)] * ncols
    for j in range(2 * d + n_slack, ncols):
        costs1[j] = Fraction(-1)
    _simplex(tab, basis, costs1, structural | set(range(2 * d + n_slack, ncols)))
    if any(costs1[basis[i]] * tab[i][-1] != 0 for i in range(n_rows)):
        raise Infeasible("constraint system has no solution")
    for i in range(n_rows):
        if basis[i] >= 2 * d + n_slack:
            col = next((j for j in sorted(structural) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    # Phase 2.
    costs2 = [Fraction(0)] * ncols
    for i, c in enumerate(objective):
        costs2[i] = Fraction(c)
        costs2[d + i] = -Fraction(c)
    live_rows = [i for i in range(n_rows) if basis[i] < 2 * d + n_slack]
    tab = [tab[i] for i in live_rows]
    basis = [basis[i] for i in live_rows]
    _simplex(tab, basis, costs2, structural)
    values = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        values[b] = tab[i][-1]
    argmax = tuple(values[i] - values[d + i] for i in range(d))
    optimum = sum(Fraction(c) * x for c, x in zip(objective, argmax))
    return LPResult(optimum, argmax)


@dataclass(frozen=True)
class VHReport:
    vertices_checked: int
    vertices_in_h: bool
    trials: int
    discrepancies: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return self.vertices_in_h and not self.discrepancies


def check_vh_equality(g: DirectedGraph, trials: int = 200, seed: int = 0,
                      h: HRep | None = None) -> VHReport:
    """Exact V-in-H containment plus randomized support-function comparison."""
    vertices = vertex_set(g)
    hrep = h if h is not None else h_rep(g)
    points = [tuple(Fraction(c) for c in v.as_point()) for v in vertices]
    vertices_in_h = all(point_in_h(hrep, p) for p in points)
    rng = random.Random(seed)
    d = len(hrep.variables)
    discrepancies = []
    for _ in range(trials):
        objective = [rng.randint(-9, 9) for _ in range(d)]
        vertex_max = max(sum(c * x for c, x in zip(objective, p)) for p in points)
        try:
            lp = lp_maximize(hrep, objective)
            lp_opt = lp.optimum
        except Unbounded:
            lp_opt = "unbounded"
        if lp_opt != vertex_max:
            discrepancies.append(
                {"objective": objective, "lp_optimum": str(lp_opt), "vertex_max": str(vertex_max)}
            )
    return VHReport(len(vertices), vertices_in_h, trials, tuple(discrepancies))
