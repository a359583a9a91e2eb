"""Upstream hidden/observed partitions, the induced bi-grading, and
observed-variable ideal generators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DownstreamEdge, NotPartition
from .graph import DirectedGraph, require_polytree, top
from .trekmat import (
    Binomial,
    GeneratorSet,
    MomentVariable,
    linear_generators,
    trek_matrix,
    two_minors,
    TrekMatrix,
)


@dataclass(frozen=True)
class UpstreamPartition:
    hidden: frozenset[int]
    observed: frozenset[int]


def validate_upstream(g: DirectedGraph, hidden, observed) -> UpstreamPartition:
    """Check H, O partition V and no observed-to-hidden edge exists."""
    hidden = frozenset(hidden)
    observed = frozenset(observed)
    if hidden & observed or hidden | observed != set(g.vertices):
        raise NotPartition(f"H={sorted(hidden)}, O={sorted(observed)} do not partition 1..{g.n}")
    for tail, head in g.edges:
        if tail in observed and head in hidden:
            raise DownstreamEdge(f"edge {tail}->{head} goes from observed to hidden")
    return UpstreamPartition(hidden, observed)


MultiDegree = tuple[int, int]


def variable_multidegree(v: MomentVariable, part: UpstreamPartition) -> MultiDegree:
    observed_count = sum(1 for i in v.idx if i in part.observed)
    if v.kind == "s":
        return (1, 1 + observed_count)
    return (1, observed_count)


def monomial_multidegree(vars_, part: UpstreamPartition) -> MultiDegree:
    d0 = d1 = 0
    for v in vars_:
        a, b = variable_multidegree(v, part)
        d0 += a
        d1 += b
    return (d0, d1)


def check_homogeneous(f: Binomial, part: UpstreamPartition) -> bool:
    return monomial_multidegree(f.lhs.vars, part) == monomial_multidegree(f.rhs.vars, part)


def restricted_matrix(g: DirectedGraph, i: int, j: int, part: UpstreamPartition) -> TrekMatrix:
    """Submatrix of the trek-matrix keeping only all-observed column labels."""
    mat = trek_matrix(g, i, j)
    cols = []
    for tag, payload in mat.columns:
        labels = (payload,) if tag == "v" else payload
        if all(v in part.observed for v in labels):
            cols.append((tag, payload))
    return TrekMatrix(i, j, tuple(cols))


def observed_generators(g: DirectedGraph, part: UpstreamPartition) -> GeneratorSet:
    """Generators of the observed-variable ideal: restricted 2-minors plus
    all-observed linear generators."""
    require_polytree(g)
    linear = tuple(
        sorted(v for v in linear_generators(g) if all(i in part.observed for i in v.idx))
    )
    quadrics = []
    provenance = {}
    for i, j in combinations(sorted(part.observed), 2):
        if top(g, (i, j)) is None:
            continue
        mat = restricted_matrix(g, i, j, part)
        for (c1, c2), minor in zip(combinations(mat.columns, 2), two_minors(mat)):
            if minor not in provenance:
                provenance[minor] = ((i, j), (c1, c2))
                quadrics.append(minor)
    quadrics.sort(key=lambda b: (b.lhs, b.rhs))
    return GeneratorSet(g.n, linear, tuple(quadrics), provenance)
