"""Symbolic moment variables, trek-matrices, and binomial generating sets.

For a polytree the moment parametrization is a monomial map, so every
relation needed here is a binomial; the quadratic ones arise as 2-minors of
two-row trek-matrices.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .errors import InputError, NoTrek, NotPolytree
from .graph import (
    DirectedGraph,
    require_polytree,
    require_polytree_or_forest,
    simple_trek,
    top,
)
from .moments import MomentData, Scalar

# Column labels of a trek-matrix: a single vertex or a sorted vertex pair.
ColumnLabel = tuple[str, object]  # ("v", k) or ("p", (l, m))


@dataclass(frozen=True, order=True)
class MomentVariable:
    """A moment coordinate: s_{ij} (kind "s") or t_{ijk} (kind "t")."""

    kind: str
    idx: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("s", "t"):
            raise ValueError(f"bad kind {self.kind!r}")
        expected = 2 if self.kind == "s" else 3
        if len(self.idx) != expected or list(self.idx) != sorted(self.idx):
            raise ValueError(f"bad indices {self.idx} for kind {self.kind}")

    @classmethod
    def cov(cls, i: int, j: int) -> "MomentVariable":
        return cls("s", tuple(sorted((i, j))))

    @classmethod
    def third(cls, i: int, j: int, k: int) -> "MomentVariable":
        return cls("t", tuple(sorted((i, j, k))))

    @property
    def name(self) -> str:
        if all(i < 10 for i in self.idx):
            return f"{self.kind}_{''.join(map(str, self.idx))}"
        return f"{self.kind}_{'_'.join(map(str, self.idx))}"

    def evaluate(self, m: MomentData) -> Scalar:
        if self.kind == "s":
            return m.s(*self.idx)
        return m.t(*self.idx)

    def to_json(self):
        return [self.kind, list(self.idx)]

    @classmethod
    def from_json(cls, data) -> "MomentVariable":
        kind, idx = data
        return cls(kind, tuple(idx))


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of moment variables, stored sorted."""

    vars: tuple[MomentVariable, ...]

    @classmethod
    def of(cls, *variables: MomentVariable) -> "Monomial":
        return cls(tuple(sorted(variables)))

    @property
    def degree(self) -> int:
        return len(self.vars)

    def index_multiset(self) -> Counter:
        counter: Counter = Counter()
        for v in self.vars:
            counter.update(v.idx)
        return counter

    def evaluate(self, m: MomentData) -> Scalar:
        result = 1
        for v in self.vars:
            result = result * v.evaluate(m)
        return result

    def __str__(self) -> str:
        return "*".join(v.name for v in self.vars)


@dataclass(frozen=True)
class Binomial:
    """The binomial lhs - rhs; orientation is preserved as constructed."""

    lhs: Monomial
    rhs: Monomial

    def __post_init__(self):
        if self.lhs == self.rhs:
            raise ValueError("binomial would be the zero polynomial")

    def canonical(self) -> "Binomial":
        if self.lhs > self.rhs:
            return self
        return Binomial(self.rhs, self.lhs)

    def evaluate(self, m: MomentData) -> Scalar:
        return self.lhs.evaluate(m) - self.rhs.evaluate(m)

    def variables(self) -> set[MomentVariable]:
        return set(self.lhs.vars) | set(self.rhs.vars)

    def __str__(self) -> str:
        return f"{self.lhs} - {self.rhs}"


# ---------------------------------------------------------------------------
# Trek-rule images and the variable ordering
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def variable_image(g: DirectedGraph, var: MomentVariable):
    """Exponents of the monomial image of ``var`` under the trek rule.

    Returns a frozenset of (symbol, exponent) pairs, where a symbol is
    ("a", v), ("b", v) or ("l", edge); ``None`` when no trek exists.
    """
    trek = simple_trek(g, var.idx)
    if trek is None:
        return None
    counter: Counter = Counter()
    counter[("a" if var.kind == "s" else "b", trek.top)] += 1
    for edge, mult in trek.edge_multiplicities().items():
        counter[("l", edge)] += mult
    return frozenset(counter.items())


def monomial_image(g: DirectedGraph, mono: Monomial):
    """Combined trek-rule image of a monomial; None when any factor vanishes."""
    counter: Counter = Counter()
    for v in mono.vars:
        image = variable_image(g, v)
        if image is None:
            return None
        counter.update(dict(image))
    return frozenset(counter.items())


def _order_key(g: DirectedGraph, var: MomentVariable):
    trek = simple_trek(g, var.idx)
    if trek is None:
        raise NoTrek(f"{var.name} has no trek; ordering undefined")
    return (0 if var.kind == "s" else 1, trek.top, tuple(sorted(trek.node_sequences())))


def compare_vars(u: MomentVariable, v: MomentVariable, g: DirectedGraph) -> int:
    """Total order: covariances first, then lower top, then lowest path sequences."""
    ku, kv = _order_key(g, u), _order_key(g, v)
    return (ku > kv) - (ku < kv)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def linear_generators(g: DirectedGraph) -> list[MomentVariable]:
    """Moment coordinates that vanish identically: pairs/triples with no trek."""
    require_polytree_or_forest(g)
    gens = []
    for i, j in combinations_with_replacement(g.vertices, 2):
        if top(g, (i, j)) is None:
            gens.append(MomentVariable.cov(i, j))
    for i, j, k in combinations_with_replacement(g.vertices, 3):
        if top(g, (i, j, k)) is None:
            gens.append(MomentVariable.third(i, j, k))
    return gens


@dataclass(frozen=True)
class TrekMatrix:
    """The 2 x N matrix of moment variables sharing equal tops with rows i, j."""

    i: int
    j: int
    columns: tuple[ColumnLabel, ...]

    def entry(self, row: int, column: ColumnLabel) -> MomentVariable:
        if row not in (self.i, self.j):
            raise ValueError(f"row {row} not in ({self.i}, {self.j})")
        tag, payload = column
        if tag == "v":
            return MomentVariable.cov(row, payload)
        l, m = payload
        return MomentVariable.third(row, l, m)

    def row(self, row: int) -> list[MomentVariable]:
        return [self.entry(row, c) for c in self.columns]


@lru_cache(maxsize=None)
def trek_matrix(g: DirectedGraph, i: int, j: int) -> TrekMatrix:
    """Trek-matrix between i and j: columns pass the top-equality test."""
    require_polytree(g)
    if top(g, (i, j)) is None:
        raise NoTrek(f"no 2-trek between {i} and {j}")
    vertex_cols = []
    for k in g.vertices:
        ti, tj = top(g, (i, k)), top(g, (j, k))
        if ti is not None and ti == tj:
            vertex_cols.append(("v", k))
    pair_cols = []
    for l, m in combinations_with_replacement(g.vertices, 2):
        ti, tj = top(g, (i, l, m)), top(g, (j, l, m))
        if ti is not None and ti == tj:
            pair_cols.append(("p", (l, m)))
    return TrekMatrix(i, j, tuple(vertex_cols) + tuple(pair_cols))


def two_minors(mat: TrekMatrix) -> list[Binomial]:
    """One canonical binomial per unordered column pair."""
    minors = []
    for c1, c2 in combinations(mat.columns, 2):
        lhs = Monomial.of(mat.entry(mat.i, c1), mat.entry(mat.j, c2))
        rhs = Monomial.of(mat.entry(mat.j, c1), mat.entry(mat.i, c2))
        assert lhs != rhs, f"degenerate minor from columns {c1}, {c2} of A_{mat.i},{mat.j}"
        minors.append(Binomial(lhs, rhs).canonical())
    return minors


@dataclass
class GeneratorSet:
    """Linear generators plus deduplicated quadratic binomials with provenance."""

    n: int
    linear: tuple[MomentVariable, ...]
    quadrics: tuple[Binomial, ...]
    provenance: dict[Binomial, tuple] = field(default_factory=dict)


def _collect(g: DirectedGraph, pairs) -> GeneratorSet:
    linear = tuple(sorted(linear_generators(g)))
    quadrics = []
    provenance: dict[Binomial, tuple] = {}
    for i, j in pairs:
        mat = trek_matrix(g, i, j)
        for (c1, c2), minor in zip(combinations(mat.columns, 2), two_minors(mat)):
            if minor not in provenance:
                provenance[minor] = ((i, j), (c1, c2))
                quadrics.append(minor)
    quadrics.sort(key=lambda b: (b.lhs, b.rhs))
    return GeneratorSet(g.n, linear, tuple(quadrics), provenance)


def edge_generator_set(g: DirectedGraph) -> GeneratorSet:
    """Linear generators and 2-minors of the trek-matrices of directed edges."""
    require_polytree(g)
    return _collect(g, g.edges)


def full_generator_set(g: DirectedGraph) -> GeneratorSet:
    """Linear generators and 2-minors over all vertex pairs admitting a 2-trek."""
    require_polytree(g)
    pairs = [(i, j) for i, j in combinations(g.vertices, 2) if top(g, (i, j)) is not None]
    return _collect(g, pairs)


# ---------------------------------------------------------------------------
# Exact rank of the quadratic span
# ---------------------------------------------------------------------------


class LinearSpan:
    """Incremental row space over Q, rows keyed by arbitrary hashable monomials."""

    def __init__(self):
        self.pivots: dict[object, dict[object, Fraction]] = {}

    def _reduce(self, row: dict) -> dict:
        row = {k: Fraction(v) for k, v in row.items() if v != 0}
        while row:
            p = max(row)
            if p not in self.pivots:
                break
            coeff = row[p]
            for k, v in self.pivots[p].items():
                row[k] = row.get(k, Fraction(0)) - coeff * v
                if row[k] == 0:
                    del row[k]
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; True if it was independent of the current span."""
        row = self._reduce(row)
        if not row:
            return False
        p = max(row)
        inv = 1 / row[p]
        self.pivots[p] = {k: v * inv for k, v in row.items()}
        return True

    def contains(self, row: dict) -> bool:
        return not self._reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _binomial_row(b: Binomial) -> dict:
    if b.lhs == b.rhs:
        return {}
    return {b.lhs: Fraction(1), b.rhs: Fraction(-1)}


def binomial_span(binomials) -> LinearSpan:
    span = LinearSpan()
    for b in binomials:
        span.add(_binomial_row(b))
    return span


def degree2_span_rank(gens: GeneratorSet | list[Binomial] | tuple[Binomial, ...]) -> int:
    """Exact rank over Q of the quadrics as vectors indexed by degree-2 monomials."""
    quadrics = gens.quadrics if isinstance(gens, GeneratorSet) else gens
    return binomial_span(quadrics).rank


# ---------------------------------------------------------------------------
# Decomposition into at most two minors (constructive quadratic membership)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinorPart:
    """A 2-minor of the trek-matrix of ``source``, oriented for telescoping."""

    minor: Binomial
    source: tuple[int, int]


def _counter_minus(idx: tuple[int, ...], v: int) -> tuple[int, ...]:
    c = Counter(idx)
    c[v] -= 1
    return tuple(sorted(c.elements()))


def _column_label(rest: tuple[int, ...]) -> ColumnLabel:
    return ("v", rest[0]) if len(rest) == 1 else ("p", rest)


def _column_valid(g: DirectedGraph, r1: int, r2: int, label: ColumnLabel) -> bool:
    tag, payload = label
    sinks = (payload,) if tag == "v" else payload
    t1 = top(g, (r1,) + sinks)
    return t1 is not None and t1 == top(g, (r2,) + sinks)


def _as_minor(g: DirectedGraph, m1: Monomial, m2: Monomial) -> MinorPart | None:
    """Match m1 - m2 to a 2-minor of some trek-matrix, keeping orientation."""
    u_opts = [(m1.vars[0], m1.vars[1]), (m1.vars[1], m1.vars[0])]
    x_opts = [(m2.vars[0], m2.vars[1]), (m2.vars[1], m2.vars[0])]
    for u, v in u_opts:
        for x, y in x_opts:
            for r1 in sorted(set(u.idx) & set(x.idx)):
                c1 = _counter_minus(u.idx, r1)
                c2 = _counter_minus(x.idx, r1)
                for r2 in sorted(set(v.idx) & set(y.idx)):
                    if r2 == r1:
                        continue
                    if _counter_minus(v.idx, r2) != c2 or _counter_minus(y.idx, r2) != c1:
                        continue
                    if top(g, (r1, r2)) is None:
                        continue
                    lab1, lab2 = _column_label(c1), _column_label(c2)
                    if _column_valid(g, r1, r2, lab1) and _column_valid(g, r1, r2, lab2):
                        return MinorPart(Binomial(m1, m2), tuple(sorted((r1, r2))))
    return None


def _candidate_middles(m1: Monomial) -> list[Monomial]:
    kinds = sorted(v.kind for v in m1.vars)
    sizes = [2 if k == "s" else 3 for k in kinds]
    indices = tuple(sorted(m1.index_multiset().elements()))
    seen = set()
    out = []
    for positions in combinations(range(len(indices)), sizes[0]):
        first = tuple(indices[p] for p in positions)
        second = tuple(indices[p] for p in range(len(indices)) if p not in positions)
        key = (first, second) if sizes[0] != sizes[1] else tuple(sorted((first, second)))
        if key in seen:
            continue
        seen.add(key)
        out.append(Monomial.of(MomentVariable(kinds[0], first), MomentVariable(kinds[1], second)))
    return out


def decompose_binomial(g: DirectedGraph, f: Binomial) -> list[MinorPart] | None:
    """Express a vanishing quadratic binomial as one minor or a telescoping
    sum of two; returns None when the binomial is not in the ideal."""
    require_polytree(g)
    if f.lhs.degree != 2 or f.rhs.degree != 2:
        raise ValueError("decompose_binomial expects a quadratic binomial")
    img1 = monomial_image(g, f.lhs)
    img2 = monomial_image(g, f.rhs)
    if img1 != img2:
        return None
    if img1 is None:
        raise NoTrek(
            "both monomials vanish under the trek rule; the binomial is a "
            "consequence of linear generators, not of 2-minors"
        )
    single = _as_minor(g, f.lhs, f.rhs)
    if single is not None:
        return [single]
    for middle in _candidate_middles(f.lhs):
        if middle in (f.lhs, f.rhs):
            continue
        if monomial_image(g, middle) != img1:
            continue
        part1 = _as_minor(g, f.lhs, middle)
        part2 = _as_minor(g, middle, f.rhs)
        if part1 is not None and part2 is not None:
            return [part1, part2]
    raise AssertionError(f"no decomposition found for {f}; this contradicts the 2-minor theory")


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _all_ring_variables(n: int) -> list[MomentVariable]:
    out = [MomentVariable.cov(i, j) for i, j in combinations_with_replacement(range(1, n + 1), 2)]
    out += [
        MomentVariable.third(i, j, k)
        for i, j, k in combinations_with_replacement(range(1, n + 1), 3)
    ]
    return out


def _m2_name(v: MomentVariable) -> str:
    return f"{v.kind}_({','.join(map(str, v.idx))})"


def emit(gens: GeneratorSet, fmt: str = "plain") -> str:
    """Render a generator set as plain text, a Macaulay2 script, or JSON."""
    if fmt == "plain":
        lines = [v.name for v in gens.linear]
        lines += [str(b) for b in gens.quadrics]
        return "\n".join(lines) + ("\n" if lines else "")
    if fmt == "macaulay2":
        ring_vars = ", ".join(_m2_name(v) for v in _all_ring_variables(gens.n))
        lines = [f"R = QQ[{ring_vars}];"]
        items = [_m2_name(v) for v in gens.linear]
        items += [
            f"{'*'.join(_m2_name(v) for v in b.lhs.vars)} - "
            f"{'*'.join(_m2_name(v) for v in b.rhs.vars)}"
            for b in gens.quadrics
        ]
        if items:
            lines.append("I = ideal(")
            lines.append(",\n".join("  " + item for item in items))
            lines.append(");")
        else:
            lines.append("I = ideal(0_R);")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        data = {
            "n": gens.n,
            "linear": [v.to_json() for v in gens.linear],
            "quadrics": [
                {
                    "lhs": [v.to_json() for v in b.lhs.vars],
                    "rhs": [v.to_json() for v in b.rhs.vars],
                    "source": _source_json(gens.provenance.get(b)),
                }
                for b in gens.quadrics
            ],
        }
        return json.dumps(data, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _source_json(prov):
    if prov is None:
        return None
    (i, j), (c1, c2) = prov
    return {"matrix": [i, j], "columns": [_label_json(c1), _label_json(c2)]}


def _label_json(label: ColumnLabel):
    tag, payload = label
    return [payload] if tag == "v" else list(payload)


def _label_from_json(data) -> ColumnLabel:
    if len(data) == 1:
        return ("v", data[0])
    return ("p", tuple(data))


def parse_generator_set(text: str) -> GeneratorSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"generator file is not valid JSON: {exc}") from exc
    linear = tuple(MomentVariable.from_json(v) for v in data["linear"])
    quadrics = []
    provenance = {}
    for q in data["quadrics"]:
        b = Binomial(
            Monomial.of(*(MomentVariable.from_json(v) for v in q["lhs"])),
            Monomial.of(*(MomentVariable.from_json(v) for v in q["rhs"])),
        )
        quadrics.append(b)
        if q.get("source"):
            src = q["source"]
            provenance[b] = (
                tuple(src["matrix"]),
                tuple(_label_from_json(c) for c in src["columns"]),
            )
    return GeneratorSet(int(data["n"]), linear, tuple(quadrics), provenance)
