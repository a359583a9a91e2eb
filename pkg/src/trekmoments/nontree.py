"""Numeric verification of determinantal relations on non-polytree graphs.

Augmented moment matrices carry an optional empty row label; entries are
moment variables resolved from the combined row and column indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import BadLabels, InputError, SingularSystem
from .graph import DirectedGraph
from .moments import (
    MomentData,
    ModelParameters,
    SampleConfig,
    Scalar,
    det,
    forward_moments,
    sample_params,
)
from .trekmat import Binomial, Monomial, MomentVariable

Row = int | None  # None stands for the empty row label
Col = tuple[int, ...]  # single vertex or sorted pair


def entry_variable(row: Row, col: Col) -> MomentVariable:
    """Moment variable at (row, col): combined sorted indices, size 2 or 3."""
    idx = tuple(sorted(((row,) if row is not None else ()) + tuple(col)))
    if len(idx) == 2:
        return MomentVariable.cov(*idx)
    if len(idx) == 3:
        return MomentVariable.third(*idx)
    raise BadLabels(f"row {row} with column {col} gives {len(idx)} indices, need 2 or 3")


def symbolic_matrix(rows, cols, overrides=None) -> list[list[MomentVariable]]:
    overrides = overrides or {}
    out = []
    for r, row in enumerate(rows):
        out.append(
            [overrides.get((r, c), entry_variable(row, col)) for c, col in enumerate(cols)]
        )
    return out


def build_matrix(rows, cols, m: MomentData, overrides=None) -> list[list[Scalar]]:
    return [[v.evaluate(m) for v in line] for line in symbolic_matrix(rows, cols, overrides)]


@dataclass(frozen=True)
class NonTreeCase:
    """A named graph plus augmented-matrix spec and expected minor size."""

    name: str
    graph: DirectedGraph
    rows: tuple[Row, ...]
    cols: tuple[Col, ...]
    r: int
    # Printed deviations from the label rule: (row index, col index) -> variable.
    overrides: dict[tuple[int, int], MomentVariable] = field(default_factory=dict)
    hidden: frozenset[int] = frozenset()

    def observed_labels(self) -> set[int]:
        out: set[int] = set()
        for row in self.rows:
            if row is not None:
                out.add(row)
        for col in self.cols:
            out.update(col)
        return out


def spec_to_json(rows, cols) -> str:
    return json.dumps({"rows": ["empty" if r is None else r for r in rows],
                       "cols": [list(c) for c in cols]})


def spec_from_json(text: str) -> tuple[tuple[Row, ...], tuple[Col, ...]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix spec is not valid JSON: {exc}") from exc
    if "rows" not in data or "cols" not in data:
        raise InputError('matrix spec needs keys "rows" and "cols"')
    rows = tuple(None if r == "empty" else int(r) for r in data["rows"])
    cols = []
    for c in data["cols"]:
        if not isinstance(c, list) or len(c) not in (1, 2):
            raise InputError(f"bad column label {c}: expected [i] or [i, j]")
        cols.append(tuple(sorted(int(v) for v in c)))
    return rows, tuple(cols)


def sample_cyclic_moments(g: DirectedGraph, seed: int,
                          config: SampleConfig | None = None,
                          max_retries: int = 50) -> tuple[ModelParameters, MomentData]:
    """Sample a model, redrawing when I - Lambda happens to be singular."""
    for attempt in range(max_retries):
        p = sample_params(g, seed + 7919 * attempt, config)
        try:
            return p, forward_moments(g, p)
        except SingularSystem:
            continue
    raise SingularSystem(f"no invertible draw in {max_retries} attempts")


@dataclass(frozen=True)
class MinorReport:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    vanishes: bool
    max_residual: float

    def to_json(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "vanishes": self.vanishes,
            "max_residual": self.max_residual,
        }


@dataclass(frozen=True)
class VanishingReport:
    case: str
    r: int
    trials: int
    minors: tuple[MinorReport, ...]

    @property
    def all_vanish(self) -> bool:
        return all(m.vanishes for m in self.minors)

    @property
    def vanishing_count(self) -> int:
        return sum(1 for m in self.minors if m.vanishes)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "r": self.r,
            "trials": self.trials,
            "all_vanish": self.all_vanish,
            "vanishing_count": self.vanishing_count,
            "minors": [m.to_json() for m in self.minors],
        }


def minor_vanishing_report(case: NonTreeCase, r: int | None = None, trials: int = 100,
                           seed: int = 0, config: SampleConfig | None = None,
                           tol: float = 0.0) -> VanishingReport:
    """Evaluate every r x r minor across sampled models.

    In exact mode (the default SampleConfig) a minor vanishes iff it is
    exactly 0 on every trial; ``tol`` only matters for float sampling.
    """
    r = case.r if r is None else r
    if r > min(len(case.rows), len(case.cols)):
        raise BadLabels(f"minor size {r} exceeds matrix shape")
    samples = []
    for trial in range(trials):
        _, m = sample_cyclic_moments(case.graph, seed + trial, config)
        samples.append(build_matrix(case.rows, case.cols, m, case.overrides))
    minors = []
    for rsel in combinations(range(len(case.rows)), r):
        for csel in combinations(range(len(case.cols)), r):
            vanishes = True
            worst = 0.0
            for mat in samples:
                sub = [[mat[i][j] for j in csel] for i in rsel]
                value = det(sub)
                scale = 1 + max(abs(x) for row in sub for x in row) ** r
                residual = abs(value) / scale
                worst = max(worst, float(residual))
                if isinstance(value, Fraction):
                    if value != 0:
                        vanishes = False
                elif residual > tol:
                    vanishes = False
            minors.append(MinorReport(rsel, csel, vanishes, worst))
    return VanishingReport(case.name, r, trials, tuple(minors))


# ---------------------------------------------------------------------------
# Moment polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentPolynomial:
    """Rational linear combination of moment monomials."""

    terms: tuple[tuple[Fraction, Monomial], ...]

    def __post_init__(self):
        monos = [m for _, m in self.terms]
        if len(set(monos)) != len(monos):
            raise ValueError("repeated monomial")
        if any(c == 0 for c, _ in self.terms):
            raise ValueError("zero coefficient")

    def evaluate(self, m: MomentData) -> Scalar:
        total = 0
        for coeff, mono in self.terms:
            total = total + coeff * mono.evaluate(m)
        return total


def evaluate_polynomial(f: MomentPolynomial, m: MomentData) -> Scalar:
    return f.evaluate(m)


ZERO_POLYNOMIAL = MomentPolynomial(())


def _s(i, j):
    return MomentVariable.cov(i, j)


def _t(i, j, k):
    return MomentVariable.third(i, j, k)


def _poly(*terms) -> MomentPolynomial:
    return MomentPolynomial(tuple((Fraction(c), Monomial.of(*vs)) for c, *vs in terms))


# The displayed sextic on the triangle graph, read literally (one quartic
# term with a cubed variable) and read as the 3x3 determinant it is said to
# equal up to sign (that variable squared).
F_LITERAL = _poly(
    (1, _s(2, 3), _t(1, 3, 3), _t(2, 2, 2)),
    (-1, _s(2, 3), _t(1, 2, 3), _t(2, 2, 3)),
    (-1, _s(2, 2), _t(1, 3, 3), _t(2, 2, 3)),
    (1, _s(1, 3), _t(2, 2, 3), _t(2, 2, 3), _t(2, 2, 3)),
    (1, _s(2, 2), _t(1, 2, 3), _t(2, 3, 3)),
    (-1, _s(1, 3), _t(2, 2, 2), _t(2, 3, 3)),
)

F_DETERMINANT = _poly(
    (1, _s(2, 3), _t(1, 3, 3), _t(2, 2, 2)),
    (-1, _s(2, 3), _t(1, 2, 3), _t(2, 2, 3)),
    (-1, _s(2, 2), _t(1, 3, 3), _t(2, 2, 3)),
    (1, _s(1, 3), _t(2, 2, 3), _t(2, 2, 3)),
    (1, _s(2, 2), _t(1, 2, 3), _t(2, 3, 3)),
    (-1, _s(1, 3), _t(2, 2, 2), _t(2, 3, 3)),
)


@dataclass(frozen=True)
class PolynomialVanishingReport:
    name: str
    trials: int
    vanishes: bool
    max_residual: float


def polynomial_vanishing_report(g: DirectedGraph, f: MomentPolynomial, name: str,
                                trials: int = 100, seed: int = 0,
                                config: SampleConfig | None = None,
                                tol: float = 0.0) -> PolynomialVanishingReport:
    vanishes = True
    worst = 0.0
    for trial in range(trials):
        _, m = sample_cyclic_moments(g, seed + trial, config)
        value = f.evaluate(m)
        scale = 1 + float(m.max_abs()) ** 3
        residual = abs(float(value)) / scale
        worst = max(worst, residual)
        if isinstance(value, Fraction):
            if value != 0:
                vanishes = False
        elif residual > tol:
            vanishes = False
    return PolynomialVanishingReport(name, trials, vanishes, worst)


# Two relations on the triangle graph stated alongside the trek rule.
TRIANGLE_RELATIONS = (
    Binomial(Monomial.of(_t(1, 2, 3), _t(1, 2, 3)), Monomial.of(_t(1, 2, 2), _t(1, 3, 3))),
    Binomial(Monomial.of(_s(1, 3), _t(1, 2, 3)), Monomial.of(_s(1, 2), _t(1, 3, 3))),
)


# ---------------------------------------------------------------------------
# Named built-ins
# ---------------------------------------------------------------------------

TRIANGLE = DirectedGraph(3, ((1, 2), (1, 3), (2, 3)))
TWO_CYCLE = DirectedGraph(2, ((1, 2), (2, 1)))
THREE_CYCLE = DirectedGraph(3, ((1, 2), (2, 3), (3, 1)))
DIAMOND = DirectedGraph(4, ((1, 2), (1, 3), (2, 4), (3, 4)))

_TRIANGLE_COLS = ((1,), (2,), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3))

BUILTINS: dict[str, NonTreeCase] = {
    # Default readings follow the label rule; the -printed variants keep the
    # repeated t_223 entry where the label rule gives t_233.
    "triangle-I3": NonTreeCase(
        "triangle-I3", TRIANGLE, (1, 2, 3), _TRIANGLE_COLS, 3,
    ),
    "triangle-I3-printed": NonTreeCase(
        "triangle-I3-printed", TRIANGLE, (1, 2, 3), _TRIANGLE_COLS, 3,
        overrides={(2, 6): _t(2, 2, 3)},
    ),
    "triangle-I2": NonTreeCase(
        "triangle-I2", TRIANGLE, (1, 2, 3), ((1,), (1, 1), (1, 2), (1, 3)), 2,
    ),
    # The matrix whose determinant equals f up to sign.
    "triangle-f": NonTreeCase(
        "triangle-f", TRIANGLE, (None, 2, 3), ((1, 3), (2, 2), (2, 3)), 3,
    ),
    "triangle-f-printed": NonTreeCase(
        "triangle-f-printed", TRIANGLE, (None, 2, 3), ((1, 3), (2, 2), (2, 3)), 3,
        overrides={(2, 2): _t(2, 2, 3)},
    ),
    "two-cycle-det": NonTreeCase(
        "two-cycle-det", TWO_CYCLE, (None, 1, 2), ((1, 1), (1, 2), (2, 2)), 3,
    ),
    # Diamond with the top vertex hidden; labels use the observed vertices.
    "diamond-latent": NonTreeCase(
        "diamond-latent", DIAMOND, (2, 3, 4),
        ((2,), (3,), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4)), 3,
        hidden=frozenset({1}),
    ),
    "three-cycle": NonTreeCase(
        "three-cycle", THREE_CYCLE, (None, 1, 2, 3),
        ((1, 1), (1, 2), (2, 3), (2, 2), (1, 3), (3, 3)), 4,
    ),
}


def builtin(name: str) -> NonTreeCase:
    if name not in BUILTINS:
        raise InputError(f"unknown built-in {name!r}; choose from {sorted(BUILTINS)}")
    return BUILTINS[name]
