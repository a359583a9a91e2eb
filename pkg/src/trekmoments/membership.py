"""Constructive model-membership test for polytrees.

Recovers the edge coefficients from covariance ratios, transforms (S, T)
back toward diagonal error moments, and checks that the off-diagonal
residuals vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonPositiveDiagonal, ShapeMismatch
from .graph import DirectedGraph, require_polytree
from .moments import (
    MomentData,
    ModelParameters,
    Scalar,
    check_symmetry,
    full_tensor,
    leading_principal_minors,
    tucker3,
)
from .trekmat import GeneratorSet


@dataclass(frozen=True)
class Violation:
    """One certificate entry: a nonzero residual or a failed PD minor."""

    kind: str  # "S'", "T'", "pd_minor", "diag"
    index: tuple
    value: Scalar

    def describe(self) -> str:
        return f"{self.kind}{self.index} = {self.value}"


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    recovered: ModelParameters | None = None
    certificate: tuple[Violation, ...] = ()


def recover_lambda(g: DirectedGraph, m: MomentData) -> dict[tuple[int, int], Scalar]:
    """lambda_{ij} = s_{ij} / s_{ii} for each edge i -> j."""
    lam = {}
    for i, j in g.edges:
        s_ii = m.s(i, i)
        if s_ii <= 0:
            raise NonPositiveDiagonal(f"s_{i}{i} = {s_ii} is not positive")
        lam[(i, j)] = m.s(i, j) / s_ii
    return lam


def _matrix_i_minus_lambda(n: int, lam) -> list[list[Scalar]]:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = Fraction(1)
    for (tail, head), value in lam.items():
        m[tail - 1][head - 1] = -value
    return m


def decide_membership(g: DirectedGraph, m: MomentData, tolerance: float = 0) -> MembershipResult:
    """Membership of (S, T) in the polytree model; exact when tolerance is 0."""
    require_polytree(g)
    if m.n != g.n:
        raise ShapeMismatch(f"moments are for n={m.n}, graph has n={g.n}")
    check_symmetry(m)
    n = g.n
    scale = tolerance * (1 + m.max_abs()) if tolerance else 0

    violations: list[Violation] = []
    s_mat = m.s_matrix()
    minors = leading_principal_minors(s_mat)
    for k, minor in enumerate(minors, start=1):
        if not minor > scale:
            violations.append(Violation("pd_minor", (k,), minor))
    if violations:
        return MembershipResult(False, None, tuple(violations))

    lam = recover_lambda(g, m)
    iml = _matrix_i_minus_lambda(n, lam)
    # S' = (I - Lambda)^T S (I - Lambda)
    tmp = [
        [sum(iml[a][i] * s_mat[a][b] for a in range(n)) for b in range(n)] for i in range(n)
    ]
    s_prime = [
        [sum(tmp[i][b] * iml[b][j] for b in range(n)) for j in range(n)] for i in range(n)
    ]
    t_prime = tucker3(full_tensor(m), iml)

    for i in range(n):
        for j in range(i + 1, n):
            if abs(s_prime[i][j]) > scale:
                violations.append(Violation("S'", (i + 1, j + 1), s_prime[i][j]))
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                if i == j == k:
                    continue
                if abs(t_prime[i][j][k]) > scale:
                    violations.append(Violation("T'", (i + 1, j + 1, k + 1), t_prime[i][j][k]))
    for i in range(n):
        if not s_prime[i][i] > scale:
            violations.append(Violation("diag", (i + 1,), s_prime[i][i]))
    if violations:
        return MembershipResult(False, None, tuple(violations))

    recovered = ModelParameters(
        lam,
        {i + 1: s_prime[i][i] for i in range(n)},
        {i + 1: t_prime[i][i][i] for i in range(n)},
    )
    return MembershipResult(True, recovered, ())


@dataclass(frozen=True)
class ResidualReport:
    max_abs_residual: Scalar
    worst_generator: str | None


def evaluate_generators(gens: GeneratorSet, m: MomentData) -> ResidualReport:
    """Substitute moments into every generator and report the worst residual."""
    worst: Scalar = 0
    worst_name: str | None = None
    for var in gens.linear:
        value = var.evaluate(m)
        if abs(value) > abs(worst):
            worst, worst_name = value, var.name
    for b in gens.quadrics:
        value = b.evaluate(m)
        if abs(value) > abs(worst):
            worst, worst_name = value, str(b)
    return ResidualReport(abs(worst), worst_name)
