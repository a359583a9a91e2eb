"""Second and third moments of linear structural equation models.

Supports exact rational arithmetic (``fractions.Fraction``) and float mode.
A parameter or moment container is homogeneous in scalar kind.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import AsymmetricInput, InputError, ShapeMismatch, SingularSystem
from .graph import DirectedGraph, enumerate_simple_treks, topological_order

Scalar = Fraction | float


def scalar_from_json(value) -> Scalar:
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(value))
    if isinstance(value, (int, float)):
        return float(value)
    raise InputError(f"cannot parse scalar {value!r}")


def scalar_to_json(value: Scalar):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return float(value)


@dataclass(frozen=True)
class ModelParameters:
    """Edge coefficients and error moments (lambda, omega2, omega3)."""

    lam: dict[tuple[int, int], Scalar]
    omega2: dict[int, Scalar]
    omega3: dict[int, Scalar]

    def validate(self, g: DirectedGraph) -> None:
        if set(self.lam) != set(g.edges):
            raise ShapeMismatch("lambda keys must equal the edge set")
        for v in g.vertices:
            if self.omega2[v] <= 0:
                raise ShapeMismatch(f"omega2[{v}] must be positive")


@dataclass(frozen=True)
class SimpleTrekParams:
    """Per-vertex (a, b) indeterminates plus edge coefficients."""

    a: dict[int, Scalar]
    b: dict[int, Scalar]
    lam: dict[tuple[int, int], Scalar]


@dataclass(frozen=True)
class MomentData:
    """Covariance matrix S and symmetric third-moment tensor T.

    Stored sparsely on sorted index tuples; missing entries are zero.
    """

    n: int
    S: dict[tuple[int, int], Scalar]
    T: dict[tuple[int, int, int], Scalar]

    def s(self, i: int, j: int) -> Scalar:
        return self.S.get(tuple(sorted((i, j))), 0)

    def t(self, i: int, j: int, k: int) -> Scalar:
        return self.T.get(tuple(sorted((i, j, k))), 0)

    def s_matrix(self) -> list[list[Scalar]]:
        return [[self.s(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def max_abs(self) -> float:
        entries = list(self.S.values()) + list(self.T.values())
        return max((abs(v) for v in entries), default=0)

    def to_json(self) -> str:
        s_rows = [[i, j, scalar_to_json(v)] for (i, j), v in sorted(self.S.items()) if v != 0]
        t_rows = [[i, j, k, scalar_to_json(v)] for (i, j, k), v in sorted(self.T.items()) if v != 0]
        return json.dumps({"n": self.n, "S": s_rows, "T": t_rows})

    @classmethod
    def from_json(cls, text: str) -> "MomentData":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"moments file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or "n" not in data:
            raise InputError('moment JSON must be an object with keys "n", "S", "T"')
        n = int(data["n"])
        S = {}
        for row in data.get("S", []):
            if len(row) != 3:
                raise InputError(f"bad S row {row}: expected [i, j, value]")
            i, j, value = row
            if not (1 <= i <= j <= n):
                raise InputError(f"bad S indices in row {row}")
            S[(i, j)] = scalar_from_json(value)
        T = {}
        for row in data.get("T", []):
            if len(row) != 4:
                raise InputError(f"bad T row {row}: expected [i, j, k, value]")
            i, j, k, value = row
            if not (1 <= i <= j <= k <= n):
                raise InputError(f"bad T indices in row {row}")
            T[(i, j, k)] = scalar_from_json(value)
        return cls(n, S, T)


def moments_equal(m1: MomentData, m2: MomentData) -> bool:
    """Entry-wise equality; tolerant of zero entries stored vs omitted."""
    if m1.n != m2.n:
        return False
    keys_s = set(m1.S) | set(m2.S)
    keys_t = set(m1.T) | set(m2.T)
    return all(m1.s(*k) == m2.s(*k) for k in keys_s) and all(
        m1.t(*k) == m2.t(*k) for k in keys_t
    )


def _identity_minus_lambda(g: DirectedGraph, lam) -> list[list[Scalar]]:
    n = g.n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = Fraction(1)
    for (tail, head), value in lam.items():
        m[tail - 1][head - 1] = -value
    return m


def invert_matrix(m: list[list[Scalar]]) -> list[list[Scalar]]:
    """Gauss-Jordan inverse; exact when entries are Fractions."""
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem("I - Lambda is not invertible")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def forward_moments(g: DirectedGraph, p: ModelParameters) -> MomentData:
    """(S, T) from structural parameters via (I - Lambda)^{-1}."""
    p.validate(g)
    B = invert_matrix(_identity_minus_lambda(g, p.lam))
    n = g.n
    S = {}
    T = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            S[(i, j)] = sum(p.omega2[a] * B[a - 1][i - 1] * B[a - 1][j - 1] for a in range(1, n + 1))
            for k in range(j, n + 1):
                T[(i, j, k)] = sum(
                    p.omega3[a] * B[a - 1][i - 1] * B[a - 1][j - 1] * B[a - 1][k - 1]
                    for a in range(1, n + 1)
                )
    return MomentData(n, S, T)


def params_to_ab(g: DirectedGraph, p: ModelParameters) -> SimpleTrekParams:
    """Change of parameters (omega -> a, b) by recursion in topological order.

    Independent of :func:`forward_moments`: moments of processed vertices are
    accumulated with the parent-sum recursions rather than matrix inversion.
    """
    p.validate(g)
    order = topological_order(g)
    lam = dict(p.lam)
    s: dict[tuple[int, int], Scalar] = {}
    t: dict[tuple[int, int, int], Scalar] = {}

    def sget(i, j):
        return s.get(tuple(sorted((i, j))), 0)

    def tget(i, j, k):
        return t.get(tuple(sorted((i, j, k))), 0)

    a: dict[int, Scalar] = {}
    b: dict[int, Scalar] = {}
    done: list[int] = []
    for v in order:
        pa = g.parents(v)
        a[v] = sum(lam[(l1, v)] * lam[(l2, v)] * sget(l1, l2) for l1 in pa for l2 in pa) + p.omega2[v]
        b[v] = (
            sum(
                lam[(l1, v)] * lam[(l2, v)] * lam[(l3, v)] * tget(l1, l2, l3)
                for l1 in pa
                for l2 in pa
                for l3 in pa
            )
            + p.omega3[v]
        )
        s[tuple(sorted((v, v)))] = a[v]
        t[tuple(sorted((v, v, v)))] = b[v]
        for u in done:
            s[tuple(sorted((u, v)))] = sum(lam[(l, v)] * sget(u, l) for l in pa)
            t[tuple(sorted((u, v, v)))] = sum(
                lam[(l1, v)] * lam[(l2, v)] * tget(u, l1, l2) for l1 in pa for l2 in pa
            )
        for ui in range(len(done)):
            for wi in range(ui, len(done)):
                u, w = done[ui], done[wi]
                t[tuple(sorted((u, w, v)))] = sum(lam[(l, v)] * tget(u, w, l) for l in pa)
        done.append(v)
    return SimpleTrekParams(a, b, lam)


def trek_rule_moments(g: DirectedGraph, q: SimpleTrekParams) -> MomentData:
    """Evaluate the simple trek rule: sums over simple treks of a/b times edge products."""
    if set(q.lam) != set(g.edges):
        raise ShapeMismatch("lambda keys must equal the edge set")
    n = g.n
    S = {}
    T = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            total = 0
            for trek in enumerate_simple_treks(g, (i, j)):
                term = q.a[trek.top]
                for path in trek.paths:
                    for e in path:
                        term = term * q.lam[e]
                total = total + term
            if total != 0:
                S[(i, j)] = total
            for k in range(j, n + 1):
                total3 = 0
                for trek in enumerate_simple_treks(g, (i, j, k)):
                    term = q.b[trek.top]
                    for path in trek.paths:
                        for e in path:
                            term = term * q.lam[e]
                    total3 = total3 + term
                if total3 != 0:
                    T[(i, j, k)] = total3
    return MomentData(n, S, T)


@dataclass(frozen=True)
class SampleConfig:
    kind: str = "exact"  # "exact" or "float"
    lambda_range: tuple[int, int] = (-3, 3)
    omega2_range: tuple[int, int] = (1, 4)
    omega3_range: tuple[int, int] = (-3, 3)
    max_denominator: int = 2
    allow_zero_omega3: bool = False
    allow_zero_lambda: bool = False


def _sample_scalar(rng: random.Random, lo: int, hi: int, cfg: SampleConfig, nonzero: bool) -> Scalar:
    while True:
        if cfg.kind == "exact":
            value = Fraction(rng.randint(lo, hi), rng.randint(1, cfg.max_denominator))
        else:
            value = rng.uniform(lo, hi)
        if not nonzero or value != 0:
            return value


def sample_params(g: DirectedGraph, seed: int, config: SampleConfig | None = None) -> ModelParameters:
    """Deterministic random model parameters; omega2 strictly positive."""
    cfg = config or SampleConfig()
    rng = random.Random(seed)
    lam = {
        e: _sample_scalar(rng, *cfg.lambda_range, cfg, nonzero=not cfg.allow_zero_lambda)
        for e in g.edges
    }
    omega2 = {v: _sample_scalar(rng, *cfg.omega2_range, cfg, nonzero=True) for v in g.vertices}
    omega3 = {
        v: _sample_scalar(rng, *cfg.omega3_range, cfg, nonzero=not cfg.allow_zero_omega3)
        for v in g.vertices
    }
    return ModelParameters(lam, omega2, omega3)


def leading_principal_minors(m: list[list[Scalar]]) -> list[Scalar]:
    """Determinants of the k x k upper-left blocks, k = 1..n."""
    n = len(m)
    minors = []
    for k in range(1, n + 1):
        block = [row[:k] for row in m[:k]]
        minors.append(_det(block))
    return minors


def _det(m: list[list[Scalar]]) -> Scalar:
    n = len(m)
    m = [list(row) for row in m]
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return m[0][0] * 0  # zero of the right scalar kind
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def det(m: list[list[Scalar]]) -> Scalar:
    return _det(m)


def is_positive_definite(m: list[list[Scalar]], tol: float = 0) -> bool:
    return all(minor > tol for minor in leading_principal_minors(m))


def check_symmetry(m: MomentData, tol: float = 0) -> None:
    # Symmetry holds by sorted-key construction; reject unsorted keys from
    # hand-built dicts.
    for key in m.S:
        if list(key) != sorted(key):
            raise AsymmetricInput(f"unsorted S key {key}")
    for key in m.T:
        if list(key) != sorted(key):
            raise AsymmetricInput(f"unsorted T key {key}")


def full_tensor(m: MomentData) -> list[list[list[Scalar]]]:
    n = m.n
    return [
        [[m.t(i, j, k) for k in range(1, n + 1)] for j in range(1, n + 1)] for i in range(1, n + 1)
    ]


def tucker3(tensor: list[list[list[Scalar]]], mat: list[list[Scalar]]) -> list[list[list[Scalar]]]:
    """T . M . M . M via three successive mode multiplications.

    Returns the tensor with entries sum_{a,b,c} M[a][i] M[b][j] M[c][k] T[a][b][c].
    """
    n = len(mat)
    cur = tensor
    for _ in range(3):
        # Multiply along the first mode, then rotate modes: (i,j,k) -> (j,k,i).
        nxt = [[[0] * n for _ in range(n)] for _ in range(n)]
        for j in range(n):
            for k in range(n):
                for i in range(n):
                    acc = 0
                    for a in range(n):
                        v = cur[a][j][k]
                        if v != 0:
                            acc = acc + mat[a][i] * v
                    nxt[j][k][i] = acc
        cur = nxt
    return cur
