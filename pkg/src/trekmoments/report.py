"""Computed ground truth for three ambiguities in the source material.

Nothing here alters any other module's behavior; the report records what the
implementation actually computes next to what the text states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import DirectedGraph
from .latent import observed_generators, validate_upstream
from .nontree import (
    F_DETERMINANT,
    F_LITERAL,
    TRIANGLE,
    builtin,
    minor_vanishing_report,
    polynomial_vanishing_report,
)
from .polytope import exponent_vector
from .trekmat import degree2_span_rank, edge_generator_set, full_generator_set

STAR = DirectedGraph(5, ((1, 2), (1, 3), (1, 4), (1, 5)))


@dataclass(frozen=True)
class Discrepancy:
    key: str
    stated: str
    computed: str
    detail: str

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "stated": self.stated,
            "computed": self.computed,
            "detail": self.detail,
        }


def _count_discrepancy() -> Discrepancy:
    edge_rank = degree2_span_rank(edge_generator_set(STAR))
    full_rank = degree2_span_rank(full_generator_set(STAR))
    part = validate_upstream(STAR, {1}, {2, 3, 4, 5})
    observed_rank = degree2_span_rank(observed_generators(STAR, part))
    return Discrepancy(
        "star-additional-generator-count",
        "the full generating set of the star tree adds 125 quadrics beyond the edge set",
        f"{full_rank} - {edge_rank} = {full_rank - edge_rank}",
        f"edge rank {edge_rank}, full rank {full_rank}, observed rank {observed_rank}; "
        f"the difference equals the observed rank {observed_rank}, not 125",
    )


def _polytope_discrepancy() -> Discrepancy:
    e123 = exponent_vector(STAR, 1, 2, 3)
    e223 = exponent_vector(STAR, 2, 2, 3)
    return Discrepancy(
        "star-exponent-vector-length",
        "e_123 printed with 8 coordinates (1,0,0,0,1,1,0,0)",
        f"e_123 = {e123.as_point()} with {len(e123.as_point())} coordinates",
        f"ambient dimension is n + |E| = 9; e_223 = {e223.as_point()}; "
        "the printed vectors appear to drop one zero z-coordinate",
    )


def _f_reading_discrepancy(trials: int, seed: int) -> Discrepancy:
    literal = polynomial_vanishing_report(TRIANGLE, F_LITERAL, "f-literal", trials, seed)
    determinant = polynomial_vanishing_report(
        TRIANGLE, F_DETERMINANT, "f-determinant", trials, seed
    )
    printed = minor_vanishing_report(builtin("triangle-I3-printed"), trials=trials, seed=seed)
    label_rule = minor_vanishing_report(builtin("triangle-I3"), trials=trials, seed=seed)
    verdicts = (
        f"literal f (with the cubed variable) vanishes: {literal.vanishes}; "
        f"determinant reading (squared variable) vanishes: {determinant.vanishes}; "
        f"printed I3 matrix 3-minors all vanish: {printed.all_vanish} "
        f"({printed.vanishing_count}/{len(printed.minors)}); "
        f"label-rule I3 matrix 3-minors all vanish: {label_rule.all_vanish} "
        f"({label_rule.vanishing_count}/{len(label_rule.minors)})"
    )
    recorded = "determinant reading" if determinant.vanishes else "literal reading"
    return Discrepancy(
        "triangle-f-reading",
        "f displayed with s_13*t_223^3 and called a 3x3 determinant up to sign; "
        "the I3 matrix repeats t_223 where the label rule gives t_233",
        f"the vanishing reading of f is the {recorded}",
        verdicts,
    )


def discrepancy_report(trials: int = 50, seed: int = 0) -> list[Discrepancy]:
    return [
        _count_discrepancy(),
        _polytope_discrepancy(),
        _f_reading_discrepancy(trials, seed),
    ]


def render_report(discrepancies: list[Discrepancy], fmt: str = "plain") -> str:
    if fmt == "json":
        return json.dumps([d.to_json() for d in discrepancies], indent=2) + "\n"
    lines = []
    for d in discrepancies:
        lines.append(f"[{d.key}]")
        lines.append(f"  stated:   {d.stated}")
        lines.append(f"  computed: {d.computed}")
        lines.append(f"  detail:   {d.detail}")
    return "\n".join(lines) + "\n"
