"""Command-line interface.

Exit codes: 0 success (Inside / verification passed), 1 negative verdict or
failed verification, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .errors import TrekMomentsError
from .graph import DirectedGraph
from .latent import observed_generators, validate_upstream
from .membership import decide_membership
from .moments import (
    MomentData,
    SampleConfig,
    forward_moments,
    moments_equal,
    params_to_ab,
    sample_params,
    scalar_to_json,
    trek_rule_moments,
)
from .nontree import (
    BUILTINS,
    NonTreeCase,
    builtin,
    minor_vanishing_report,
    spec_from_json,
)
from .polytope import check_vh_equality, h_rep, vertex_set
from .report import discrepancy_report, render_report
from .trekmat import edge_generator_set, emit, full_generator_set


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise TrekMomentsError(f"cannot read {path}: {exc}") from exc


def _load_graph(path: str) -> DirectedGraph:
    return DirectedGraph.from_json(_read(path))


def _parse_vertex_list(text: str) -> set[int]:
    try:
        return {int(x) for x in text.split(",") if x.strip()}
    except ValueError as exc:
        raise TrekMomentsError(f"bad vertex list {text!r}: expected e.g. '1,6,7'") from exc


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = random.SystemRandom().randrange(2**31)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _sample_config(args) -> SampleConfig:
    return SampleConfig(kind=args.scalar)


def _var_name(key) -> str:
    tag, payload = key
    if tag == "z":
        return f"z{payload}"
    l, m = payload
    return f"y{l}{m}" if l < 10 and m < 10 else f"y{l}_{m}"


def _constraint_text(con) -> str:
    parts = []
    for key, c in con.coeffs:
        name = _var_name(key)
        term = name if abs(c) == 1 else f"{abs(c)}*{name}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {term}")
    rel = "=" if con.rel == "==" else ">="
    return f"{' '.join(parts)} {rel} {con.rhs}"


def cmd_gens(args) -> int:
    g = _load_graph(args.graph)
    gens = full_generator_set(g) if args.all_pairs else edge_generator_set(g)
    sys.stdout.write(emit(gens, args.format))
    return 0


def cmd_observed_gens(args) -> int:
    g = _load_graph(args.graph)
    hidden = _parse_vertex_list(args.hidden)
    observed = set(g.vertices) - hidden
    part = validate_upstream(g, hidden, observed)
    sys.stdout.write(emit(observed_generators(g, part), args.format))
    return 0


def cmd_membership(args) -> int:
    g = _load_graph(args.graph)
    m = MomentData.from_json(_read(args.moments))
    tol = args.tol if args.scalar == "float" else 0
    result = decide_membership(g, m, tolerance=tol)
    out = {"inside": result.inside}
    if result.inside:
        p = result.recovered
        out["recovered"] = {
            "lambda": [[i, j, scalar_to_json(v)] for (i, j), v in sorted(p.lam.items())],
            "omega2": {str(v): scalar_to_json(x) for v, x in sorted(p.omega2.items())},
            "omega3": {str(v): scalar_to_json(x) for v, x in sorted(p.omega3.items())},
        }
    else:
        out["certificate"] = [
            {"kind": v.kind, "index": list(v.index), "value": scalar_to_json(v.value)}
            for v in result.certificate
        ]
    print(json.dumps(out, indent=2))
    return 0 if result.inside else 1


def cmd_polytope(args) -> int:
    g = _load_graph(args.graph)
    seed = _resolve_seed(args)
    h = h_rep(g)
    check = check_vh_equality(g, trials=args.trials, seed=seed)
    if args.format == "plain":
        for v in vertex_set(g):
            print(f"e_{''.join(map(str, v.triple))} = {v.as_point()}")
        for con in h.constraints:
            print(_constraint_text(con))
        print(f"equality check: vertices_in_h={check.vertices_in_h} "
              f"trials={check.trials} discrepancies={len(check.discrepancies)}")
    else:
        out = {
            "variables": [_var_name(k) for k in h.variables],
            "vertices": [
                {"triple": list(v.triple), "point": list(v.as_point())} for v in vertex_set(g)
            ],
            "inequalities": [_constraint_text(c) for c in h.constraints],
            "equality_check": {
                "vertices_in_h": check.vertices_in_h,
                "trials": check.trials,
                "discrepancies": list(check.discrepancies),
            },
        }
        print(json.dumps(out, indent=2))
    return 0 if check.ok else 1


def cmd_check_nontree(args) -> int:
    if args.case:
        case = builtin(args.case)
        if args.graph or args.spec:
            raise TrekMomentsError("--case excludes --graph/--spec")
    else:
        if not (args.graph and args.spec and args.r):
            raise TrekMomentsError("need --case, or --graph with --spec and --r")
        rows, cols = spec_from_json(_read(args.spec))
        case = NonTreeCase("custom", _load_graph(args.graph), rows, cols, args.r)
    seed = _resolve_seed(args)
    report = minor_vanishing_report(
        case, trials=args.trials, seed=seed, config=_sample_config(args), tol=args.tol
    )
    print(json.dumps(report.to_json(), indent=2))
    return 0 if report.all_vanish else 1


def cmd_sample(args) -> int:
    g = _load_graph(args.graph)
    seed = _resolve_seed(args)
    p = sample_params(g, seed, _sample_config(args))
    m = forward_moments(g, p)
    text = m.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    seed = _resolve_seed(args)
    failures = []

    def check(name: str, ok: bool):
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    consistent = True
    for trial in range(args.trials):
        p = sample_params(g, seed + trial)
        if not moments_equal(forward_moments(g, p), trek_rule_moments(g, params_to_ab(g, p))):
            consistent = False
            break
    check(f"trek rule matches forward moments ({args.trials} models)", consistent)

    roundtrip = True
    for trial in range(args.trials):
        p = sample_params(g, seed + 10_000 + trial)
        if not decide_membership(g, forward_moments(g, p)).inside:
            roundtrip = False
            break
    check(f"membership round-trip ({args.trials} models)", roundtrip)

    gens = edge_generator_set(g)
    residual_ok = True
    for trial in range(args.trials):
        p = sample_params(g, seed + 20_000 + trial)
        m = forward_moments(g, p)
        if any(v.evaluate(m) != 0 for v in gens.linear):
            residual_ok = False
        if any(b.evaluate(m) != 0 for b in gens.quadrics):
            residual_ok = False
    check(f"generators vanish on sampled moments ({args.trials} models)", residual_ok)

    vh = check_vh_equality(g, trials=args.trials, seed=seed)
    check(f"polytope V in H and support equality ({vh.trials} objectives)", vh.ok)

    print(f"verify: {'PASS' if not failures else 'FAIL'} ({4 - len(failures)}/4 checks)")
    return 0 if not failures else 1


def cmd_report(args) -> int:
    discrepancies = discrepancy_report(trials=args.trials, seed=args.seed or 0)
    sys.stdout.write(render_report(discrepancies, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trekmoments",
        description="Third-order moment ideals and polytopes of polytree models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--scalar", choices=["exact", "float"], default="exact")
        p.add_argument("--tol", type=float, default=1e-9, help="float-mode tolerance")
        if seed:
            p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("gens", help="binomial generators of the moment ideal")
    p.add_argument("--graph", required=True)
    p.add_argument("--all-pairs", action="store_true",
                   help="use all 2-trek pairs instead of edges only")
    p.add_argument("--format", choices=["plain", "macaulay2", "json"], default="plain")
    p.set_defaults(func=cmd_gens)

    p = sub.add_parser("observed-gens", help="generators of the observed-variable ideal")
    p.add_argument("--graph", required=True)
    p.add_argument("--hidden", required=True, help="comma-separated hidden vertices, e.g. 1,6")
    p.add_argument("--format", choices=["plain", "macaulay2", "json"], default="plain")
    p.set_defaults(func=cmd_observed_gens)

    p = sub.add_parser("membership", help="decide model membership of given moments")
    p.add_argument("--graph", required=True)
    p.add_argument("--moments", required=True)
    common(p, seed=False)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("polytope", help="moment polytope vertices, inequalities, V/H check")
    p.add_argument("--graph", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--format", choices=["plain", "json"], default="json")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("check-nontree", help="minor vanishing on non-polytree graphs")
    p.add_argument("--case", choices=sorted(BUILTINS), default=None)
    p.add_argument("--graph", default=None)
    p.add_argument("--spec", default=None, help="matrix spec JSON file")
    p.add_argument("--r", type=int, default=None, help="minor size for --spec")
    p.add_argument("--trials", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_check_nontree)

    p = sub.add_parser("sample", help="sample a model and emit its moments")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the property suite on a polytree")
    p.add_argument("--graph", required=True)
    p.add_argument("--trials", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="computed ground truth for recorded ambiguities")
    p.add_argument("--format", choices=["plain", "json"], default="plain")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrekMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
