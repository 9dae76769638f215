"""Command line interface.

Subcommands take an instance file first; see :mod:`ssalg.specfile` for
the file format.  ``--format json`` switches every report to a stable
machine-readable rendering (keys sorted, deterministic list orders).
Exit codes: 0 on success, 1 when an ``--expect`` assertion fails, 2 on
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import katsura as kat
from .algebra import diagonal_report, elem_is_zero, grade_decompose
from .exprs import ExprError, format_element, parse_expr, parse_germ
from .graphs import Path
from .rings import ring_by_name
from .specfile import SpecFileError, load_spec_file
from .steinberg import (
    EvaluationUndecided,
    NonZeroWitness,
    ZeroCertified,
    ZeroUpToDepth,
    fn_eval,
    pi_map,
)


class _InputError(Exception):
    pass


def _load(args):
    try:
        loaded = load_spec_file(args.spec)
    except OSError as exc:
        raise _InputError(f"cannot read {args.spec}: {exc}") from None
    except SpecFileError as exc:
        raise _InputError(f"{args.spec}: {exc}") from None
    return loaded


def _require_valid(loaded):
    bad = {name: r for name, r in loaded.reports.items() if not r.ok}
    if bad:
        msgs = "; ".join(f"{name}: {m}" for name, r in bad.items() for m in r.messages())
        raise _InputError(f"instance is invalid: {msgs}")


def _path_json(p: Path):
    return {"edges": list(p.edges), "range": p.range_vertex, "source": p.source_vertex}


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    loaded = _load(args)
    payload = {
        "command": "validate",
        "ok": loaded.ok,
        "reports": {
            name: r.messages() for name, r in sorted(loaded.reports.items())
        },
    }
    lines = []
    for name, r in sorted(loaded.reports.items()):
        lines.append(f"{name}: {'ok' if r.ok else 'INVALID'}")
        lines.extend(f"  {m}" for m in r.messages())
    _emit(args, payload, lines)
    return 0


def _cmd_hausdorff(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    if loaded.action.katsura_spec is None:
        raise _InputError("hausdorff needs a katsura (matrix-pair) instance")
    verdict = kat.is_hausdorff(loaded.action, l_bound=args.l_bound, max_len=args.max_len)
    if isinstance(verdict, kat.Hausdorff):
        payload = {"command": "hausdorff", "verdict": "Hausdorff", "reason": verdict.reason}
        lines = [f"Hausdorff: {verdict.reason}"]
        ok = True
    elif isinstance(verdict, kat.NonHausdorff):
        fam = verdict.family
        members = [str(fam.member(k)) for k in range(3)]
        payload = {
            "command": "hausdorff",
            "verdict": "NonHausdorff",
            "l": verdict.l,
            "vertex": verdict.vertex,
            "family": {
                "stem": _path_json(fam.stem),
                "cycle": _path_json(fam.cycle),
                "exit": _path_json(fam.exit),
                "first_members": members,
            },
        }
        lines = [
            f"NonHausdorff: l={verdict.l} vertex={verdict.vertex} "
            f"family {', '.join(members)}, ..."
        ]
        ok = False
    else:
        payload = {
            "command": "hausdorff",
            "verdict": "Unknown",
            "note": verdict.note,
            "unresolved_cycles": [
                {"cycle": _path_json(c), "ratio": str(r)} for c, r in verdict.unresolved_cycles
            ],
        }
        lines = [f"Unknown: {verdict.note}"]
        for c, r in verdict.unresolved_cycles:
            lines.append(f"  cycle {c} has ratio {r}")
        ok = False
    _emit(args, payload, lines)
    if args.expect == "hausdorff":
        return 0 if ok else 1
    return 0


def _cmd_fixed_paths(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    if loaded.action.katsura_spec is None:
        raise _InputError("fixed-paths needs a katsura (matrix-pair) instance")
    if not loaded.action.graph.has_vertex(args.vertex):
        raise _InputError(f"unknown vertex {args.vertex!r}")
    if args.g == 0:
        raise _InputError("--g must be a nonzero integer")
    verdict = kat.minimal_fixed_paths(loaded.action, args.vertex, args.g, args.max_len)
    paths = [str(p) for p in verdict.paths]
    if isinstance(verdict, kat.Infinite):
        fam = verdict.family
        payload = {
            "command": "fixed-paths",
            "verdict": "Infinite",
            "paths": paths,
            "certificate": {
                "stem": _path_json(fam.stem),
                "cycle": _path_json(fam.cycle),
                "exit": _path_json(fam.exit),
            },
        }
        lines = [
            f"Infinite family (cycle {fam.cycle}, exit {fam.exit})",
            f"members below length {args.max_len}: {', '.join(paths)}",
        ]
    elif isinstance(verdict, kat.Finite):
        payload = {"command": "fixed-paths", "verdict": "Finite", "paths": paths}
        lines = [f"Finite: {len(paths)} path(s)"] + [f"  {p}" for p in paths]
    else:
        payload = {
            "command": "fixed-paths",
            "verdict": "ExhaustedAtDepth",
            "paths": paths,
            "depth": verdict.depth,
        }
        lines = [f"Exhausted at depth {verdict.depth}: found {', '.join(paths) or 'none'}"]
    _emit(args, payload, lines)
    return 0


def _cmd_eval(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    ring = ring_by_name(args.ring)
    elem = parse_expr(args.expr, loaded.action, ring)
    germ = parse_germ(args.germ, loaded.action)
    try:
        value = fn_eval(pi_map(elem), germ)
    except EvaluationUndecided as exc:
        raise _InputError(str(exc)) from None
    payload = {"command": "eval", "value": ring.show(value)}
    _emit(args, payload, [f"value: {ring.show(value)}"])
    return 0


def _cmd_equal(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    ring = ring_by_name(args.ring)
    lhs = parse_expr(args.lhs, loaded.action, ring)
    rhs = parse_expr(args.rhs, loaded.action, ring)
    verdict = elem_is_zero(lhs - rhs, depth=args.depth)
    if isinstance(verdict, ZeroCertified):
        payload = {"command": "equal", "verdict": "Equal", "route": verdict.route}
        lines = [f"Equal (certified: {verdict.route})"]
        outcome = "zero"
    elif isinstance(verdict, NonZeroWitness):
        payload = {
            "command": "equal",
            "verdict": "NotEqual",
            "witness": str(verdict.witness),
            "value": ring.show(verdict.value),
        }
        lines = [
            f"NotEqual: difference takes value {ring.show(verdict.value)} "
            f"at {verdict.witness}"
        ]
        outcome = "nonzero"
    else:
        payload = {
            "command": "equal",
            "verdict": "Unknown",
            "depth": verdict.depth,
            "note": verdict.note,
        }
        lines = [f"Unknown: difference vanishes up to depth {verdict.depth} ({verdict.note})"]
        outcome = "unknown"
    _emit(args, payload, lines)
    if args.expect == "zero":
        return 0 if outcome == "zero" else 1
    return 0


def _cmd_grade(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    ring = ring_by_name(args.ring)
    elem = parse_expr(args.expr, loaded.action, ring)
    parts = grade_decompose(elem)
    payload = {
        "command": "grade",
        "degrees": list(parts.keys()),
        "components": {str(n): format_element(c) for n, c in parts.items()},
    }
    if not parts:
        lines = ["zero element"]
    elif len(parts) == 1:
        (n, _c), = parts.items()
        lines = [f"homogeneous, degree {n}"]
    else:
        lines = [f"mixed degrees {sorted(parts)}"]
        lines.extend(f"  degree {n}: {format_element(c)}" for n, c in parts.items())
    _emit(args, payload, lines)
    return 0


def _cmd_diagonal(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    ring = ring_by_name(args.ring)
    vertices = [args.vertex] if args.vertex else None
    if args.vertex and not loaded.action.graph.has_vertex(args.vertex):
        raise _InputError(f"unknown vertex {args.vertex!r}")
    report = diagonal_report(loaded.action, ring, vertices)
    payload = {
        "command": "diagonal",
        "ok": report.ok,
        "failures": report.checks.messages(),
        "blocks": [
            {
                "vertex": b.base_vertex,
                "orbit": list(b.orbit),
                "stabilizer": {"kind": b.stabilizer_kind, "data": [str(x) for x in b.stabilizer]},
                "generators": [str(g) for g, _ in b.w_generators],
            }
            for b in report.blocks
        ],
    }
    lines = []
    for b in report.blocks:
        stab = (
            f"{b.stabilizer[0]}Z"
            if b.stabilizer_kind == "dZ"
            else "{" + ", ".join(map(str, b.stabilizer)) + "}"
        )
        lines.append(
            f"vertex {b.base_vertex}: orbit {{{', '.join(b.orbit)}}} "
            f"(size {len(b.orbit)}), stabilizer {stab}, "
            f"{len(b.orbit) ** 2} matrix units verified"
        )
    lines.append("all checks passed" if report.ok else "CHECK FAILURES:")
    lines.extend(f"  {m}" for m in report.checks.messages())
    _emit(args, payload, lines)
    return 0


def _cmd_katsura_check(args) -> int:
    loaded = _load(args)
    _require_valid(loaded)
    if loaded.action.katsura_spec is None:
        raise _InputError("katsura-check needs a katsura (matrix-pair) instance")
    ring = ring_by_name(args.ring)
    report = kat.katsura_family_check(loaded.action, ring, window=args.window)
    payload = {
        "command": "katsura-check",
        "ok": report.ok,
        "failures": report.messages(),
        "window": args.window,
    }
    lines = [
        f"relation suite over window |m| <= {args.window}: "
        + ("all relations hold" if report.ok else "FAILURES")
    ]
    lines.extend(f"  {m}" for m in report.messages())
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssalg",
        description="exact computation with self-similar actions on graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="instance file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--ring", default="int", help="int, rat or mod:<n>")

    p = sub.add_parser("validate", help="check the instance invariants")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("hausdorff", help="decide Hausdorffness with witnesses")
    common(p)
    p.add_argument("--l-bound", type=int, default=16)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--expect", choices=("hausdorff",))
    p.set_defaults(func=_cmd_hausdorff)

    p = sub.add_parser("fixed-paths", help="minimal strongly fixed paths")
    common(p)
    p.add_argument("--vertex", required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--max-len", type=int, default=18)
    p.set_defaults(func=_cmd_fixed_paths)

    p = sub.add_parser("eval", help="evaluate an expression at a germ")
    common(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--germ", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("equal", help="decide equality of two expressions")
    common(p)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--expect", choices=("zero",))
    p.set_defaults(func=_cmd_equal)

    p = sub.add_parser("grade", help="graded decomposition of an expression")
    common(p)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=_cmd_grade)

    p = sub.add_parser("diagonal", help="orbit/stabilizer structure report")
    common(p)
    p.add_argument("--vertex", default=None)
    p.set_defaults(func=_cmd_diagonal)

    p = sub.add_parser("katsura-check", help="matrix-pair relation suite")
    common(p)
    p.add_argument("--window", type=int, default=4)
    p.set_defaults(func=_cmd_katsura_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_InputError, ExprError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
