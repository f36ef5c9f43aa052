"""Command-line interface: batch verification of the paper-scale computations.

All reports are JSON on stdout (deterministic byte-for-byte for fixed inputs);
--pretty adds an aligned text rendering of L-factor tables for eyeballing.
Exit codes: 0 for any computed verdict (including negative ones), 2 for input
errors, 3 for internal-consistency violations.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence, Union

from .arith import ArithmeticError_, QuadElem, squarefree_class
from .algebra import InternalConsistencyError, build_algebra, decompose_commutative, \
    restriction_endomorphism_description
from .brauer import hilbert_symbol, quaternion_class
from .cohomology import (
    CohomologyError,
    CocycleTable,
    MultiquadGroup,
    class_decompose,
    sign_basis_labels,
    twist_extension_class,
)
from .family import JContext, analyze, curve_model, find_prime_for_order, splitting_order_bound
from .lfactor import BadReduction, WeilViolation, compare_tables, lfactor_over_K

BUILTIN_FIXTURES = {"table1", "table2"}


class UsageError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed rational {text!r}") from exc


def parse_field(text: str) -> tuple[int, ...]:
    try:
        gens = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"malformed field generator list {text!r}") from exc
    if not gens:
        raise UsageError("empty field generator list")
    return gens

_QUAD_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?:(?P<sign>[+-])?\s*(?P<b>\d+(?:/\d+)?)?\s*\*?\s*sqrt\(?(?P<m>-?\d+)\)?)?\s*$")


def parse_quad(text: str) -> Union[Fraction, QuadElem]:
    """Parse '2-sqrt2', '1+2*sqrt-3', 'sqrt6', '4', '-7/3'."""
    m = _QUAD_RE.match(text.replace(" ", ""))
    if not m or (m.group("a") is None and m.group("m") is None):
        raise UsageError(f"cannot parse quadratic element {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("m") is None:
        return a
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    base = int(m.group("m"))
    sq = squarefree_class(base)
    # fold the square part of the radicand into the coefficient
    from .arith import rational_sqrt
    b = b * rational_sqrt(Fraction(base, sq))
    return QuadElem.make(sq, a, b)


def parse_primes(text: str) -> list[int]:
    from .arith import is_prime
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError as exc:
            raise UsageError(f"malformed prime range {text!r}") from exc
        return [p for p in range(max(lo, 5), hi + 1) if is_prime(p)]
    try:
        primes = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed prime list {text!r}") from exc
    for p in primes:
        if not is_prime(p) or p in (2, 3):
            raise UsageError(f"{p} is not an admissible prime (odd prime, not 2 or 3)")
    return primes


def load_fixture(name_or_path: str) -> list[dict]:
    if name_or_path in BUILTIN_FIXTURES:
        raw = json.loads(resources.files("qmkit.fixtures")
                         .joinpath(f"{name_or_path}.json").read_text())
        return raw["rows"]
    try:
        with open(name_or_path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read fixture {name_or_path!r}: {exc}") from exc
    return raw["rows"] if isinstance(raw, dict) else raw


def emit(report: dict, pretty_lines: Optional[list[str]] = None, pretty: bool = False) -> None:
    print(json.dumps(report, sort_keys=True, separators=(",", ": "), indent=1))
    if pretty and pretty_lines:
        print("\n".join(pretty_lines), file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    ctx = JContext(parse_rational(args.j), assert_full_QM=not args.no_full_qm)
    group = MultiquadGroup(parse_field(args.field))
    report = analyze(ctx, group)
    emit({"command": "analyze", "inputs": {"j": args.j, "field": list(group.gens)},
          "results": report.to_json()})
    return 0


def cmd_lfactor(args) -> int:
    ctx = JContext(parse_rational(args.j))
    model = curve_model(ctx)
    gens = parse_field(args.field)
    twist = parse_quad(args.twist) if args.twist else None
    primes = parse_primes(args.primes)
    rows = []
    computed = {}
    for p in primes:
        try:
            lf = lfactor_over_K(model, gens, p, twist=twist)
            computed[p] = lf
            rows.append(lf.to_json())
        except (BadReduction, ArithmeticError_) as exc:
            rows.append({"p": p, "error": str(exc)})
    results: dict = {"factors": rows}
    provenance = {"j": args.j, "field": list(gens), "twist": args.twist,
                  "source": "point counts over residue fields"}
    diff = None
    if args.compare:
        fixture = load_fixture(args.compare)
        diff = compare_tables(computed, fixture)
        results["comparison"] = dict(diff.to_json(), fixture=args.compare)
    report = {"command": "lfactor", "inputs": provenance, "results": results}
    pretty_lines = [f"p={r['p']}: {r.get('pretty', r.get('error'))}" for r in rows]
    if diff is not None:
        pretty_lines.append(f"comparison vs {args.compare}: "
                            f"{'PASS' if diff.passed else 'FAIL'}")
    emit(report, pretty_lines, args.pretty)
    if args.csv:
        _write_csv(args.csv, rows, diff)
    if args.figure:
        from .figures import render_lfactor_figure
        render_lfactor_figure(args.figure, computed, diff)
    return 0


def _write_csv(path: str, rows: list[dict], diff) -> None:
    import csv
    match_by_p = {}
    if diff is not None:
        match_by_p = {r["p"]: r.get("match") for r in diff.rows}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "factor_coeffs", "multiplicity", "match"])
        for row in rows:
            if "error" in row:
                writer.writerow([row["p"], f"error: {row['error']}", "", ""])
                continue
            for fac in row["factors"]:
                writer.writerow([row["p"], " ".join(str(c) for c in fac["coeffs"]),
                                 fac["multiplicity"], match_by_p.get(row["p"], "")])


def cmd_cocycle(args) -> int:
    if args.action == "twist-class":
        if not args.gamma or not args.field:
            raise UsageError("twist-class needs --gamma and --field")
        group = MultiquadGroup(parse_field(args.field))
        gamma = parse_quad(args.gamma)
        try:
            coords = twist_extension_class(group, gamma)
        except CohomologyError as exc:
            raise UsageError(str(exc)) from exc
        emit({"command": "cocycle twist-class",
              "inputs": {"gamma": args.gamma, "field": list(group.gens)},
              "results": {"coords": list(coords), "basis": sign_basis_labels(group)}})
        return 0
    if args.action == "decompose":
        if not args.cocycle:
            raise UsageError("decompose needs --cocycle (path or inline JSON)")
        table = _load_cocycle(args.cocycle)
        dec = class_decompose(table)
        emit({"command": "cocycle decompose",
              "inputs": {"generators": list(table.group.gens)},
              "results": dec.to_json()})
        return 0
    raise UsageError(f"unknown cocycle action {args.action!r}")


def _load_cocycle(text: str) -> CocycleTable:
    try:
        if text.strip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read cocycle {text!r}: {exc}") from exc
    try:
        return CocycleTable.from_json(data)
    except (CohomologyError, KeyError, ArithmeticError_) as exc:
        raise UsageError(f"malformed cocycle: {exc}") from exc


def cmd_algebra(args) -> int:
    table = _load_cocycle(args.cocycle)
    alg = build_algebra(table)
    if not alg.is_commutative():
        emit({"command": "algebra decompose",
              "inputs": {"generators": list(table.group.gens)},
              "results": {"commutative": False}})
        return 0
    factors = decompose_commutative(alg)
    pair = tuple(int(x) for x in args.quaternion.split(","))
    reports = restriction_endomorphism_description(pair, factors, symmetric=True)
    emit({"command": "algebra decompose",
          "inputs": {"generators": list(table.group.gens), "quaternion": list(pair)},
          "results": {"commutative": True, "factors": [r.to_json() for r in reports]}})
    return 0


def cmd_hilbert(args) -> int:
    v = "infinity" if args.v in ("infinity", "oo") else int(args.v)
    val = hilbert_symbol(parse_rational(args.a), parse_rational(args.b), v)
    emit({"command": "hilbert", "inputs": {"a": args.a, "b": args.b, "v": args.v},
          "results": {"symbol": val}})
    return 0


def cmd_quatclass(args) -> int:
    cls = quaternion_class(parse_rational(args.a), parse_rational(args.b))
    emit({"command": "quatclass", "inputs": {"a": args.a, "b": args.b},
          "results": {"ramified": cls.to_json()}})
    return 0


def cmd_splitting_bound(args) -> int:
    bound = splitting_order_bound(args.p, args.r)
    emit({"command": "splitting-bound", "inputs": {"p": args.p, "r": args.r},
          "results": bound.to_json()})
    return 0


def cmd_find_prime(args) -> int:
    res = find_prime_for_order(args.r)
    emit({"command": "find-prime", "inputs": {"r": args.r}, "results": res.to_json()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmkit",
                                     description="strong modularity toolkit for the "
                                                 "quaternionic-multiplication surface family")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="strong-modularity analysis of B_j over K")
    p.add_argument("--j", required=True)
    p.add_argument("--field", required=True, help='e.g. "-6,-3"')
    p.add_argument("--no-full-qm", action="store_true")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("lfactor", help="local L-factors over K via point counting")
    p.add_argument("--j", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--primes", required=True, help='"5,7,11" or "5..41"')
    p.add_argument("--twist", help='e.g. "2-sqrt2"')
    p.add_argument("--compare", help="fixture path, or builtin: table1, table2")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--csv", help="write a delimited table to this path")
    p.add_argument("--figure", help="render a matplotlib figure to this path")
    p.set_defaults(fn=cmd_lfactor)

    p = sub.add_parser("cocycle", help="cocycle decomposition and twist classes")
    p.add_argument("action", choices=["decompose", "twist-class"])
    p.add_argument("--cocycle", help="path or inline JSON")
    p.add_argument("--gamma")
    p.add_argument("--field")
    p.set_defaults(fn=cmd_cocycle)

    p = sub.add_parser("algebra", help="twisted group algebra decomposition")
    p.add_argument("action", choices=["decompose"])
    p.add_argument("--cocycle", required=True)
    p.add_argument("--quaternion", default="2,3")
    p.set_defaults(fn=cmd_algebra)

    p = sub.add_parser("hilbert", help="local Hilbert symbol (a,b)_v")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("v", help="odd prime, 2, or 'infinity'")
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("quatclass", help="ramified places of the quaternion algebra (a,b)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=cmd_quatclass)

    p = sub.add_parser("splitting-bound", help="splitting-character order bound for B_{1/p}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(fn=cmd_splitting_bound)

    p = sub.add_parser("find-prime", help="least prime giving splitting order >= 2^r")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(fn=cmd_find_prime)

    return parser


_VALUE_FLAGS = {"--j", "--field", "--primes", "--twist", "--gamma", "--compare",
                "--cocycle", "--quaternion", "--csv", "--figure", "--p", "--r"}


def _fuse_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ['--field', '-6,-3'] into ['--field=-6,-3'] so argparse accepts it."""
    out: list[str] = []
    i = 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_fuse_negative_values(argv))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, ArithmeticError_) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except (InternalConsistencyError, WeilViolation, AssertionError) as exc:
        print(json.dumps({"internal_consistency_error": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
