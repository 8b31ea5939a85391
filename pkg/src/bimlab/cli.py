"""Command-line front end: ``bimlab <command> [FILE | --catalog NAME] ...``.

Exit codes: 0 success or property true, 1 property false, 2 input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .algebra import (AlgebraError, InteriorOperator, InvolutiveAlgebra, OrderedAlgebra,
                      check_normal_interior, classify, validate)
from .clauses import (EvalResult, NotLinear, NotSlMonoidal, ParseError, UnsupportedOperator,
                      eval_clause, eval_term, linearize, parse_clause, parse_term, translate_any)
from .completion import SizeCap, compare_generators, dm_completion, dm_completion_bisemigroup
from .constructions import CATALOG, UnknownName, catalog
from .fractions import (NotNormal, check_fractions, check_normal, find_transformation,
                        fractions_normal, fractions_quotient, missing_transformation, pi_table,
                        roundtrip_checks)
from .io import AlgebraFileError, dumps_json, load
from .order import export_dot

OK, FALSE, INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------- helpers

def _source(args) -> OrderedAlgebra:
    if args.file and args.catalog:
        raise InputError("give either FILE or --catalog, not both")
    if args.catalog:
        try:
            return catalog(args.catalog)
        except UnknownName as exc:
            raise InputError(f"unknown catalog name {exc.args[0]!r}") from None
    if args.file:
        return load(args.file)
    raise InputError("an algebra is required: FILE or --catalog NAME")


def _valid_source(args, commutative: bool = True) -> OrderedAlgebra:
    A = _source(args)
    r = validate(A, commutative=commutative)
    if not r:
        raise InputError(f"{A.name}: invalid input algebra: {r.describe(A.names)}")
    return A


def _tables(alg: OrderedAlgebra) -> list[str]:
    lab = [alg.label(i) for i in range(alg.n)]
    w = max([len(s) for s in lab] + [1])
    out = []
    for sym, t in (("*", alg.mul), ("+", alg.add)):
        if t is None:
            continue
        out.append(f"{sym:>{w}} | " + " ".join(f"{s:>{w}}" for s in lab))
        out.append("-" * (w + 1) + "+" + "-" * ((w + 1) * alg.n))
        for i in range(alg.n):
            out.append(f"{lab[i]:>{w}} | " + " ".join(f"{lab[int(v)]:>{w}}" for v in t[i]))
        out.append("")
    return out


def _describe(alg: OrderedAlgebra) -> list[str]:
    lab = alg.label
    lines = [f"algebra {alg.name or '?'}: {alg.n} elements",
             "elements: " + ", ".join(lab(i) for i in range(alg.n)),
             "covers: " + ", ".join(f"{lab(x)} < {lab(y)}" for x, y in alg.poset.covers())]
    if alg.one is not None:
        lines.append(f"1 = {lab(alg.one)}")
    if alg.zero is not None:
        lines.append(f"0 = {lab(alg.zero)}")
    if isinstance(alg, InvolutiveAlgebra):
        lines.append("comp: " + ", ".join(f"{lab(i)} -> {lab(int(c))}" for i, c in enumerate(alg.comp)))
    return lines


def _emit(args, alg: OrderedAlgebra, text: list[str], dot_labels=None) -> None:
    if args.out == "dot":
        sys.stdout.write(export_dot(alg.poset, dot_labels, alg.name or "algebra"))
    elif args.out == "json-tables":
        sys.stdout.write(dumps_json(alg))
    else:
        sys.stdout.write("\n".join(text).rstrip("\n") + "\n")


def _witness(r: EvalResult) -> str:
    return ", ".join(f"{k}={v}" for k, v in r.witness.items())


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    A = _source(args)
    r = validate(A, commutative=args.commutative)
    if not r:
        print(f"{A.name}: {r.describe(A.names)}")
        return FALSE
    if args.out != "text":
        _emit(args, A, [])
        return OK
    print(f"{A.name}: OK ({A.n} elements)")
    tags = classify(A)
    if tags:
        print("tags: " + ", ".join(tags))
    return OK


def cmd_complete(args) -> int:
    A = _valid_source(args)
    if args.bisemigroup or args.filter or args.ideal or args.alpha != "-":
        F = [A.element(s) for s in _names(args.filter)]
        I = [A.element(s) for s in _names(args.ideal)]
        res = dm_completion_bisemigroup(A, F, I, args.alpha, cap=args.cap)
        labels = None
    else:
        res = dm_completion(A, cap=args.cap)
        labels = res.labels
    C = res.algebra
    lines = _describe(C)
    lines.append("embedding: " + ", ".join(f"{A.label(a)} -> {C.label(e)}" for a, e in enumerate(res.embed)))
    lines += [f"check {k}: {v.describe(C.names)}" for k, v in res.checks.items()]
    _emit(args, C, lines, labels)
    return OK if all(res.checks.values()) else FALSE


def _names(text: str | None) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


def cmd_fractions(args) -> int:
    A = _valid_source(args)
    t = find_transformation(A, jobs=args.jobs)
    if t is None:
        a, b = missing_transformation(A)
        print(f"{A.name}: no bimonoid of fractions; {A.label(a)}*~{A.label(b)} is not of the form x+~y")
        return FALSE
    if args.normal:
        r = check_normal(A, t)
        if not r:
            a, b, x = r.witness
            print(f"{A.name}: transformation functions are not normal at "
                  f"a={A.label(a)}, b={A.label(b)}, x={A.label(x)}")
            return FALSE
        F = fractions_normal(A, t)
    else:
        F = fractions_quotient(A, t)
    C = F.algebra
    lines = _describe(C)
    lines.append("embedding: " + ", ".join(f"{A.label(a)} -> {C.label(e)}" for a, e in enumerate(F.embed)))
    if F.interior is not None:
        lines.append("sigma: " + ", ".join(f"{C.label(i)} -> {C.label(s)}" for i, s in enumerate(F.interior.sigma)))
    lines += F.notes
    lines.append("")
    lines.append("transformation functions (alpha, beta):")
    lines += _pair_grid(A, [[t(a, b) for b in range(A.n)] for a in range(A.n)])
    if args.normal:
        lines.append("")
        lines.append("projection pi onto normal pairs:")
        lines += _pair_grid(A, pi_table(A, t))
    checks = check_fractions(F)
    lines.append("")
    lines += [f"check {k}: {v.describe(C.names)}" for k, v in checks.items()]
    _emit(args, C, lines)
    return OK if all(checks.values()) else FALSE


def _pair_grid(A: OrderedAlgebra, grid) -> list[str]:
    lab = A.label
    cells = [[f"{lab(x)}|{lab(y)}" for x, y in row] for row in grid]
    w = max([len(c) for row in cells for c in row] + [len(lab(i)) for i in range(A.n)])
    out = [" " * w + " | " + " ".join(f"{lab(b):>{w}}" for b in range(A.n))]
    for a, row in enumerate(cells):
        out.append(f"{lab(a):>{w}} | " + " ".join(f"{c:>{w}}" for c in row))
    return out


def _sigma_from_term(B: OrderedAlgebra, text: str) -> InteriorOperator:
    if not isinstance(B, InvolutiveAlgebra):
        raise InputError("sigma needs an involutive algebra (with comp)")
    term = parse_term(text)
    extra = term.variables() - {"x"}
    if extra:
        raise InputError(f"sigma term may only use the variable x, found {sorted(extra)}")
    vals = np.broadcast_to(eval_term(B, term, {"x": np.arange(B.n)}), (B.n,))
    return InteriorOperator(B, tuple(int(v) for v in vals))


def cmd_sigma(args) -> int:
    B = _valid_source(args)
    if args.term:
        io = _sigma_from_term(B, args.term)
        r = check_normal_interior(io)
        print("sigma: " + ", ".join(f"{B.label(i)} -> {B.label(s)}" for i, s in enumerate(io.sigma)))
        print(f"normal interior operator: {r.describe(B.names)}")
        return OK if r else FALSE
    t = find_transformation(B, jobs=args.jobs)
    if t is None:
        print(f"{B.name}: no bimonoid of fractions")
        return FALSE
    F = fractions_normal(B, t) if (B.is_residuated() and check_normal(B, t)) else fractions_quotient(B, t)
    if F.interior is None:
        print(f"{B.name}: {'; '.join(F.notes)}")
        return FALSE
    C = F.algebra
    print("sigma: " + ", ".join(f"{C.label(i)} -> {C.label(s)}" for i, s in enumerate(F.interior.sigma)))
    checks = check_fractions(F)
    for k in ("interior", "sigma-image", "conucleus"):
        print(f"check {k}: {checks[k].describe(C.names)}")
    return OK if all(checks[k] for k in ("interior", "sigma-image", "conucleus")) else FALSE


def cmd_clause(args) -> int:
    A = _source(args)
    clause = parse_clause(_required(args.clause, "--clause"))
    target = A
    if args.oracle:
        target = dm_completion(_valid_source(args), cap=args.cap, verify=False).algebra
    if args.valuation:
        val = dict(kv.split("=", 1) for kv in _names(args.valuation))
        r = eval_clause(target, clause, {k.strip(): v.strip() for k, v in val.items()})
    elif args.sample:
        rng = np.random.default_rng(args.seed)
        vs = clause.variables()
        r = EvalResult(True, None, vs)
        for _ in range(args.sample):
            pick = {v: int(i) for v, i in zip(vs, rng.integers(0, target.n, len(vs)))}
            r = eval_clause(target, clause, pick)
            if not r:
                break
    else:
        r = eval_clause(target, clause)
    if r:
        print(f"holds: {clause}")
        return OK
    print(f"fails: {clause}")
    print(f"witness: {_witness(r)}")
    return FALSE


def _required(v, flag: str):
    if not v:
        raise InputError(f"{flag} is required")
    return v


def cmd_translate(args) -> int:
    clause = parse_clause(_required(args.clause, "--clause"))
    for c in translate_any(clause):
        print(c)
    return OK


def cmd_linearize(args) -> int:
    for i in linearize(_required(args.ineq, "--ineq")):
        print(i)
    return OK


_GEN = re.compile(r"^\s*(?:(\S+?)\s*([*+])\s*)?(~)?\s*(\S+)\s*$")


def _generator(A: OrderedAlgebra, text: str) -> tuple[int, int, str]:
    """Parse a*~b, a+~b, a or ~b."""
    m = _GEN.match(text)
    if not m:
        raise InputError(f"cannot read generator {text!r}")
    left, op, neg, right = m.groups()
    try:
        if left is None and neg is None:
            return A.element(right), A.zero, "mul"
        if left is None:
            return A.one, A.element(right), "mul"
        if neg is None:
            raise InputError(f"generator {text!r} needs a complemented right factor")
        return A.element(left), A.element(right), "mul" if op == "*" else "add"
    except KeyError as exc:
        raise InputError(f"unknown element {exc.args[0]!r}") from None


def cmd_compare(args) -> int:
    A = _valid_source(args)
    lhs = _generator(A, _required(args.lhs, "--lhs"))
    rhs = _generator(A, _required(args.rhs, "--rhs"))
    ok = compare_generators(A, lhs, rhs)
    print(f"{args.lhs.strip()} <= {args.rhs.strip()}: {'true' if ok else 'false'}")
    return OK if ok else FALSE


def cmd_catalog(args) -> int:
    name = args.catalog or args.file
    if not name:
        for key, e in CATALOG.items():
            print(f"{e.pattern or key:<22} {e.provenance}")
        return OK
    try:
        A = catalog(name)
    except UnknownName as exc:
        raise InputError(f"unknown catalog name {exc.args[0]!r}") from None
    lines = _describe(A) + ["tags: " + ", ".join(classify(A)), ""] + _tables(A)
    _emit(args, A, lines)
    return OK


def cmd_roundtrip(args) -> int:
    A = _valid_source(args)
    if args.term:
        rep = roundtrip_checks(_sigma_from_term(A, args.term))
    else:
        rep = roundtrip_checks(A)
    for k, v in rep.checks.items():
        print(f"check {k}: {v.describe()}")
    return OK if rep else FALSE


COMMANDS = {
    "validate": cmd_validate, "complete": cmd_complete, "fractions": cmd_fractions,
    "sigma": cmd_sigma, "clause": cmd_clause, "translate": cmd_translate,
    "linearize": cmd_linearize, "compare": cmd_compare, "catalog": cmd_catalog,
    "roundtrip": cmd_roundtrip,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bimlab", description="Finite bimonoid workbench.")
    p.add_argument("--version", action="version", version=f"bimlab {__version__}")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("file", nargs="?", metavar="FILE", help="algebra file (YAML or JSON)")
    p.add_argument("--catalog", metavar="NAME", help="use a catalog algebra instead of FILE")
    p.add_argument("--out", choices=["text", "dot", "json-tables"], default="text")
    p.add_argument("--normal", action="store_true", help="build fractions on normal pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cap", type=int, default=20_000, help="maximum number of closed sets")
    p.add_argument("--commutative", action="store_true", help="also require commutativity")
    p.add_argument("--clause", metavar="EXPR")
    p.add_argument("--ineq", metavar="EXPR")
    p.add_argument("--valuation", metavar="x=a,y=b")
    p.add_argument("--sample", type=int, default=0, help="check random valuations only")
    p.add_argument("--oracle", action="store_true", help="evaluate on the completion")
    p.add_argument("--lhs", metavar="GEN")
    p.add_argument("--rhs", metavar="GEN")
    p.add_argument("--term", metavar="EXPR", help="interior operator as a term in x")
    p.add_argument("--bisemigroup", action="store_true")
    p.add_argument("--filter", metavar="NAMES")
    p.add_argument("--ideal", metavar="NAMES")
    p.add_argument("--alpha", choices=["+", "-"], default="-")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("bimlab: --jobs must be positive", file=sys.stderr)
        return INPUT
    try:
        return COMMANDS[args.command](args)
    except (InputError, AlgebraFileError, ParseError, NotLinear, NotSlMonoidal,
            UnsupportedOperator, SizeCap, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"bimlab {args.command}: {msg}", file=sys.stderr)
        return INPUT
    except (AlgebraError, NotNormal) as exc:
        print(f"bimlab {args.command}: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
