"""Acceptance criteria, one check per criterion.

Each ``criterion_k`` returns (passed, detail). The pytest wrappers assert on
what is actually true of the implementation; the summary hook in conftest
prints one PASS/FAIL line per criterion. Run this file directly to print the
lines without pytest.
"""

from __future__ import annotations

import time
from itertools import product

from bimlab.algebra import find_isomorphism, is_idempotent, validate
from bimlab.clauses import (eval_clause, linearize, parse_clause, satisfies_translation,
                            subreduct_oracle, translate_subreduct)
from bimlab.completion import dm_completion
from bimlab.constructions import catalog, catalog_instances, is_boolean_pointed, is_pointed_brouwerian
from bimlab.fractions import (TransformationTable, check_normal, check_transformation_pair,
                              find_transformation, fractions_normal, isomorphic_fixing, pi_table,
                              sigma_image)
from bimlab.order import from_cover_pairs, order_isomorphisms

from conftest import SMALL, UP_TO_6
from oracles import HASSE_EDGES, HASSE_NODES, H5_ORDER, PI_TABLE
from properties import SUITES
from test_clauses import LINEARITY, QUASI, same_up_to_renaming

RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, passed: bool, detail: str) -> tuple[bool, str]:
    RESULTS[k] = (passed, detail)
    return passed, detail


# ---------------------------------------------------------------- 1

def criterion_1():
    t0 = time.perf_counter()
    A = catalog("L3")
    res = dm_completion(A)
    C = res.algebra
    elapsed = time.perf_counter() - t0
    labels = set(res.labels)
    want = {"b", "a", "a*~a", "1", "a*~b", "~a", "~b", "1 v a*~b"}
    fixed = {res.labels[i] for i in range(C.n) if C.comp[i] == i}
    drawn = from_cover_pairs(8, [(0, 1), (1, 2), (2, 3), (2, 4), (3, 5), (4, 5), (5, 6), (6, 7)])
    iso = next(order_isomorphisms(drawn, C.poset, 1), None) is not None
    ok = (C.n == 8 and labels == want and fixed == {"1", "a*~b"} and iso
          and all(res.checks.values()) and elapsed < 1)
    return record(1, ok, f"{C.n} elements, labels {'match' if labels == want else sorted(labels)}, "
                         f"fixed {sorted(fixed)}, order {'matches' if iso else 'differs'}, "
                         f"{elapsed:.3f}s")


# ---------------------------------------------------------------- 2

def h5_pi_mismatches(A, F):
    order = [A.element(s) for s in H5_ORDER]
    grid = pi_table(A, F.table)
    got = [[f"{A.label(grid[x][y][0])}|{A.label(grid[x][y][1])}" for y in order] for x in order]
    return [(H5_ORDER[i], H5_ORDER[j], got[i][j], PI_TABLE[i][j])
            for i, j in product(range(5), repeat=2) if got[i][j] != PI_TABLE[i][j]]


def criterion_2():
    t0 = time.perf_counter()
    A = catalog("H5c")
    F = fractions_normal(A)
    C = F.algebra
    elapsed = time.perf_counter() - t0
    keys = list(HASSE_NODES)
    drawn = from_cover_pairs(10, [(keys.index(x), keys.index(y)) for x, y in HASSE_EDGES], keys)
    drawn_ok = next(order_isomorphisms(drawn, C.poset, 1), None) is not None
    e = C.element
    ex_ok = (C.label(C.mul[e("a|b"), e("b|a")]) == "bot|1"
             and C.label(C.add[e("a|b"), e("1|c")]) == "a|b")
    diffs = h5_pi_mismatches(A, F)
    matches = 25 - len(diffs)
    ok = C.n == 10 and drawn_ok and ex_ok and matches == 25 and elapsed < 1
    detail = (f"{C.n} normal pairs, Hasse order {'isomorphic' if drawn_ok else 'differs'}, "
              f"worked products {'ok' if ex_ok else 'wrong'}, pi table {matches}/25")
    if diffs:
        detail += "; mismatches " + ", ".join(f"row {r} col {c}: computed {g}, reference {w}"
                                              for r, c, g, w in diffs)
        detail += " (that reference cell breaks the a/b symmetry of H5)"
    return record(2, ok, detail)


# ---------------------------------------------------------------- 3

def criterion_3():
    A = catalog("H5c")
    D = dm_completion(A)
    F = fractions_normal(A)
    fixed = {D.embed[a]: F.embed[a] for a in range(A.n)}
    iso = find_isomorphism(D.algebra, F.algebra, fixed)
    ok = iso is not None and D.size == F.size == 10
    return record(3, ok, f"completion {D.size}, fractions {F.size}, "
                         f"{'isomorphic over A' if iso else 'not isomorphic'}")


# ---------------------------------------------------------------- 4

def criterion_4():
    got = {s: find_transformation(catalog(s)) is None for s in ("M3", "N5", "dchain:4")}
    return record(4, all(got.values()), ", ".join(f"{s}: {'none' if v else 'found'}"
                                                 for s, v in got.items()))


# ---------------------------------------------------------------- 5

def closed_form_table(A, kind: str) -> TransformationTable:
    import numpy as np
    n = A.n
    R = A.residual_table()
    idx = np.arange(n)
    if kind == "semilattice":
        alpha = np.broadcast_to(idx[:, None], (n, n)).copy()
        beta = R.copy()
    elif kind == "boolean":
        alpha = np.broadcast_to(A.mul[A.zero][:, None], (n, n)).copy()
        beta = R.copy()
    else:
        alpha = np.broadcast_to(idx[:, None], (n, n)).copy()
        beta = np.broadcast_to(idx[None, :], (n, n)).copy()
    return TransformationTable(alpha, beta)


def criterion_5():
    names = [s for s in catalog_instances(6) if catalog(s).is_commutative]
    fams = {
        "semilattice": [s for s in names if is_pointed_brouwerian(catalog(s))
                        and catalog(s).zero == catalog(s).top],
        "boolean": [s for s in names if is_boolean_pointed(catalog(s))],
        "group": [s for s in names if s.startswith("cyclic:")],
    }
    problems = []
    for kind, members in fams.items():
        for s in members:
            A = catalog(s)
            t = closed_form_table(A, kind)
            if not all(check_transformation_pair(A, a, b, *t(a, b))
                       for a, b in product(range(A.n), repeat=2)):
                problems.append(f"{s}: terms fail")
            normal = bool(check_normal(A, t))
            expect = kind != "group" or A.n == 1
            if normal != expect:
                problems.append(f"{s}: normal={normal}")
    sizes = ", ".join(f"{k} {len(v)}" for k, v in fams.items())
    return record(5, not problems, f"entries checked: {sizes}" + (f"; {problems}" if problems else ""))


# ---------------------------------------------------------------- 6

def criterion_6():
    problems = []
    F2 = fractions_normal(catalog("chain:2:1"))
    if find_isomorphism(F2.algebra, catalog("sugihara:3")) is None:
        problems.append("chain:2 fractions not isomorphic to sugihara:3")
    sizes = []
    for n in range(2, 6):
        A = catalog(f"chain:{n}:{n - 1}")
        F = fractions_normal(A)
        C = F.algebra
        sizes.append(C.n)
        if not (C.poset.is_chain() and is_idempotent(C) and validate(C, commutative=True)):
            problems.append(f"n={n}: not a linear idempotent involutive algebra")
        if C.n % 2 == 0 or C.n != dm_completion(A, verify=False).size:
            problems.append(f"n={n}: size {C.n}")
        sub, _ = sigma_image(F.interior)
        if find_isomorphism(sub, A) is None:
            problems.append(f"n={n}: sigma image differs from the chain")
    return record(6, not problems, f"sizes {sizes} for n=2..5" + (f"; {problems}" if problems else ""))


# ---------------------------------------------------------------- 7

def criterion_7():
    D = catalog("diamond_fig5")
    structural = (bool(validate(D, commutative=True)) and D.lattice and is_idempotent(D)
                  and D.is_involutive() and D.is_residuated())
    r = eval_clause(D, "x = (1 ^ x)*(0 v x)")
    ok = structural and not r and r.witness == {"x": "a"}
    return record(7, ok, f"validates: {structural}, equation "
                         f"{'fails at ' + str(r.witness) if not r else 'holds'}")


# ---------------------------------------------------------------- 8

def criterion_8():
    t0 = time.perf_counter()
    problems = []
    if [str(i) for i in linearize("x*x <= x")] != ["x1*x2 <= x1 v x2"]:
        problems.append("linearize")
    if not same_up_to_renaming(translate_subreduct("x*y <= x v y"), parse_clause(QUASI)):
        problems.append("quasiequation")
    lin = translate_subreduct("x <= y | y <= x")
    if not same_up_to_renaming(lin, parse_clause(LINEARITY)):
        problems.append("linearity clause")
    val = dict(a="1", b="1", c="a", d="b", e="b", f="a", g="1", h="1")
    if eval_clause(catalog("L3"), lin, val):
        problems.append("L3 valuation")
    count = 0
    for s in SMALL:
        A = catalog(s)
        C = dm_completion(A, verify=False)
        for text in ("x*y <= x v y", "x <= y | y <= x"):
            count += 1
            if satisfies_translation(A, text) != subreduct_oracle(A, text, C):
                problems.append(f"{s}: {text}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 60
    return record(8, ok, f"{count} translation/oracle comparisons, {elapsed:.2f}s"
                         + (f"; {problems}" if problems else ""))


# ---------------------------------------------------------------- 9

def criterion_9():
    violations = {suite: sum(len(fn(s)) for s in UP_TO_6) for suite, fn in SUITES.items()}
    total = sum(violations.values())
    bad = {k: v for k, v in violations.items() if v}
    return record(9, total == 0, f"{len(SUITES)} suites on {len(UP_TO_6)} algebras, "
                                 f"{total} violations" + (f" {bad}" if bad else ""))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


# ---------------------------------------------------------------- pytest wrappers

def test_criterion_1_l3_completion():
    assert criterion_1()[0]


def test_criterion_2_h5_fractions():
    passed, _ = criterion_2()
    A = catalog("H5c")
    F = fractions_normal(A)
    # everything holds except one reference cell, which is inconsistent with the
    # symmetry of H5 and with the row below it
    assert h5_pi_mismatches(A, F) == [("a", "bot", "a|b", "bot|1")]
    assert not passed


def test_criterion_3_finite_coincidence():
    assert criterion_3()[0]


def test_criterion_4_no_fractions():
    assert criterion_4()[0]


def test_criterion_5_closed_form_terms():
    assert criterion_5()[0]


def test_criterion_6_sugihara():
    assert criterion_6()[0]


def test_criterion_7_diamond():
    assert criterion_7()[0]


def test_criterion_8_clauses():
    assert criterion_8()[0]


def test_criterion_9_property_suites():
    assert criterion_9()[0]


def summary_lines() -> list[str]:
    return [f"acceptance {k}: {'PASS' if ok else 'FAIL'}  {detail}"
            for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for fn in CRITERIA:
        fn()
    print("\n".join(summary_lines()))
