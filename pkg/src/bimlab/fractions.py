"""Complemented bimonoids of fractions: transformation functions, the quotient
construction, normal pairs, the interior operator and round trips."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import (PASS, AlgebraError, InteriorOperator, InvolutiveAlgebra, OrderedAlgebra,
                      Report, _fail, check_interior, check_morphism, check_normal_interior,
                      find_isomorphism, subalgebra, validate)
from .completion import _le4
from .constructions import with_lattice_flag
from .order import FinitePoset


class InvalidTransformation(AlgebraError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotResiduated(AlgebraError):
    pass


class NotNormal(AlgebraError):
    def __init__(self, witness: tuple):
        super().__init__(f"normality equation fails at {witness}")
        self.witness = witness


def _require_commutative(A: OrderedAlgebra) -> None:
    r = validate(A, commutative=True)
    if not r:
        raise AlgebraError(f"not a commutative bimonoid: {r.describe(A.names)}")


def _res(A: OrderedAlgebra) -> np.ndarray:
    if not A.is_residuated():
        raise NotResiduated(f"{A.name or 'algebra'} is not residuated")
    return A.residual_table()


# ---------------------------------------------------------------- transformation pairs

def _solutions(A: OrderedAlgebra, a: int, b: int, R: np.ndarray | None = None) -> np.ndarray:
    """ok[x, y] iff a*~b = x+~y in the completion."""
    R = _le4(A) if R is None else R
    fwd = R[a, :, b, :].T                      # (x, y): a*y <= b+x
    Q = R[a, :, b, :]                          # (q, p): a*q <= b+p
    # G[u, v]: every (q, p) with a*q <= b+p has u*q <= v+p
    G = (~Q[None, :, None, :] | R).all(axis=(1, 3))
    # rev[x, y]: u*y <= v+x implies G[u, v]
    rev = (~R | G[:, None, :, None]).all(axis=(0, 2)).T
    return fwd & rev


def check_transformation_pair(A: OrderedAlgebra, a: int, b: int, x: int, y: int) -> bool:
    """Decide a*~b = x+~y by the first-order criterion on A."""
    R = _le4(A)
    if not R[a, y, b, x]:
        return False
    P = R[:, y, :, x]                          # (u, v)
    Q = R[a, :, b, :]                          # (q, p)
    ok = not bool((P[:, None, :, None] & Q[None, :, None, :] & ~R).any())
    if A.mul is not None and A.is_residuated():
        res = A.residual_table()
        S = A.add
        p = np.arange(A.n)[:, None]
        q = np.arange(A.n)[None, :]
        alt = bool(A.leq[A.mul[res[a, S[b, p]], res[y, S[x, q]]], S[p, q]].all())
        if alt != ok:
            raise AlgebraError("residuated and first-order criteria disagree")
    return ok


@dataclass
class TransformationTable:
    """alpha, beta with a*~b = alpha(a,b) + ~beta(a,b)."""

    alpha: np.ndarray
    beta: np.ndarray

    def __call__(self, a: int, b: int) -> tuple[int, int]:
        return int(self.alpha[a, b]), int(self.beta[a, b])

    def verify(self, A: OrderedAlgebra) -> Report:
        R = _le4(A)
        for a, b in product(range(A.n), repeat=2):
            if not _solutions(A, a, b, R)[self.alpha[a, b], self.beta[a, b]]:
                return _fail("transformation", (a, b))
        return PASS


def _candidates(A: OrderedAlgebra, a: int, b: int):
    n = A.n
    seen = set()
    order = []
    if A.is_residuated():
        res = A.residual_table()
        order.append((int(A.mul[A.zero, a]), int(res[a, A.mul[a, b]])))
        order += [(x, int(res[a, A.add[b, x]])) for x in range(n)]
    order += list(product(range(n), repeat=2))
    for c in order:
        if c not in seen:
            seen.add(c)
            yield c


def _search_rows(A: OrderedAlgebra, rows: Sequence[int]):
    R = _le4(A)
    out = []
    for a in rows:
        for b in range(A.n):
            ok = _solutions(A, a, b, R)
            hit = next((c for c in _candidates(A, a, b) if ok[c]), None)
            out.append((a, b, hit))
    return out


def find_transformation(A: OrderedAlgebra, jobs: int = 1) -> TransformationTable | None:
    """First solution per pair, or None if some a*~b is not of the form x+~y.

    Candidates are tried in a fixed order: (0a, a->ab), then (x, a->(b+x)) for
    each x when residuals exist, then all pairs lexicographically.
    """
    _require_commutative(A)
    n = A.n
    if jobs > 1 and n > 1:
        chunks = [list(range(i, n, jobs)) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_search_rows, [A] * len(chunks), chunks))
        found = [t for part in parts for t in part]
    else:
        found = _search_rows(A, range(n))
    alpha = np.zeros((n, n), dtype=np.int64)
    beta = np.zeros((n, n), dtype=np.int64)
    for a, b, hit in found:
        if hit is None:
            return None
        alpha[a, b], beta[a, b] = hit
    return TransformationTable(alpha, beta)


def missing_transformation(A: OrderedAlgebra) -> tuple[int, int] | None:
    """First (a, b) for which a*~b has no additive form."""
    R = _le4(A)
    for a, b in product(range(A.n), repeat=2):
        if not _solutions(A, a, b, R).any():
            return a, b
    return None


# ---------------------------------------------------------------- results

@dataclass
class FractionsResult:
    algebra: InvolutiveAlgebra
    embed: tuple[int, ...]
    pairs: list[tuple[int, int]]
    table: TransformationTable
    source: OrderedAlgebra
    interior: InteriorOperator | None = None
    normal: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.algebra.n

    def index(self, a, b) -> int:
        A = self.source
        return self.pairs.index((A.element(a), A.element(b)))

    def pair(self, i: int) -> tuple[str, str]:
        a, b = self.pairs[i]
        return self.source.label(a), self.source.label(b)


def _pair_names(A: OrderedAlgebra, pairs) -> list[str]:
    return [f"{A.label(a)}|{A.label(b)}" for a, b in pairs]


# ---------------------------------------------------------------- quotient construction

def fractions_quotient(A: OrderedAlgebra, t: TransformationTable | None = None) -> FractionsResult:
    """Quotient of A x A under the preorder of products a*~b."""
    _require_commutative(A)
    if t is None:
        t = find_transformation(A)
        if t is None:
            raise InvalidTransformation("no transformation functions exist", missing_transformation(A))
    r = t.verify(A)
    if not r:
        raise InvalidTransformation("table does not solve a*~b = x+~y", r.witness)
    n = A.n
    M, S, al, be = A.mul, A.add, t.alpha, t.beta
    R = _le4(A)
    # pre[(a,b),(c,d)] iff for all x, y: x*c <= y+d implies x*a <= y+b
    T = R.transpose(1, 3, 0, 2)                                # T[a, b, x, y] = x*a <= y+b
    pre = np.empty((n, n, n, n), dtype=bool)
    for c, d in product(range(n), repeat=2):
        pre[:, :, c, d] = (~T[c, d][None, None] | T).all(axis=(2, 3))
    pre = pre.reshape(n * n, n * n)
    cls = np.full(n * n, -1, dtype=np.int64)
    reps: list[int] = []
    for i in range(n * n):
        if cls[i] < 0:
            same = np.flatnonzero(pre[i] & pre[:, i])
            cls[same] = len(reps)
            reps.append(i)
    pairs = [divmod(i, n) for i in reps]
    k = len(reps)

    def cl(a, b):
        return int(cls[a * n + b])

    mul = np.empty((k, k), dtype=np.int64)
    add = np.empty((k, k), dtype=np.int64)
    for (i, (a, b)), (j, (c, d)) in product(enumerate(pairs), repeat=2):
        mul[i, j] = cl(M[a, c], S[b, d])
        e = M[be[a, b], be[c, d]]
        f = S[al[a, b], al[c, d]]
        add[i, j] = cl(be[e, f], al[e, f])
    comp = [cl(be[a, b], al[a, b]) for a, b in pairs]
    # the operations must respect theta
    for (a, b), (c, d) in product(product(range(n), repeat=2), repeat=2):
        if cl(M[a, c], S[b, d]) != mul[cl(a, b), cl(c, d)]:
            raise InvalidTransformation("theta is not a congruence for mul", (a, b, c, d))
    leq = pre[np.ix_(reps, reps)]
    poset = FinitePoset(leq, _pair_names(A, pairs))
    alg = InvolutiveAlgebra(poset, mul, cl(A.one, A.zero), add, cl(A.zero, A.zero), comp,
                            name=f"{A.name}^frac" if A.name else "fractions")
    alg = with_lattice_flag(alg)
    embed = tuple(cl(a, A.zero) for a in range(n))
    res = FractionsResult(alg, embed, pairs, t, A)
    if A.is_residuated():
        rt = A.residual_table()
        sigma = tuple(embed[rt[be[a, b], al[a, b]]] for a, b in pairs)
        res.interior = InteriorOperator(alg, sigma)
    else:
        res.notes.append("sigma skipped: A is not residuated")
    return res


def check_fractions(res: FractionsResult) -> dict[str, Report]:
    """Validation of a fractions construction against its source."""
    C, A, e = res.algebra, res.source, np.asarray(res.embed)
    out = {"involutive": validate(C, commutative=True),
           "embedding": check_morphism(e, A, C, embedding=True)}
    prods = set(C.mul[e[:, None], C.comp[e][None, :]].ravel().tolist())
    sums = set(C.add[e[:, None], C.comp[e][None, :]].ravel().tolist())
    missing = sorted(set(range(C.n)) - prods)
    out["products-cover"] = PASS if not missing else _fail("products-cover", (missing[0],))
    missing = sorted(set(range(C.n)) - sums)
    out["sums-cover"] = PASS if not missing else _fail("sums-cover", (missing[0],))
    if res.interior is not None:
        io = res.interior
        out["interior"] = check_interior(io)
        img = sorted(set(io.sigma))
        out["sigma-image"] = PASS if img == sorted(set(e.tolist())) else _fail("sigma-image", ())
        s = np.asarray(io.sigma)
        w = np.argwhere(~C.leq[C.mul[s[:, None], s[None, :]], s[C.mul]])
        out["conucleus"] = PASS if not w.size else _fail("conucleus", tuple(w[0]))
    return out


# ---------------------------------------------------------------- normal pairs

def pi(A: OrderedAlgebra, t: TransformationTable, a: int, b: int) -> tuple[int, int]:
    """Normal representation <beta -> alpha, a -> b> of a*~b."""
    res = _res(A)
    x, y = t(a, b)
    return int(res[y, x]), int(res[a, b])


def pi_table(A: OrderedAlgebra, t: TransformationTable) -> list[list[tuple[int, int]]]:
    return [[pi(A, t, a, b) for b in range(A.n)] for a in range(A.n)]


def check_normal(A: OrderedAlgebra, t: TransformationTable) -> Report:
    """a->(b+x) = (beta->alpha)->((a->b)+x) for all a, b, x."""
    res = _res(A)
    S = A.add
    n = A.n
    a = np.arange(n)[:, None, None]
    b = np.arange(n)[None, :, None]
    x = np.arange(n)[None, None, :]
    lhs = res[a, S[b, x]]
    rhs = res[res[t.beta[a, b], t.alpha[a, b]], S[res[a, b], x]]
    hits = np.argwhere(lhs != rhs)
    if hits.size:
        return _fail("normal", tuple(hits[0]))
    return PASS


def sigma_div(res: FractionsResult, x: int) -> int:
    if res.interior is None:
        raise NotResiduated("no interior operator attached")
    return res.interior(x)


def fractions_normal(A: OrderedAlgebra, t: TransformationTable | None = None) -> FractionsResult:
    """Algebra on the normal pairs, ordered by a <= c and d <= b."""
    _require_commutative(A)
    if t is None:
        t = find_transformation(A)
        if t is None:
            raise InvalidTransformation("no transformation functions exist", missing_transformation(A))
    r = t.verify(A)
    if not r:
        raise InvalidTransformation("table does not solve a*~b = x+~y", r.witness)
    r = check_normal(A, t)
    if not r:
        raise NotNormal(r.witness)
    n = A.n
    M, S, leq = A.mul, A.add, A.leq
    P = pi_table(A, t)
    pairs = sorted({P[a][b] for a in range(n) for b in range(n)})
    pos = {p: i for i, p in enumerate(pairs)}
    k = len(pairs)

    def p(a, b):
        return pos[P[a][b]]

    def swap(i):
        a, b = pairs[i]
        return pos[(b, a)]

    order = np.array([[leq[a, c] and leq[d, b] for (c, d) in pairs] for (a, b) in pairs])
    mul = np.empty((k, k), dtype=np.int64)
    add = np.empty((k, k), dtype=np.int64)
    for (i, (a, b)), (j, (c, d)) in product(enumerate(pairs), repeat=2):
        mul[i, j] = p(M[a, c], S[b, d])
        add[i, j] = swap(p(M[b, d], S[a, c]))
    comp = [swap(i) for i in range(k)]
    poset = FinitePoset(order, _pair_names(A, pairs))
    alg = InvolutiveAlgebra(poset, mul, p(A.one, A.zero), add, p(A.zero, A.zero), comp,
                            name=f"{A.name}^frac" if A.name else "fractions")
    alg = with_lattice_flag(alg)
    embed = tuple(p(a, A.zero) for a in range(n))
    sigma = tuple(embed[a] for a, _ in pairs)
    return FractionsResult(alg, embed, pairs, t, A, InteriorOperator(alg, sigma), normal=True)


def lattice_ops_via_pi(res: FractionsResult) -> tuple[np.ndarray, np.ndarray]:
    """Join pi<a v c, b ^ d> and meet comp pi<b v d, a ^ c> on normal pairs."""
    A, t = res.source, res.table
    J, Mt = A.join_table, A.meet_table
    pos = {q: i for i, q in enumerate(res.pairs)}
    k = len(res.pairs)
    jn = np.empty((k, k), dtype=np.int64)
    mt = np.empty((k, k), dtype=np.int64)
    for (i, (a, b)), (j, (c, d)) in product(enumerate(res.pairs), repeat=2):
        jn[i, j] = pos[pi(A, t, J[a, c], Mt[b, d])]
        x, y = pi(A, t, J[b, d], Mt[a, c])
        mt[i, j] = pos[(y, x)]
    return jn, mt


# ---------------------------------------------------------------- round trips

@dataclass
class RoundtripReport:
    checks: dict[str, Report]
    unit: tuple[int, ...] | None = None
    counit: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> dict[str, Report]:
        return {k: v for k, v in self.checks.items() if not v}


def sigma_image(io: InteriorOperator) -> tuple[OrderedAlgebra, list[int]]:
    """The bimonoid on the image of sigma."""
    return subalgebra(io.algebra.base, io.image(), name="Sigma")


def roundtrip_from_algebra(A: OrderedAlgebra, t: TransformationTable | None = None) -> RoundtripReport:
    """A is recovered from its fractions as the sigma-image, via a -> pi<a,0>."""
    F = fractions_normal(A, t)
    io = F.interior
    checks = {"normal-interior": check_normal_interior(io)}
    sub, keep = sigma_image(io)
    pos = {e: i for i, e in enumerate(keep)}
    unit = tuple(pos.get(e, -1) for e in F.embed)
    ok = -1 not in unit and sorted(unit) == list(range(sub.n))
    checks["unit-bijective"] = PASS if ok else _fail("unit-bijective", ())
    checks["unit-iso"] = check_morphism(unit, A, sub, embedding=True) if ok else _fail("unit-iso", ())
    return RoundtripReport(checks, unit=unit)


def roundtrip_from_pair(io: InteriorOperator) -> RoundtripReport:
    """(B, sigma) is recovered from the fractions of its sigma-image, via <a,b> -> a*~b."""
    B = io.algebra
    checks = {"normal-interior": check_normal_interior(io)}
    if not checks["normal-interior"]:
        return RoundtripReport(checks)
    sub, keep = sigma_image(io)
    F = fractions_normal(sub)
    counit = tuple(int(B.mul[keep[a], B.comp[keep[b]]]) for a, b in F.pairs)
    checks["counit-iso"] = check_morphism(counit, F.algebra, B, embedding=True)
    onto = sorted(set(counit)) == list(range(B.n))
    checks["counit-onto"] = PASS if onto else _fail("counit-onto", ())
    s = np.asarray(io.sigma)
    bad = [i for i in range(F.size) if counit[F.interior(i)] != s[counit[i]]]
    checks["counit-sigma"] = PASS if not bad else _fail("counit-sigma", (bad[0],))
    return RoundtripReport(checks, counit=counit)


def fractions_morphism(F1: FractionsResult, F2: FractionsResult, h: Sequence[int]) -> tuple[tuple[int, ...], Report]:
    """The induced map <a,b> -> pi<h(a), h(b)> and whether it is a morphism commuting with sigma."""
    A2, t2 = F2.source, F2.table
    pos = {q: i for i, q in enumerate(F2.pairs)}
    f = tuple(pos[pi(A2, t2, h[a], h[b])] for a, b in F1.pairs)
    r = check_morphism(f, F1.algebra, F2.algebra)
    if r:
        bad = [i for i in range(F1.size) if f[F1.interior(i)] != F2.interior(f[i])]
        if bad:
            r = _fail("commutes-with-sigma", (bad[0],))
    return f, r


def roundtrip_checks(obj, t: TransformationTable | None = None) -> RoundtripReport:
    if isinstance(obj, InteriorOperator):
        return roundtrip_from_pair(obj)
    return roundtrip_from_algebra(obj, t)


def isomorphic_fixing(F1: FractionsResult, F2: FractionsResult) -> tuple[int, ...] | None:
    """An isomorphism F1 -> F2 that commutes with the two embeddings."""
    fixed = {F1.embed[a]: F2.embed[a] for a in range(F1.source.n)}
    return find_isomorphism(F1.algebra, F2.algebra, fixed)
