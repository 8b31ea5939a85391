"""Involutive frames, their Galois algebras, and complemented DM completions.

Subsets of L (and R) are stored as Python ints used as bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .algebra import (PASS, AlgebraError, InvolutiveAlgebra, OrderedAlgebra, Report,
                      _fail, _first, all_subsets, check_morphism, is_admissible_join,
                      validate)
from .order import FinitePoset

DEFAULT_CAP = 20_000


class FrameAxiomViolation(AlgebraError):
    def __init__(self, report: Report):
        super().__init__(f"frame axiom {report.axiom} fails at {report.witness}")
        self.report = report


class SizeCap(AlgebraError):
    def __init__(self, limit: int):
        super().__init__(f"more than {limit} closed sets")
        self.limit = limit


class IncompatibleFIAlpha(AlgebraError):
    pass


# ---------------------------------------------------------------- bitsets

def bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << int(i)
    return m


@dataclass(frozen=True)
class ClosedSet:
    """A Galois-closed subset of L."""

    bits: int

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __iter__(self):
        return iter(bits_of(self.bits))

    def __len__(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def __le__(self, other: "ClosedSet") -> bool:
        return self.bits & ~other.bits == 0


def _popcount(m: int) -> int:
    return bin(m).count("1")


# ---------------------------------------------------------------- frames

@dataclass
class GaloisFrame:
    """Commutative involutive frame, optionally with maps from an algebra A.

    ``lo`` is l_o = r_o : L -> R and ``lp`` is l_+ = r_+ : R -> L.
    """

    circ: np.ndarray
    one_c: int
    oplus: np.ndarray
    zero_p: int
    sq: np.ndarray
    lo: np.ndarray
    lp: np.ndarray
    lam: np.ndarray | None = None
    rho: np.ndarray | None = None
    algebra: OrderedAlgebra | None = None
    L_labels: list[str] = field(default_factory=list)
    R_labels: list[str] = field(default_factory=list)
    with_units: bool = True

    @property
    def nL(self) -> int:
        return self.sq.shape[0]

    @property
    def nR(self) -> int:
        return self.sq.shape[1]

    def down_masks(self) -> list[int]:
        """For each y in R the set y^< as a bitset over L."""
        return [mask_of(np.flatnonzero(self.sq[:, y])) for y in range(self.nR)]

    def up_masks(self) -> list[int]:
        return [mask_of(np.flatnonzero(self.sq[x])) for x in range(self.nL)]

    def quotient(self) -> tuple["GaloisFrame", np.ndarray, np.ndarray]:
        """Identify elements with equal rows (L) or columns (R)."""
        lmap, lreps = _classes(self.sq)
        rmap, rreps = _classes(self.sq.T)
        circ = lmap[self.circ[np.ix_(lreps, lreps)]]
        oplus = rmap[self.oplus[np.ix_(rreps, rreps)]]
        q = GaloisFrame(
            circ=circ, one_c=int(lmap[self.one_c]), oplus=oplus, zero_p=int(rmap[self.zero_p]),
            sq=self.sq[np.ix_(lreps, rreps)], lo=rmap[self.lo[lreps]], lp=lmap[self.lp[rreps]],
            lam=None if self.lam is None else lmap[self.lam],
            rho=None if self.rho is None else rmap[self.rho],
            algebra=self.algebra,
            L_labels=[self.L_labels[i] for i in lreps] if self.L_labels else [],
            R_labels=[self.R_labels[i] for i in rreps] if self.R_labels else [],
            with_units=self.with_units)
        return q, lmap, rmap


def _classes(rows: np.ndarray) -> tuple[np.ndarray, list[int]]:
    seen: dict[bytes, int] = {}
    cls = np.empty(rows.shape[0], dtype=np.int64)
    reps = []
    for i in range(rows.shape[0]):
        key = rows[i].tobytes()
        if key not in seen:
            seen[key] = len(reps)
            reps.append(i)
        cls[i] = seen[key]
    return cls, reps


def check_frame(frame: GaloisFrame) -> Report:
    """Monoid laws, nuclearity, Identity, Cut and the Gentzen conditions."""
    c, o, sq, lo, lp = frame.circ, frame.oplus, frame.sq, frame.lo, frame.lp
    for t, u, label in ((c, frame.one_c, "L"), (o, frame.zero_p, "R")):
        k = t.shape[0]
        idx = np.arange(k)
        w = _first(t[t[:, :, None], idx[None, None, :]] != t[idx[:, None, None], t[None, :, :]])
        if w:
            return _fail(f"{label}-associativity", w)
        w = _first(t != t.T)
        if w:
            return _fail(f"{label}-commutativity", w)
        bad = np.flatnonzero(t[u] != idx)
        if bad.size:
            return _fail(f"{label}-unit", (int(bad[0]),))
    x = np.arange(frame.nL)[:, None, None]
    y = np.arange(frame.nL)[None, :, None]
    z = np.arange(frame.nR)[None, None, :]
    a1 = sq[c[x, y], z]
    w = _first(a1 != sq[y, o[lo[x], z]])
    if w:
        return _fail("nuclearity", w, "x o y [= z iff y [= r(x) + z")
    w = _first(a1 != sq[x, o[z, lo[y]]])
    if w:
        return _fail("nuclearity", w, "x o y [= z iff x [= z + l(y)")
    x = np.arange(frame.nL)[:, None, None]
    y = np.arange(frame.nR)[None, :, None]
    z = np.arange(frame.nR)[None, None, :]
    a2 = sq[x, o[y, z]]
    w = _first(a2 != sq[c[x, lp[z]], y])
    if w:
        return _fail("nuclearity", w, "x [= y + z iff x o r(z) [= y")
    w = _first(a2 != sq[c[lp[y], x], z])
    if w:
        return _fail("nuclearity", w, "x [= y + z iff l(y) o x [= z")
    if frame.algebra is not None:
        return check_gentzen(frame)
    return PASS


def check_gentzen(frame: GaloisFrame) -> Report:
    A = frame.algebra
    sq, c, o, lam, rho = frame.sq, frame.circ, frame.oplus, frame.lam, frame.rho
    n = A.n
    ia = np.arange(n)
    bad = np.flatnonzero(~sq[lam, rho])
    if bad.size:
        return _fail("identity", (int(bad[0]),))
    # cut: x [= rho(a) and lam(a) [= y imply x [= y ; witness (x, a, y)
    cut = sq[:, rho][:, :, None] & sq[lam, :][None, :, :] & ~sq[:, None, :]
    w = _first(cut)
    if w:
        return _fail("cut", w)
    if frame.with_units and A.one is not None and A.zero is not None:
        if not sq[frame.one_c, rho[A.one]]:
            return _fail("gentzen-1-right", ())
        bad = np.flatnonzero(sq[frame.one_c] & ~sq[lam[A.one]])
        if bad.size:
            return _fail("gentzen-1-left", (int(bad[0]),))
        bad = np.flatnonzero(sq[:, frame.zero_p] & ~sq[:, rho[A.zero]])
        if bad.size:
            return _fail("gentzen-0-right", (int(bad[0]),))
        if not sq[lam[A.zero], frame.zero_p]:
            return _fail("gentzen-0-left", ())
    a = ia[:, None, None, None]
    b = ia[None, :, None, None]
    if A.add is not None:
        u = np.arange(frame.nR)[None, None, :, None]
        v = np.arange(frame.nR)[None, None, None, :]
        w = _first(sq[lam[a], u] & sq[lam[b], v] & ~sq[lam[A.add[a, b]], o[u, v]])
        if w:
            return _fail("gentzen-add-left", w)
        xs = np.arange(frame.nL)[None, None, :]
        w = _first(sq[xs, o[rho[ia[:, None, None]], rho[ia[None, :, None]]]]
                   & ~sq[xs, rho[A.add[ia[:, None, None], ia[None, :, None]]]])
        if w:
            return _fail("gentzen-add-right", w)
    if A.mul is not None:
        u = np.arange(frame.nL)[None, None, :, None]
        v = np.arange(frame.nL)[None, None, None, :]
        w = _first(sq[u, rho[a]] & sq[v, rho[b]] & ~sq[c[u, v], rho[A.mul[a, b]]])
        if w:
            return _fail("gentzen-mul-right", w)
        ys = np.arange(frame.nR)[None, None, :]
        w = _first(sq[c[lam[ia[:, None, None]], lam[ia[None, :, None]]], ys]
                   & ~sq[lam[A.mul[ia[:, None, None], ia[None, :, None]]], ys])
        if w:
            return _fail("gentzen-mul-left", w)
    if A.lattice:
        jn, mt = A.join_table, A.meet_table
        a3 = ia[:, None, None]
        b3 = ia[None, :, None]
        ys = np.arange(frame.nR)[None, None, :]
        xs = np.arange(frame.nL)[None, None, :]
        checks = [
            ("gentzen-join-left", sq[lam[a3], ys] & sq[lam[b3], ys] & ~sq[lam[jn[a3, b3]], ys]),
            ("gentzen-meet-right", sq[xs, rho[a3]] & sq[xs, rho[b3]] & ~sq[xs, rho[mt[a3, b3]]]),
            ("gentzen-meet-left", sq[lam[a3], ys] & ~sq[lam[mt[a3, b3]], ys]),
            ("gentzen-meet-left", sq[lam[b3], ys] & ~sq[lam[mt[a3, b3]], ys]),
            ("gentzen-join-right", sq[xs, rho[a3]] & ~sq[xs, rho[jn[a3, b3]]]),
            ("gentzen-join-right", sq[xs, rho[b3]] & ~sq[xs, rho[jn[a3, b3]]]),
        ]
        for name, viol in checks:
            w = _first(viol)
            if w:
                return _fail(name, w)
    return PASS


def is_faithful(frame: GaloisFrame) -> bool:
    A = frame.algebra
    return bool((~frame.sq[frame.lam[:, None], frame.rho[None, :]] | A.leq).all())


# ---------------------------------------------------------------- W(A)

def _pair_labels(A: OrderedAlgebra) -> list[str]:
    return [f"<{A.label(a)},{A.label(b)}>" for a in range(A.n) for b in range(A.n)]


def frame_of_bimonoid(A: OrderedAlgebra, check: bool = True) -> GaloisFrame:
    """The frame W(A) on L = R = A x A with <a,b> [= <c,d> iff a*d <= b+c."""
    if not A.is_bimonoid or not A.is_commutative:
        raise AlgebraError("W(A) needs a commutative bimonoid")
    n = A.n
    M, S, leq = A.mul, A.add, A.leq
    a = np.arange(n)[:, None, None, None]
    b = np.arange(n)[None, :, None, None]
    c = np.arange(n)[None, None, :, None]
    d = np.arange(n)[None, None, None, :]
    N = n * n
    circ = (M[a, c] * n + S[b, d]).reshape(N, N)
    oplus = (S[a, c] * n + M[b, d]).reshape(N, N)
    sq = leq[M[a, d], S[b, c]].reshape(N, N)
    swap = (np.arange(n)[None, :] * n + np.arange(n)[:, None]).reshape(N)
    ia = np.arange(n)
    frame = GaloisFrame(circ=circ, one_c=A.one * n + A.zero, oplus=oplus, zero_p=A.zero * n + A.one,
                        sq=sq, lo=swap, lp=swap, lam=ia * n + A.zero, rho=ia * n + A.one,
                        algebra=A, L_labels=_pair_labels(A), R_labels=_pair_labels(A))
    if check:
        r = check_frame(frame)
        if not r:
            raise FrameAxiomViolation(r)
    return frame


# ---------------------------------------------------------------- closures

def closure_right(frame: GaloisFrame, X: Iterable[int]) -> ClosedSet:
    """X^>< for X a subset of L."""
    xs = list(X)
    if xs:
        ys = np.flatnonzero(frame.sq[xs].all(axis=0))
    else:
        ys = np.arange(frame.nR)
    if ys.size:
        xs2 = np.flatnonzero(frame.sq[:, ys].all(axis=1))
    else:
        xs2 = np.arange(frame.nL)
    return ClosedSet(mask_of(xs2))


def closure_left(frame: GaloisFrame, Y: Iterable[int]) -> frozenset[int]:
    """Y^<> for Y a subset of R."""
    ys = list(Y)
    xs = np.flatnonzero(frame.sq[:, ys].all(axis=1)) if ys else np.arange(frame.nL)
    out = np.flatnonzero(frame.sq[xs].all(axis=0)) if xs.size else np.arange(frame.nR)
    return frozenset(int(v) for v in out)


def polar_right(frame: GaloisFrame, X: Iterable[int]) -> frozenset[int]:
    xs = list(X)
    ys = np.flatnonzero(frame.sq[xs].all(axis=0)) if xs else np.arange(frame.nR)
    return frozenset(int(v) for v in ys)


def polar_left(frame: GaloisFrame, Y: Iterable[int]) -> frozenset[int]:
    ys = list(Y)
    xs = np.flatnonzero(frame.sq[:, ys].all(axis=1)) if ys else np.arange(frame.nL)
    return frozenset(int(v) for v in xs)


def enumerate_closed_sets(frame: GaloisFrame, cap: int = DEFAULT_CAP) -> list[int]:
    """All intersections of principal sets y^<, plus L, ordered by size then value."""
    full = (1 << frame.nL) - 1
    principals = sorted(set(frame.down_masks()))
    seen = {full}
    stack = [full]
    while stack:
        X = stack.pop()
        for P in principals:
            Y = X & P
            if Y not in seen:
                seen.add(Y)
                if len(seen) > cap:
                    raise SizeCap(cap)
                stack.append(Y)
    return sorted(seen, key=lambda m: (_popcount(m), m))


# ---------------------------------------------------------------- Galois algebra

@dataclass
class CompletionResult:
    algebra: InvolutiveAlgebra
    embed: tuple[int, ...] | None
    masks: list[int]
    frame: GaloisFrame
    gen_index: list[tuple[tuple[int, int], ...]] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    checks: dict[str, Report] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.algebra.n

    def element_of(self, mask: int) -> int:
        return self.masks.index(mask)

    def closed_set(self, i: int) -> ClosedSet:
        return ClosedSet(self.masks[i])


class _Galois:
    """Operations on closed subsets of a (small) frame."""

    def __init__(self, frame: GaloisFrame):
        self.f = frame
        self.fullL = (1 << frame.nL) - 1
        self.fullR = (1 << frame.nR) - 1
        self.down = frame.down_masks()
        self.up = frame.up_masks()
        self.cl_point = [self.close(1 << x) for x in range(frame.nL)]
        self.rcl_point = [self.rclose(1 << y) for y in range(frame.nR)]

    def right(self, X: int) -> int:
        m = self.fullR
        for x in bits_of(X):
            m &= self.up[x]
        return m

    def left(self, Y: int) -> int:
        m = self.fullL
        for y in bits_of(Y):
            m &= self.down[y]
        return m

    def close(self, X: int) -> int:
        return self.left(self.right(X))

    def rclose(self, Y: int) -> int:
        return self.right(self.left(Y))

    def lgens(self, X: int) -> list[int]:
        """Members of X whose point closures are maximal; they generate X."""
        pcs = {}
        for x in bits_of(X):
            pcs.setdefault(self.cl_point[x], x)
        vals = list(pcs)
        return [pcs[v] for v in vals if not any(v != w and v & ~w == 0 for w in vals)]

    def rgens(self, Y: int) -> list[int]:
        pcs = {}
        for y in bits_of(Y):
            pcs.setdefault(self.rcl_point[y], y)
        vals = list(pcs)
        return [pcs[v] for v in vals if not any(v != w and v & ~w == 0 for w in vals)]

    def mul(self, X: int, Y: int) -> int:
        c = self.f.circ
        m = self.fullR
        for x in self.lgens(X):
            for y in self.lgens(Y):
                m &= self.up[c[x, y]]
        return self.left(m)

    def add(self, X: int, Y: int) -> int:
        o = self.f.oplus
        m = self.fullL
        for u in self.rgens(self.right(X)):
            for v in self.rgens(self.right(Y)):
                m &= self.down[o[u, v]]
        return m

    def comp(self, X: int) -> int:
        m = self.fullL
        for x in bits_of(X):
            m &= self.down[self.f.lo[x]]
        return m


def galois_algebra(frame: GaloisFrame, *, quotient: bool = True, cap: int = DEFAULT_CAP,
                   check: bool = False) -> CompletionResult:
    """Closed subsets of L with the induced involutive lattice structure."""
    if check:
        r = check_frame(frame)
        if not r:
            raise FrameAxiomViolation(r)
    work = frame.quotient()[0] if quotient else frame
    masks = enumerate_closed_sets(work, cap)
    pos = {m: i for i, m in enumerate(masks)}
    g = _Galois(work)
    k = len(masks)
    leq = np.array([[X & ~Y == 0 for Y in masks] for X in masks], dtype=bool)
    mul = np.empty((k, k), dtype=np.int64)
    add = np.empty((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            mul[i, j] = mul[j, i] = pos[g.mul(masks[i], masks[j])]
            add[i, j] = add[j, i] = pos[g.add(masks[i], masks[j])]
    comp = [pos[g.comp(X)] for X in masks]
    one = pos[g.close(1 << work.one_c)]
    zero = pos[g.down[work.zero_p]]
    names = [f"X{i}" for i in range(k)]
    alg = InvolutiveAlgebra(FinitePoset(leq, names, _checked=True), mul, one, add, zero, comp,
                            lattice=True, name="galois")
    embed = None
    if work.rho is not None:
        embed = tuple(pos[g.down[r]] for r in work.rho)
    return CompletionResult(algebra=alg, embed=embed, masks=masks, frame=work)


# ---------------------------------------------------------------- labels and checks

def generator_values(res: CompletionResult, A: OrderedAlgebra, side: str = "mul") -> np.ndarray:
    """Element index of a*~b (side 'mul') or a+~b (side 'add') for all pairs."""
    C = res.algebra
    e = np.asarray(res.embed)
    t = C.mul if side == "mul" else C.add
    return t[e[:, None], C.comp[e][None, :]]


def _gen_label(A: OrderedAlgebra, a: int, b: int) -> tuple[int, str]:
    if b == A.zero:
        return 0, A.label(a)
    if a == A.one:
        return 1, "~" + A.label(b)
    return 2, f"{A.label(a)}*~{A.label(b)}"


def _attach_labels(res: CompletionResult, A: OrderedAlgebra) -> None:
    C = res.algebra
    gv = generator_values(res, A, "mul")
    best: dict[int, tuple] = {}
    for a, b in product(range(A.n), repeat=2):
        v = int(gv[a, b])
        rank, text = _gen_label(A, a, b)
        key = (rank, len(text), a, b)
        if v not in best or key < best[v][0]:
            best[v] = (key, text, (a, b))
    gen_vals = sorted(best)
    labels, gen_index = [], []
    for e in range(C.n):
        if e in best:
            labels.append(best[e][1])
            gen_index.append((best[e][2],))
            continue
        below = [v for v in gen_vals if C.leq[v, e]]
        maximal = [v for v in below if not any(w != v and C.leq[v, w] for w in below)]
        maximal.sort(key=lambda v: best[v][0])
        labels.append(" v ".join(best[v][1] for v in maximal) if maximal else "bot")
        gen_index.append(tuple(best[v][2] for v in maximal))
    res.labels = labels
    res.gen_index = gen_index
    C.poset = FinitePoset(C.leq, _unique(labels), _checked=True)


def _unique(labels: list[str]) -> list[str]:
    out, seen = [], {}
    for s in labels:
        k = seen.get(s, 0)
        out.append(s if k == 0 else f"{s}#{k}")
        seen[s] = k + 1
    return out


def verify_completion(res: CompletionResult, A: OrderedAlgebra) -> dict[str, Report]:
    C = res.algebra
    checks: dict[str, Report] = {}
    checks["involutive"] = validate(C, commutative=True)
    checks["complete"] = Report(C.poset.is_lattice(), None if C.poset.is_lattice() else "complete")
    checks["embedding"] = check_morphism(res.embed, A, C, embedding=True)
    for side, name, dense in (("mul", "join-density", "join_of"), ("add", "meet-density", "meet_of")):
        gv = generator_values(res, A, side)
        vals = set(int(v) for v in gv.ravel())
        r = PASS
        for e in range(C.n):
            if side == "mul":
                got = C.poset.join_of([v for v in vals if C.leq[v, e]])
            else:
                got = C.poset.meet_of([v for v in vals if C.leq[e, v]])
            if got != e:
                r = _fail(name, (e,))
                break
        checks[name] = r
    if A.lattice:
        e = np.asarray(res.embed)
        r = PASS
        for a, b in product(range(A.n), repeat=2):
            if e[A.join_table[a, b]] != C.join_table[e[a], e[b]]:
                r = _fail("embedding-preserves-join", (a, b))
                break
            if e[A.meet_table[a, b]] != C.meet_table[e[a], e[b]]:
                r = _fail("embedding-preserves-meet", (a, b))
                break
        checks["lattice-embedding"] = r
    return checks


def dm_completion(A: OrderedAlgebra, *, cap: int = DEFAULT_CAP, quotient: bool = True,
                  verify: bool = True) -> CompletionResult:
    """Commutative complemented DM completion as the Galois algebra of W(A)."""
    r = validate(A, commutative=True)
    if not r:
        raise AlgebraError(f"not a commutative bimonoid: {r.describe(A.names)}")
    frame = frame_of_bimonoid(A)
    res = galois_algebra(frame, quotient=quotient, cap=cap)
    res.frame = frame
    res.algebra.name = f"{A.name}^D" if A.name else "completion"
    _attach_labels(res, A)
    if verify:
        res.checks = verify_completion(res, A)
    return res


# ---------------------------------------------------------------- generator comparisons

def _le4(A: OrderedAlgebra) -> np.ndarray:
    """R[u, y, v, x] = (u*y <= v+x)."""
    n = A.n
    u = np.arange(n)[:, None, None, None]
    y = np.arange(n)[None, :, None, None]
    v = np.arange(n)[None, None, :, None]
    x = np.arange(n)[None, None, None, :]
    return A.leq[A.mul[u, y], A.add[v, x]]


def compare_generators(A: OrderedAlgebra, lhs: tuple[int, int, str], rhs: tuple[int, int, str],
                       _le=None) -> bool:
    """Decide lhs <= rhs in the completion, where a side is (a, b, 'mul'|'add')
    meaning a*~b or a+~b, without building the completion."""
    a, b, s1 = lhs
    c, d, s2 = rhs
    M, S, leq = A.mul, A.add, A.leq
    R = _le4(A) if _le is None else _le
    if s1 == "mul" and s2 == "add":
        return bool(leq[M[a, d], S[b, c]])
    if s1 == "mul" and s2 == "mul":
        # every meet generator y+~x above c*~d lies above a*~b
        return bool((~R[c, :, d, :] | R[a, :, b, :]).all())
    if s1 == "add" and s2 == "add":
        # every join generator x*~y below a+~b lies below c+~d
        return bool((~R[:, b, :, a] | R[:, d, :, c]).all())
    if s1 == "add" and s2 == "mul":
        # u*~v <= a+~b and c*~d <= y+~x imply u*~v <= y+~x
        P = R[:, b, :, a]          # (u, v): u*b <= v+a
        Q = R[c, :, d, :]          # (x, y): c*x <= d+y
        T = R                      # (u, x, v, y): u*x <= v+y
        viol = P[:, None, :, None] & Q[None, :, None, :] & ~T
        return not bool(viol.any())
    raise ValueError("sides must be 'mul' or 'add'")


# ---------------------------------------------------------------- bisemigroup completion

def frame_of_bisemigroup(A: OrderedAlgebra, F: Iterable[int] = (), I: Iterable[int] = (),
                         alpha: str = "-", check: bool = True) -> GaloisFrame:
    """Four-sorted frame over L = {1} u A u ~A u A*~A and R = {0} u A u ~A u A+~A."""
    if A.mul is None or A.add is None or not A.is_commutative:
        raise AlgebraError("needs a commutative bisemigroup")
    if alpha not in ("+", "-"):
        raise ValueError("alpha must be '+' or '-'")
    n = A.n
    F = sorted(set(int(f) for f in F))
    I = sorted(set(int(i) for i in I))
    M, S, leq = A.mul, A.add, A.leq
    for f in F:
        bad = [a for a in range(n) if not leq[a, M[a, f]]]
        if bad:
            raise IncompatibleFIAlpha(f"a <= a*f fails for f={A.label(f)}, a={A.label(bad[0])}")
    for i in I:
        bad = [a for a in range(n) if not leq[S[a, i], a]]
        if bad:
            raise IncompatibleFIAlpha(f"a+i <= a fails for i={A.label(i)}, a={A.label(bad[0])}")
    if set(F) & set(I) and alpha != "+":
        raise IncompatibleFIAlpha("F and I intersect, so alpha must be '+'")
    for f in F:
        if any(leq[f, g] and g not in F for g in range(n)):
            raise IncompatibleFIAlpha("F must be an upset")
    for i in I:
        if any(leq[g, i] and g not in I for g in range(n)):
            raise IncompatibleFIAlpha("I must be a downset")
    Fs, Is = set(F), set(I)
    plus = alpha == "+"

    # L: 0 -> 1, 1+a -> a, 1+n+b -> ~b, 1+2n+a*n+b -> a*~b ; R mirrors it
    N = 1 + 2 * n + n * n
    A_, NEG, PAIR = 1, 1 + n, 1 + 2 * n

    def kind(i):
        if i == 0:
            return ("u",)
        if i < NEG:
            return ("a", i - A_)
        if i < PAIR:
            return ("n", i - NEG)
        k = i - PAIR
        return ("p", k // n, k % n)

    def enc(kd):
        if kd[0] == "u":
            return 0
        if kd[0] == "a":
            return A_ + kd[1]
        if kd[0] == "n":
            return NEG + kd[1]
        return PAIR + kd[1] * n + kd[2]

    def combine(p, q, op_pos, op_neg):
        # product of (pos part, neg part) pairs; None marks an absent part
        pa, pb = p
        qa, qb = q
        a = pa if qa is None else qa if pa is None else int(op_pos[pa, qa])
        b = pb if qb is None else qb if pb is None else int(op_neg[pb, qb])
        if a is None and b is None:
            return ("u",)
        if b is None:
            return ("a", a)
        if a is None:
            return ("n", b)
        return ("p", a, b)

    def parts(kd):
        if kd[0] == "u":
            return (None, None)
        if kd[0] == "a":
            return (kd[1], None)
        if kd[0] == "n":
            return (None, kd[1])
        return (kd[1], kd[2])

    kinds = [kind(i) for i in range(N)]
    circ = np.empty((N, N), dtype=np.int64)
    oplus = np.empty((N, N), dtype=np.int64)
    for i, j in product(range(N), repeat=2):
        circ[i, j] = enc(combine(parts(kinds[i]), parts(kinds[j]), M, S))
        oplus[i, j] = enc(combine(parts(kinds[i]), parts(kinds[j]), S, M))

    def swap(kd):
        pa, pb = parts(kd)
        if pa is None and pb is None:
            return ("u",)
        return combine((pb, None), (None, pa), M, M)

    lo = np.array([enc(swap(k)) for k in kinds])
    lp = lo.copy()

    sq = np.zeros((N, N), dtype=bool)
    for i, j in product(range(N), repeat=2):
        li, rj = kinds[i], kinds[j]
        sq[i, j] = _bisemi_sq(li, rj, Fs, Is, plus, M, S, leq)
    ia = np.arange(n)
    labels_L = ["1"] + [A.label(a) for a in range(n)] + [f"~{A.label(b)}" for b in range(n)] + \
        [f"{A.label(a)}*~{A.label(b)}" for a in range(n) for b in range(n)]
    labels_R = ["0"] + [A.label(a) for a in range(n)] + [f"~{A.label(b)}" for b in range(n)] + \
        [f"{A.label(a)}+~{A.label(b)}" for a in range(n) for b in range(n)]
    frame = GaloisFrame(circ=circ, one_c=0, oplus=oplus, zero_p=0, sq=sq, lo=lo, lp=lp,
                        lam=A_ + ia, rho=A_ + ia, algebra=A, L_labels=labels_L,
                        R_labels=labels_R, with_units=False)
    if check:
        r = check_frame(frame)
        if not r:
            raise FrameAxiomViolation(r)
    return frame


def _bisemi_sq(li, rj, F, I, plus, M, S, leq) -> bool:
    """The relation [= between the four L-sorts and the four R-sorts."""
    lk, rk = li[0], rj[0]
    if lk == "u":
        if rk == "u":
            return plus
        if rk == "a":
            return rj[1] in F
        if rk == "n":
            return rj[1] in I
        c, d = rj[1], rj[2]
        return bool(leq[d, c])
    if lk == "a":
        a = li[1]
        if rk == "u":
            return a in I
        if rk == "a":
            return bool(leq[a, rj[1]])
        if rk == "n":
            return int(M[a, rj[1]]) in I
        c, d = rj[1], rj[2]
        return bool(leq[M[a, d], c])
    if lk == "n":
        b = li[1]
        if rk == "u":
            return b in F
        if rk == "a":
            return int(S[b, rj[1]]) in F
        if rk == "n":
            return bool(leq[rj[1], b])
        c, d = rj[1], rj[2]
        return bool(leq[d, S[b, c]])
    a, b = li[1], li[2]
    if rk == "u":
        return bool(leq[a, b])
    if rk == "a":
        return bool(leq[a, S[b, rj[1]]])
    if rk == "n":
        return bool(leq[M[a, rj[1]], b])
    c, d = rj[1], rj[2]
    return bool(leq[M[a, d], S[b, c]])


def dm_completion_bisemigroup(A: OrderedAlgebra, F: Iterable[int] = (), I: Iterable[int] = (),
                              alpha: str = "-", *, cap: int = DEFAULT_CAP) -> CompletionResult:
    """Unital complemented DM completion of a commutative bisemigroup."""
    base = OrderedAlgebra(A.poset, A.mul, None, A.add, None, lattice=A.lattice, name=A.name)
    r = validate(base, commutative=True)
    if not r:
        raise AlgebraError(f"not a commutative bisemigroup: {r.describe(A.names)}")
    F = sorted(set(int(f) for f in F))
    I = sorted(set(int(i) for i in I))
    frame = frame_of_bisemigroup(A, F, I, alpha)
    res = galois_algebra(frame, quotient=True, cap=cap)
    res.frame = frame
    C = res.algebra
    e = res.embed
    checks = {"involutive": validate(C, commutative=True)}
    checks["embedding"] = check_morphism(e, base, C, embedding=True)
    bad = [a for a in range(A.n) if C.leq[C.one, e[a]] != (a in F)]
    checks["filter"] = PASS if not bad else _fail("filter", (bad[0],), "1 <= a iff a in F")
    bad = [a for a in range(A.n) if C.leq[e[a], C.zero] != (a in I)]
    checks["ideal"] = PASS if not bad else _fail("ideal", (bad[0],), "a <= 0 iff a in I")
    ok = bool(C.leq[C.one, C.zero]) == (alpha == "+")
    checks["alpha"] = PASS if ok else _fail("alpha", (), "1 <= 0 iff alpha is +")
    res.checks = checks
    C.name = f"{A.name}^D(F,I,{alpha})"
    return res


# ---------------------------------------------------------------- Funayama

@dataclass
class FunayamaReport:
    all_admissible: bool
    all_preserved: bool
    non_admissible: list[tuple[int, ...]]
    not_preserved: list[tuple[int, ...]]

    @property
    def equivalence_holds(self) -> bool:
        return self.all_admissible == self.all_preserved

    def __bool__(self) -> bool:
        return self.equivalence_holds


def check_funayama(A: OrderedAlgebra, res: CompletionResult | None = None) -> FunayamaReport:
    """Admissibility of every existing join versus its preservation by the completion."""
    if res is None:
        res = dm_completion(A, verify=False)
    C = res.algebra
    e = res.embed
    non_adm, not_pres = [], []
    for xs in all_subsets(A.n):
        j = A.poset.join_of(xs)
        if j is None:
            continue
        if not is_admissible_join(A, xs):
            non_adm.append(xs)
        if C.poset.join_of([e[x] for x in xs]) != e[j]:
            not_pres.append(xs)
    return FunayamaReport(not non_adm, not not_pres, non_adm, not_pres)
