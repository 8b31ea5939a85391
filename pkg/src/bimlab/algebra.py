"""Finite ordered algebras with up to two monoid tables: bimonoids and relatives.

Elements are indices into the underlying poset. The multiplication ``mul``
comes with unit ``one``; the addition ``add`` lives over the dual order and
comes with unit ``zero``. Either table may be missing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .order import FinitePoset


class AlgebraError(ValueError):
    pass


class AxiomViolation(AlgebraError):
    def __init__(self, name: str, witness: tuple = (), detail: str = ""):
        super().__init__(f"{name} fails at {witness}" + (f": {detail}" if detail else ""))
        self.name = name
        self.witness = witness
        self.detail = detail


class NoResidual(AlgebraError):
    def __init__(self, a: int, b: int):
        super().__init__(f"no residual {a} -> {b}")
        self.a, self.b = a, b


class NoComplement(AlgebraError):
    def __init__(self, x: int):
        super().__init__(f"element {x} has no complement")
        self.x = x


class NotComplemented(AlgebraError):
    pass


class NoJoin(AlgebraError):
    pass


@dataclass(frozen=True)
class Report:
    """Outcome of a check. Truthy iff the check passed."""

    ok: bool
    axiom: str | None = None
    witness: tuple = ()
    detail: str = ""
    notes: tuple = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise AxiomViolation(self.axiom or "check", self.witness, self.detail)

    def describe(self, names: Sequence[str] | None = None) -> str:
        if self.ok:
            return "OK"
        wit = tuple(names[w] if names and isinstance(w, (int, np.integer)) else w
                    for w in self.witness)
        text = f"FAIL {self.axiom} witness={wit}"
        return text + (f" ({self.detail})" if self.detail else "")


PASS = Report(True)


def _fail(name: str, witness, detail: str = "") -> Report:
    return Report(False, name, tuple(int(w) for w in witness), detail)


def _table(t, n: int, label: str) -> np.ndarray | None:
    if t is None:
        return None
    arr = np.array(t, dtype=np.int64)
    if arr.shape != (n, n):
        raise AlgebraError(f"{label} table must be {n}x{n}, got {arr.shape}")
    if n and (arr.min() < 0 or arr.max() >= n):
        raise AlgebraError(f"{label} table has entries outside the carrier")
    arr.setflags(write=False)
    return arr


class OrderedAlgebra:
    """A poset with optional (mul, one) and (add, zero).

    ``lattice`` declares an l-bimonoid: binary meets and joins must exist and
    mul distributes over joins, add over meets.
    """

    def __init__(self, poset: FinitePoset, mul=None, one: int | None = None,
                 add=None, zero: int | None = None, *, lattice: bool = False,
                 name: str = ""):
        n = poset.size
        self.poset = poset
        self.mul = _table(mul, n, "mul")
        self.add = _table(add, n, "add")
        for u, label, tab in ((one, "one", self.mul), (zero, "zero", self.add)):
            if u is not None:
                if tab is None:
                    raise AlgebraError(f"{label} given without its table")
                if not 0 <= u < n:
                    raise AlgebraError(f"{label} outside the carrier")
        self.one = None if one is None else int(one)
        self.zero = None if zero is None else int(zero)
        self.lattice = bool(lattice)
        self.name = name
        self._res = None

    # basic accessors
    @property
    def n(self) -> int:
        return self.poset.size

    @property
    def leq(self) -> np.ndarray:
        return self.poset.leq

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.poset.name(i) for i in range(self.n))

    def element(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        return self.poset.index(name)

    def label(self, x: int) -> str:
        return self.poset.name(x)

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    @property
    def has_mul_unit(self) -> bool:
        return self.one is not None

    @property
    def has_add_unit(self) -> bool:
        return self.zero is not None

    @property
    def is_commutative(self) -> bool:
        return all(t is None or np.array_equal(t, t.T) for t in (self.mul, self.add))

    @property
    def is_bimonoid(self) -> bool:
        return self.mul is not None and self.add is not None and self.has_mul_unit and self.has_add_unit

    @property
    def meet_table(self) -> np.ndarray:
        return self.poset.meet_table

    @property
    def join_table(self) -> np.ndarray:
        return self.poset.join_table

    @property
    def bottom(self) -> int | None:
        return self.poset.bottom

    @property
    def top(self) -> int | None:
        return self.poset.top

    def is_involutive(self) -> bool:
        return False

    def replace(self, **kw) -> "OrderedAlgebra":
        args = dict(poset=self.poset, mul=self.mul, one=self.one, add=self.add,
                    zero=self.zero, lattice=self.lattice, name=self.name)
        args.update(kw)
        return OrderedAlgebra(**args)

    def __repr__(self) -> str:
        kind = "l-" if self.lattice else ""
        return f"<{kind}OrderedAlgebra {self.name or '?'} n={self.n}>"

    # residuals
    def residual_table(self) -> np.ndarray:
        """Table of a -> b = max{c : a*c <= b}, -1 where no maximum exists."""
        if self._res is None:
            if self.mul is None:
                raise AlgebraError("residuals need a multiplication")
            n = self.n
            res = np.full((n, n), -1, dtype=np.int64)
            for a, b in product(range(n), repeat=2):
                sols = [c for c in range(n) if self.leq[self.mul[a, c], b]]
                g = self.poset.greatest(sols)
                if g is not None:
                    res[a, b] = g
            res.setflags(write=False)
            self._res = res
        return self._res

    def is_residuated(self) -> bool:
        return self.mul is not None and bool((self.residual_table() >= 0).all())

    def residual(self, a: int, b: int) -> int:
        r = int(self.residual_table()[a, b])
        if r < 0:
            raise NoResidual(a, b)
        return r


class InvolutiveAlgebra(OrderedAlgebra):
    """A complemented bimonoid, presented with its complement table."""

    def __init__(self, poset: FinitePoset, mul, one, add, zero, comp, *,
                 lattice: bool = False, name: str = ""):
        super().__init__(poset, mul, one, add, zero, lattice=lattice, name=name)
        arr = np.array(comp, dtype=np.int64)
        if arr.shape != (self.n,) or (self.n and (arr.min() < 0 or arr.max() >= self.n)):
            raise AlgebraError("comp must map the carrier to itself")
        arr.setflags(write=False)
        self.comp = arr

    @classmethod
    def from_base(cls, base: OrderedAlgebra, comp) -> "InvolutiveAlgebra":
        return cls(base.poset, base.mul, base.one, base.add, base.zero, comp,
                   lattice=base.lattice, name=base.name)

    @property
    def base(self) -> OrderedAlgebra:
        return OrderedAlgebra(self.poset, self.mul, self.one, self.add, self.zero,
                              lattice=self.lattice, name=self.name)

    def is_involutive(self) -> bool:
        return True

    def replace(self, **kw) -> "InvolutiveAlgebra":
        args = dict(poset=self.poset, mul=self.mul, one=self.one, add=self.add,
                    zero=self.zero, comp=self.comp, lattice=self.lattice, name=self.name)
        args.update(kw)
        return InvolutiveAlgebra(**args)

    def __repr__(self) -> str:
        return f"<InvolutiveAlgebra {self.name or '?'} n={self.n}>"


# ---------------------------------------------------------------- validation

def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    return None if hits.size == 0 else tuple(int(v) for v in hits[0])


def _check_semigroup(t: np.ndarray, leq: np.ndarray, label: str) -> Report:
    n = t.shape[0]
    idx = np.arange(n)
    lhs = t[t[:, :, None], idx[None, None, :]]
    rhs = t[idx[:, None, None], t[None, :, :]]
    w = _first(lhs != rhs)
    if w:
        return _fail(f"{label}-associativity", w)
    # x <= y implies x.z <= y.z and z.x <= z.y, witness (x, y, z)
    right = leq[:, :, None] & ~leq[t[:, None, :], t[None, :, :]]
    w = _first(right)
    if w:
        return _fail(f"{label}-isotone", w)
    left = leq[:, :, None] & ~leq[t.T[:, None, :], t.T[None, :, :]]
    w = _first(left)
    if w:
        return _fail(f"{label}-isotone", w)
    return PASS


def _check_unit(t: np.ndarray, u: int, label: str) -> Report:
    n = t.shape[0]
    idx = np.arange(n)
    bad = np.flatnonzero((t[u] != idx) | (t[:, u] != idx))
    if bad.size:
        return _fail(f"{label}-unit", (int(bad[0]),))
    return PASS


def check_hemidistributivity(mul: np.ndarray, add: np.ndarray, leq: np.ndarray) -> Report:
    n = mul.shape[0]
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    # x(y+z) <= xy+z
    w = _first(~leq[mul[x, add[y, z]], add[mul[x, y], z]])
    if w:
        return _fail("hemidistributivity", w, "x*(y+z) <= x*y+z")
    # (z+y)x <= z+yx
    w = _first(~leq[mul[add[z, y], x], add[z, mul[y, x]]])
    if w:
        return _fail("hemidistributivity", w, "(z+y)*x <= z+y*x")
    return PASS


def _check_lattice(alg: OrderedAlgebra) -> Report:
    p = alg.poset
    if not p.is_lattice():
        m, j = p.meet_table, p.join_table
        w = _first((m < 0) | (j < 0))
        return _fail("lattice", w, "missing binary meet or join")
    n = alg.n
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    jn, mt = p.join_table, p.meet_table
    if alg.mul is not None:
        t = alg.mul
        w = _first(t[x, jn[y, z]] != jn[t[x, y], t[x, z]])
        if w:
            return _fail("mul-distributes-join", w)
        w = _first(t[jn[y, z], x] != jn[t[y, x], t[z, x]])
        if w:
            return _fail("mul-distributes-join", w)
    if alg.add is not None:
        t = alg.add
        w = _first(t[x, mt[y, z]] != mt[t[x, y], t[x, z]])
        if w:
            return _fail("add-distributes-meet", w)
        w = _first(t[mt[y, z], x] != mt[t[y, x], t[z, x]])
        if w:
            return _fail("add-distributes-meet", w)
    return PASS


def check_involution(alg: InvolutiveAlgebra) -> Report:
    """Complement, double negation and De Morgan laws."""
    c = alg.comp
    n = alg.n
    idx = np.arange(n)
    if alg.one is None or alg.zero is None:
        return _fail("complement", (), "units required")
    bad = np.flatnonzero(~alg.leq[alg.mul[c, idx], alg.zero] | ~alg.leq[alg.one, alg.add[idx, c]])
    if bad.size:
        return _fail("complement", (int(bad[0]),))
    bad = np.flatnonzero(c[c] != idx)
    if bad.size:
        return _fail("double-negation", (int(bad[0]),))
    x = idx[:, None]
    y = idx[None, :]
    w = _first(c[alg.mul[x, y]] != alg.add[c[y], c[x]])
    if w:
        return _fail("de-morgan", w, "comp(x*y) = comp(y)+comp(x)")
    w = _first(c[alg.add[x, y]] != alg.mul[c[y], c[x]])
    if w:
        return _fail("de-morgan", w, "comp(x+y) = comp(y)*comp(x)")
    return PASS


def validate(alg: OrderedAlgebra, *, commutative: bool = False) -> Report:
    """Check every declared axiom; report the first failure found.

    Checks run in a fixed order and each witness is the lexicographically
    least failing tuple, so the outcome is deterministic.
    """
    if commutative and not alg.is_commutative:
        for t in (alg.mul, alg.add):
            if t is not None:
                w = _first(t != t.T)
                if w:
                    return _fail("commutativity", w)
    if alg.mul is not None:
        r = _check_semigroup(alg.mul, alg.leq, "mul")
        if not r:
            return r
        if alg.one is not None:
            r = _check_unit(alg.mul, alg.one, "mul")
            if not r:
                return r
    if alg.add is not None:
        r = _check_semigroup(alg.add, alg.leq, "add")
        if not r:
            return r
        if alg.zero is not None:
            r = _check_unit(alg.add, alg.zero, "add")
            if not r:
                return r
    if alg.mul is not None and alg.add is not None:
        r = check_hemidistributivity(alg.mul, alg.add, alg.leq)
        if not r:
            return r
    if alg.lattice:
        r = _check_lattice(alg)
        if not r:
            return r
    if isinstance(alg, InvolutiveAlgebra):
        r = check_involution(alg)
        if not r:
            return r
    return PASS


def require_valid(alg: OrderedAlgebra, **kw) -> OrderedAlgebra:
    validate(alg, **kw).raise_if_failed()
    return alg


# ---------------------------------------------------------------- classification

def is_mul_integral(alg: OrderedAlgebra) -> bool:
    t, leq = alg.mul, alg.leq
    idx = np.arange(alg.n)
    return bool(leq[t, idx[:, None]].all() and leq[t, idx[None, :]].all())


def is_add_integral(alg: OrderedAlgebra) -> bool:
    t, leq = alg.add, alg.leq
    idx = np.arange(alg.n)
    return bool(leq[idx[:, None], t].all() and leq[idx[None, :], t].all())


def is_bi_integral(alg: OrderedAlgebra) -> bool:
    return is_mul_integral(alg) and is_add_integral(alg)


def is_idempotent(alg: OrderedAlgebra) -> bool:
    d = np.arange(alg.n)
    return bool((alg.mul[d, d] == d).all() and (alg.add[d, d] == d).all())


def classify(alg: OrderedAlgebra) -> list[str]:
    """Short list of structural tags, used for catalog listings and reports."""
    tags = []
    if alg.mul is not None and alg.add is not None:
        tags.append("bimonoid" if alg.is_bimonoid else "bisemigroup")
    if alg.is_commutative:
        tags.append("commutative")
    if alg.lattice:
        tags.append("l-bimonoid")
    if alg.poset.is_chain():
        tags.append("linear")
    if alg.mul is not None and is_mul_integral(alg):
        tags.append("mul-integral")
    if alg.mul is not None and alg.add is not None:
        if is_bi_integral(alg):
            tags.append("bi-integral")
        if is_idempotent(alg):
            tags.append("idempotent")
            # idempotent bi-integral bimonoids are exactly distributive lattices
            if "bi-integral" in tags:
                tags.append("distributive-lattice")
    if alg.mul is not None and alg.is_residuated():
        tags.append("residuated")
    if isinstance(alg, InvolutiveAlgebra):
        tags.append("involutive")
    return tags


# ---------------------------------------------------------------- residuals, complements

def residual(alg: OrderedAlgebra, a: int, b: int) -> int:
    return alg.residual(a, b)


def is_residuated(alg: OrderedAlgebra) -> bool:
    return alg.is_residuated()


def complement_of(alg: OrderedAlgebra, x: int) -> int:
    """The unique y with y*x <= 0 and 1 <= x+y."""
    if not alg.is_bimonoid:
        raise AlgebraError("complements need both units")
    for y in range(alg.n):
        if alg.leq[alg.mul[y, x], alg.zero] and alg.leq[alg.one, alg.add[x, y]]:
            return y
    raise NoComplement(x)


def make_involutive(alg: OrderedAlgebra) -> InvolutiveAlgebra:
    comp = []
    for x in range(alg.n):
        try:
            comp.append(complement_of(alg, x))
        except NoComplement as exc:
            raise NotComplemented(f"element {alg.label(x)} has no complement") from exc
    return InvolutiveAlgebra.from_base(alg, comp)


# ---------------------------------------------------------------- joins

def is_admissible_join(alg: OrderedAlgebra, subset: Iterable[int]) -> bool:
    """True iff multiplication distributes over the join of ``subset``."""
    xs = sorted(set(int(s) for s in subset))
    j = alg.poset.join_of(xs)
    if j is None:
        raise NoJoin(f"no join of {xs}")
    for y in range(alg.n):
        r = alg.poset.join_of([alg.mul[x, y] for x in xs])
        l = alg.poset.join_of([alg.mul[y, x] for x in xs])
        if r != alg.mul[j, y] or l != alg.mul[y, j]:
            return False
    return True


def is_admissible_meet(alg: OrderedAlgebra, subset: Iterable[int]) -> bool:
    """Dual notion: addition distributes over the meet of ``subset``."""
    xs = sorted(set(int(s) for s in subset))
    m = alg.poset.meet_of(xs)
    if m is None:
        raise NoJoin(f"no meet of {xs}")
    for y in range(alg.n):
        r = alg.poset.meet_of([alg.add[x, y] for x in xs])
        l = alg.poset.meet_of([alg.add[y, x] for x in xs])
        if r != alg.add[m, y] or l != alg.add[y, m]:
            return False
    return True


def all_subsets(n: int):
    for k in range(n + 1):
        yield from combinations(range(n), k)


# ---------------------------------------------------------------- morphisms

def check_morphism(f: Sequence[int], src: OrderedAlgebra, dst: OrderedAlgebra, *,
                   embedding: bool = False, complete: bool = False) -> Report:
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (src.n,):
        return _fail("total", (), "map must be defined on every element")
    w = _first(src.leq & ~dst.leq[f[:, None], f[None, :]])
    if w:
        return _fail("order-preserving", w)
    if embedding:
        w = _first(~src.leq & dst.leq[f[:, None], f[None, :]])
        if w:
            return _fail("order-reflecting", w)
    for label, a, b in (("mul", src.mul, dst.mul), ("add", src.add, dst.add)):
        if a is not None and b is not None:
            w = _first(f[a] != b[f[:, None], f[None, :]])
            if w:
                return _fail(f"preserves-{label}", w)
    for label, a, b in (("one", src.one, dst.one), ("zero", src.zero, dst.zero)):
        if a is not None and b is not None and f[a] != b:
            return _fail(f"preserves-{label}", (a,))
    if isinstance(src, InvolutiveAlgebra) and isinstance(dst, InvolutiveAlgebra):
        bad = np.flatnonzero(f[src.comp] != dst.comp[f])
        if bad.size:
            return _fail("preserves-comp", (int(bad[0]),))
    if complete:
        for xs in all_subsets(src.n):
            j = src.poset.join_of(xs)
            if j is not None and dst.poset.join_of(f[list(xs)].tolist()) != f[j]:
                return _fail("preserves-joins", xs)
            m = src.poset.meet_of(xs)
            if m is not None and dst.poset.meet_of(f[list(xs)].tolist()) != f[m]:
                return _fail("preserves-meets", xs)
    return PASS


def find_isomorphism(src: OrderedAlgebra, dst: OrderedAlgebra,
                     fixed: dict[int, int] | None = None) -> tuple[int, ...] | None:
    """Brute-force search for an isomorphism, honouring a partial assignment."""
    n = src.n
    if dst.n != n:
        return None
    if (src.mul is None) != (dst.mul is None) or (src.add is None) != (dst.add is None):
        return None

    def profile(a: OrderedAlgebra, i: int):
        prof = [int(a.leq[:, i].sum()), int(a.leq[i].sum())]
        for t in (a.mul, a.add):
            if t is not None:
                prof.append(int(t[i, i] == i))
        for u in (a.one, a.zero):
            prof.append(int(u == i))
        return tuple(prof)

    sp = [profile(src, i) for i in range(n)]
    dp = [profile(dst, i) for i in range(n)]
    if sorted(sp) != sorted(dp):
        return None
    fixed = dict(fixed or {})
    cands = [[fixed[i]] if i in fixed else [j for j in range(n) if dp[j] == sp[i]]
             for i in range(n)]
    f = [-1] * n
    used = [False] * n
    tabs = [(t, u) for t, u in ((src.mul, dst.mul), (src.add, dst.add)) if t is not None]

    def consistent(i: int, j: int) -> bool:
        for k in range(i + 1):
            fk = j if k == i else f[k]
            if src.leq[k, i] != dst.leq[fk, j] or src.leq[i, k] != dst.leq[j, fk]:
                return False
            for t, u in tabs:
                for r, img in ((t[i, k], u[j, fk]), (t[k, i], u[fk, j])):
                    fr = j if r == i else (f[r] if r < i else -1)
                    if fr >= 0 and fr != img:
                        return False
        return True

    def search(i: int):
        if i == n:
            return True
        for j in cands[i]:
            if not used[j] and consistent(i, j):
                f[i] = j
                used[j] = True
                if search(i + 1):
                    return True
                used[j] = False
                f[i] = -1
        return False

    if not search(0):
        return None
    if not check_morphism(f, src, dst, embedding=True):
        return None
    return tuple(f)


# ---------------------------------------------------------------- subalgebras

def subalgebra(alg: OrderedAlgebra, elements: Iterable[int], name: str = "") -> tuple[OrderedAlgebra, list[int]]:
    """Restrict ``alg`` to a subset closed under the operations.

    Returns the subalgebra and the inclusion map (list of original indices).
    """
    keep = sorted(set(int(e) for e in elements))
    pos = {e: i for i, e in enumerate(keep)}

    def restrict(t):
        if t is None:
            return None
        out = np.empty((len(keep), len(keep)), dtype=np.int64)
        for (i, x), (j, y) in product(enumerate(keep), repeat=2):
            v = int(t[x, y])
            if v not in pos:
                raise AlgebraError(f"subset not closed: {x},{y} -> {v}")
            out[i, j] = pos[v]
        return out

    names = [alg.label(e) for e in keep]
    poset = FinitePoset(alg.leq[np.ix_(keep, keep)], names)
    one = None if alg.one is None else pos.get(alg.one)
    zero = None if alg.zero is None else pos.get(alg.zero)
    if (alg.one is not None and one is None) or (alg.zero is not None and zero is None):
        raise AlgebraError("subset does not contain the units")
    sub = OrderedAlgebra(poset, restrict(alg.mul), one, restrict(alg.add), zero,
                         lattice=alg.lattice and poset.is_lattice(), name=name or alg.name)
    return sub, keep


# ---------------------------------------------------------------- interior operators

@dataclass(frozen=True)
class InteriorOperator:
    algebra: InvolutiveAlgebra
    sigma: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.sigma[x]

    def image(self) -> list[int]:
        return sorted(set(self.sigma))


def check_interior(io: InteriorOperator) -> Report:
    alg = io.algebra
    s = np.asarray(io.sigma, dtype=np.int64)
    w = _first(alg.leq & ~alg.leq[s[:, None], s[None, :]])
    if w:
        return _fail("sigma-isotone", w)
    bad = np.flatnonzero(~alg.leq[s, np.arange(alg.n)])
    if bad.size:
        return _fail("sigma-decreasing", (int(bad[0]),))
    bad = np.flatnonzero(s[s] != s)
    if bad.size:
        return _fail("sigma-idempotent", (int(bad[0]),))
    return PASS


def check_normal_interior(io: InteriorOperator) -> Report:
    """Interior operator whose image is a sub-bimonoid, plus x = s(x)*comp(s(comp x))."""
    r = check_interior(io)
    if not r:
        return r
    alg = io.algebra
    s = np.asarray(io.sigma, dtype=np.int64)
    img = set(s.tolist())
    for u, label in ((alg.one, "one"), (alg.zero, "zero")):
        if u not in img:
            return _fail(f"sigma-image-contains-{label}", (u,))
    for x, y in product(sorted(img), repeat=2):
        if alg.mul[x, y] not in img:
            return _fail("sigma-image-closed-mul", (x, y))
        if alg.add[x, y] not in img:
            return _fail("sigma-image-closed-add", (x, y))
    c = alg.comp
    for x in range(alg.n):
        if alg.mul[s[x], c[s[c[x]]]] != x:
            return _fail("normality", (x,), "x = s(x)*comp(s(comp x))")
    return PASS
