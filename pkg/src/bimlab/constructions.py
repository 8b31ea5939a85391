"""Builders for example bimonoids and a catalog of named algebras."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .algebra import (AlgebraError, InvolutiveAlgebra, OrderedAlgebra, is_add_integral,
                      is_mul_integral, require_valid, validate, _check_lattice)
from .order import FinitePoset, antichain, chain, from_cover_pairs


class NotBrouwerian(AlgebraError):
    pass


class PreconditionViolated(AlgebraError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotBiIntegral(AlgebraError):
    def __init__(self, index: int):
        super().__init__(f"summand {index} is not bi-integral")
        self.index = index


class MissingBound(AlgebraError):
    pass


class UnknownName(KeyError):
    pass


def with_lattice_flag(alg: OrderedAlgebra) -> OrderedAlgebra:
    """Mark ``alg`` as an l-bimonoid when its lattice laws hold."""
    if alg.lattice or not alg.poset.is_lattice():
        return alg
    trial = alg.replace(lattice=True)
    return trial if _check_lattice(trial) else alg


# ---------------------------------------------------------------- lattices

def lattice_bimonoid(poset: FinitePoset, name: str = "") -> OrderedAlgebra:
    """mul = meet, add = join, 1 = top, 0 = bottom. Not validated here:
    only distributive lattices give bimonoids."""
    if not poset.is_lattice():
        raise AlgebraError("poset is not a lattice")
    return OrderedAlgebra(poset, poset.meet_table, poset.top, poset.join_table,
                          poset.bottom, lattice=True, name=name)


def meet_monoid(poset: FinitePoset, name: str = "") -> OrderedAlgebra:
    """The pomonoid (meet, top) of a meet-semilattice with a top element."""
    m = poset.meet_table
    if (m < 0).any() or poset.top is None:
        raise AlgebraError("not a meet-semilattice with top")
    return OrderedAlgebra(poset, m, poset.top, name=name)


def brouwerian(poset: FinitePoset, name: str = "") -> OrderedAlgebra:
    alg = meet_monoid(poset, name)
    if not alg.is_residuated():
        raise NotBrouwerian("meet is not residuated")
    return alg


def trivial_bimonoid(pomonoid: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Read a pomonoid as a bimonoid with x + y = x * y and 0 = 1."""
    alg = OrderedAlgebra(pomonoid.poset, pomonoid.mul, pomonoid.one, pomonoid.mul,
                         pomonoid.one, name=name or pomonoid.name)
    return require_valid(with_lattice_flag(alg))


def from_pointed_brouwerian(lattice: OrderedAlgebra, zero: int, name: str = "") -> OrderedAlgebra:
    """Bimonoid with x*y = x meet y and x+y = (0 -> (x meet y)) meet (x join y)."""
    p = lattice.poset
    if not p.is_lattice():
        raise NotBrouwerian("not a lattice")
    if lattice.mul is None or not np.array_equal(lattice.mul, p.meet_table) or lattice.one != p.top:
        raise NotBrouwerian("multiplication must be the meet with unit the top")
    if not lattice.is_residuated():
        raise NotBrouwerian("meet is not residuated")
    res = lattice.residual_table()
    m, j = p.meet_table, p.join_table
    n = p.size
    add = np.empty((n, n), dtype=np.int64)
    for x, y in product(range(n), repeat=2):
        add[x, y] = m[res[zero, m[x, y]], j[x, y]]
    alg = OrderedAlgebra(p, m, p.top, add, zero, lattice=True, name=name or lattice.name)
    return require_valid(alg, commutative=True)


def is_boolean_pointed(alg: OrderedAlgebra) -> bool:
    """x v (x -> 0) = 1 for all x, in a pointed Brouwerian bimonoid."""
    if not is_pointed_brouwerian(alg):
        return False
    res, j = alg.residual_table(), alg.join_table
    return all(j[x, res[x, alg.zero]] == alg.one for x in range(alg.n))


def is_pointed_brouwerian(alg: OrderedAlgebra) -> bool:
    p = alg.poset
    if not p.is_lattice() or alg.mul is None or alg.add is None:
        return False
    if not np.array_equal(alg.mul, p.meet_table) or alg.one != p.top or not alg.is_residuated():
        return False
    try:
        ref = from_pointed_brouwerian(alg, alg.zero)
    except AlgebraError:
        return False
    return np.array_equal(ref.add, alg.add)


# ---------------------------------------------------------------- drastic additions

def drastic_top(pomonoid: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Bisemigroup with x + y = top for all x, y."""
    top = pomonoid.top
    if top is None:
        raise PreconditionViolated("no top element")
    n = pomonoid.n
    add = np.full((n, n), top, dtype=np.int64)
    alg = OrderedAlgebra(pomonoid.poset, pomonoid.mul, pomonoid.one, add, None,
                         name=name or pomonoid.name)
    return require_valid(alg)


def append_bottom(pomonoid: OrderedAlgebra, label: str = "bot") -> OrderedAlgebra:
    """New least element, absorbing for multiplication; it gets index 0."""
    n = pomonoid.n
    leq = np.ones((n + 1, n + 1), dtype=bool)
    leq[1:, 0] = False
    leq[1:, 1:] = pomonoid.leq
    names = [label] + [pomonoid.label(i) for i in range(n)]
    mul = np.zeros((n + 1, n + 1), dtype=np.int64)
    mul[1:, 1:] = pomonoid.mul + 1
    one = None if pomonoid.one is None else pomonoid.one + 1
    return require_valid(OrderedAlgebra(FinitePoset(leq, names), mul, one,
                                        name=pomonoid.name + "_bot"))


def drastic_bottom_unit(pomonoid: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Modified drastic addition with 0 = bottom: x+y = 1 when both are above bottom."""
    bot = pomonoid.bottom
    if bot is None or pomonoid.one is None:
        raise PreconditionViolated("needs a bottom element and a unit")
    if not is_mul_integral(pomonoid):
        raise PreconditionViolated("pomonoid is not integral")
    n = pomonoid.n
    for x, y in product(range(n), repeat=2):
        if (pomonoid.mul[x, y] == bot) != (x == bot or y == bot):
            raise PreconditionViolated("x*y = bot must hold exactly when x or y is bot", (x, y))
    add = np.empty((n, n), dtype=np.int64)
    for x, y in product(range(n), repeat=2):
        add[x, y] = x if y == bot else y if x == bot else pomonoid.one
    alg = OrderedAlgebra(pomonoid.poset, pomonoid.mul, pomonoid.one, add, bot,
                         name=name or pomonoid.name)
    return require_valid(with_lattice_flag(alg))


# ---------------------------------------------------------------- sums and extensions

def order_dual(alg: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Reverse the order and swap the roles of the two operations."""
    poset = FinitePoset(alg.leq.T.copy(), alg.poset.names)
    kw = dict(lattice=alg.lattice, name=name or (alg.name + "_dual"))
    if isinstance(alg, InvolutiveAlgebra):
        return InvolutiveAlgebra(poset, alg.add, alg.zero, alg.mul, alg.one, alg.comp, **kw)
    return OrderedAlgebra(poset, alg.add, alg.zero, alg.mul, alg.one, **kw)


def ordinal_sum(parts: Sequence[OrderedAlgebra], name: str = "") -> OrderedAlgebra:
    """Ordinal sum over the chain of indices 0 < 1 < ... of the given bisemigroups."""
    if len(parts) < 2:
        raise PreconditionViolated("the index chain must have at least two elements")
    for i, part in enumerate(parts):
        if part.mul is None or part.add is None:
            raise PreconditionViolated(f"summand {i} is not a bisemigroup")
        if not (is_mul_integral(part) and is_add_integral(part)):
            raise NotBiIntegral(i)
    offs = np.cumsum([0] + [p.n for p in parts])
    n = int(offs[-1])
    block = np.concatenate([[i] * p.n for i, p in enumerate(parts)])
    leq = np.zeros((n, n), dtype=bool)
    mul = np.empty((n, n), dtype=np.int64)
    add = np.empty((n, n), dtype=np.int64)
    for x, y in product(range(n), repeat=2):
        i, j = block[x], block[y]
        if i < j:
            leq[x, y] = True
            mul[x, y], add[x, y] = x, y
        elif i > j:
            mul[x, y], add[x, y] = y, x
        else:
            p, o = parts[i], offs[i]
            leq[x, y] = p.leq[x - o, y - o]
            mul[x, y] = p.mul[x - o, y - o] + o
            add[x, y] = p.add[x - o, y - o] + o
    raw = [p.label(k) for p in parts for k in range(p.n)]
    names = raw if len(set(raw)) == n else [f"{lab}@{block[k]}" for k, lab in enumerate(raw)]
    one = None if parts[-1].one is None else int(parts[-1].one + offs[-2])
    zero = None if parts[0].zero is None else int(parts[0].zero)
    alg = OrderedAlgebra(FinitePoset(leq, names), mul, one, add, zero, name=name)
    return require_valid(with_lattice_flag(alg))


def bounded_extension(alg: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Add a new bottom (index 0) and top (index n+1) with the absorption laws."""
    n = alg.n
    N = n + 2
    bot, top = 0, N - 1
    leq = np.zeros((N, N), dtype=bool)
    leq[bot, :] = True
    leq[:, top] = True
    leq[1:-1, 1:-1] = alg.leq
    mul = np.empty((N, N), dtype=np.int64)
    add = np.empty((N, N), dtype=np.int64)
    mul[1:-1, 1:-1] = alg.mul + 1
    add[1:-1, 1:-1] = alg.add + 1
    for x in range(N):
        mul[x, bot] = mul[bot, x] = bot
        add[x, top] = add[top, x] = top
        if x != bot:
            mul[x, top] = mul[top, x] = top
        if x != top:
            add[x, bot] = add[bot, x] = bot
    names = ["bot"] + [alg.label(i) for i in range(n)] + ["top"]
    if len(set(names)) != N:
        names = ["_bot"] + names[1:-1] + ["_top"]
    one = None if alg.one is None else alg.one + 1
    zero = None if alg.zero is None else alg.zero + 1
    out = OrderedAlgebra(FinitePoset(leq, names), mul, one, add, zero,
                         name=name or (alg.name + "_bounded"))
    return require_valid(with_lattice_flag(out))


def mirror_double(b: OrderedAlgebra, name: str = "") -> OrderedAlgebra:
    """Ordinal sum of B below its order dual."""
    return ordinal_sum([b, order_dual(b)], name=name or (b.name + "_mirror"))


# ---------------------------------------------------------------- reflections

def reflection_star(alg: OrderedAlgebra, flavor: str = "upper", name: str = "") -> InvolutiveAlgebra:
    """Double a commutative residuated pomonoid into A u A' with comp(a) = a'.

    ``upper`` puts the mirror copy below A and needs a top, ``lower`` puts it
    above A and needs a bottom.
    """
    if flavor not in ("upper", "lower"):
        raise ValueError("flavor must be 'upper' or 'lower'")
    if alg.mul is None or alg.one is None or not alg.is_commutative:
        raise AlgebraError("needs a commutative pomonoid")
    if not alg.is_residuated():
        raise AlgebraError("needs a residuated pomonoid")
    bound = alg.top if flavor == "upper" else alg.bottom
    if bound is None:
        raise MissingBound(f"{flavor} flavor needs a {'top' if flavor == 'upper' else 'bottom'}")
    n = alg.n
    if flavor == "lower":
        if bound == alg.one:
            raise PreconditionViolated("lower flavor needs a bottom distinct from the unit")
        for x, y in product(range(n), repeat=2):
            if alg.mul[x, y] == bound and bound not in (x, y):
                raise PreconditionViolated("lower flavor needs x*y = bot only for x or y = bot",
                                           (x, y))
    res = alg.residual_table()
    N = 2 * n
    leq = np.zeros((N, N), dtype=bool)
    leq[:n, :n] = alg.leq
    leq[n:, n:] = alg.leq.T  # a' <= b' iff b <= a
    if flavor == "upper":
        leq[n:, :n] = True
    else:
        leq[:n, n:] = True
    mul = np.empty((N, N), dtype=np.int64)
    mul[:n, :n] = alg.mul
    for a, b in product(range(n), repeat=2):
        # a' * b is the mirror image of b -> a
        mul[n + a, b] = n + res[b, a]
        mul[a, n + b] = n + res[a, b]
        mul[n + a, n + b] = n + bound
    if flavor == "lower":
        # bot stays absorbing; it is the least element of the doubled carrier
        mul[bound, :] = bound
        mul[:, bound] = bound
    comp =np.concatenate([np.arange(n, N), np.arange(n)])
    add = comp[mul[comp[:, None], comp[None, :]]].T  # x+y = comp(comp y * comp x)
    names = [alg.label(i) for i in range(n)] + [alg.label(i) + "'" for i in range(n)]
    out = InvolutiveAlgebra(FinitePoset(leq, names), mul, alg.one, add, n + alg.one, comp,
                            name=name or f"{alg.name}_{flavor}")
    return require_valid(with_lattice_flag(out))


# ---------------------------------------------------------------- concrete algebras

def luk3() -> OrderedAlgebra:
    """The multiplicative reduct of the 3-element MV-chain read with + = *."""
    poset = chain(3, ["b", "a", "1"])
    mul = [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
    return trivial_bimonoid(OrderedAlgebra(poset, mul, 2), name="L3")


H5_NAMES = ["bot", "a", "b", "c", "1"]


def h5_poset() -> FinitePoset:
    return from_cover_pairs(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], H5_NAMES)


def h5(zero: str) -> OrderedAlgebra:
    p = h5_poset()
    label = "H5c" if zero == "c" else "H5one" if zero == "1" else f"H5:{zero}"
    return from_pointed_brouwerian(brouwerian(p), p.index(zero), name=label)


def m3_poset() -> FinitePoset:
    return from_cover_pairs(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                            ["bot", "a", "b", "c", "top"])


def n5_poset() -> FinitePoset:
    return from_cover_pairs(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
                            ["bot", "a", "b", "c", "top"])


def meet_semilattice_bimonoid(poset: FinitePoset, name: str = "") -> OrderedAlgebra:
    """mul = add = meet, 1 = 0 = top."""
    return trivial_bimonoid(meet_monoid(poset, name), name=name)


def brouwerian_chain(n: int, zero: int, name: str = "") -> OrderedAlgebra:
    """The n-element Brouwerian chain c0 < ... < c{n-1}, pointed at height ``zero``."""
    if n < 1 or not 0 <= zero < n:
        raise ValueError("need n >= 1 and 0 <= zero < n")
    p = chain(n, [f"c{i}" for i in range(n)])
    return from_pointed_brouwerian(brouwerian(p), zero, name=name or f"chain:{n}:{zero}")


def distributive_chain(n: int) -> OrderedAlgebra:
    """n-chain with mul = meet, add = join."""
    p = chain(n, [f"c{i}" for i in range(n)])
    return require_valid(lattice_bimonoid(p, name=f"dchain:{n}"))


def boolean(k: int) -> InvolutiveAlgebra:
    """The Boolean algebra 2^k as a bimonoid with mul = meet, add = join."""
    n = 1 << k
    names = [format(i, f"0{k}b") if k else "e" for i in range(n)]
    leq = np.array([[(x & y) == x for y in range(n)] for x in range(n)])
    p = FinitePoset(leq, names)
    full = n - 1
    alg = lattice_bimonoid(p, name=f"boolean:{k}")
    comp = [full ^ x for x in range(n)]
    return require_valid(InvolutiveAlgebra.from_base(alg, comp))


def sugihara(n: int) -> InvolutiveAlgebra:
    """Odd Sugihara chain -m < ... < m with n = 2m+1 elements."""
    if n < 1 or n % 2 == 0:
        raise ValueError("Sugihara chains here have an odd number of elements")
    m = n // 2
    vals = list(range(-m, m + 1))
    p = chain(n, [str(v) for v in vals])
    mul = np.empty((n, n), dtype=np.int64)
    add = np.empty((n, n), dtype=np.int64)
    for i, j in product(range(n), repeat=2):
        x, y = vals[i], vals[j]
        if abs(x) != abs(y):
            mul[i, j] = add[i, j] = i if abs(x) > abs(y) else j
        else:
            mul[i, j] = min(i, j)
            add[i, j] = max(i, j)
    comp = [n - 1 - i for i in range(n)]
    alg = InvolutiveAlgebra(p, mul, m, add, m, comp, lattice=True, name=f"sugihara:{n}")
    return require_valid(alg, commutative=True)


def cyclic_group(n: int) -> InvolutiveAlgebra:
    """Z_n, discretely ordered, with + = * and comp(x) = -x."""
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    comp = (-idx) % n
    alg = InvolutiveAlgebra(antichain(n, [f"g{i}" for i in range(n)]), table, 0, table, 0,
                            comp, lattice=(n == 1), name=f"cyclic:{n}")
    return require_valid(alg, commutative=True)


def diamond_fig5() -> InvolutiveAlgebra:
    """Five-element diamond: bottom, three atoms a, 1, b, top c.

    Multiplication is the meet of H5 (where c < 1), the involution swaps a
    and b, fixes 1 and swaps bot and c, and 0 = 1.
    """
    names = ["bot", "a", "1", "b", "c"]
    p = from_cover_pairs(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], names)
    h = h5_poset()
    to_h = [h.index(s) for s in names]
    from_h = {v: k for k, v in enumerate(to_h)}
    mul = np.array([[from_h[int(h.meet_table[to_h[x], to_h[y]])] for y in range(5)]
                    for x in range(5)])
    comp = np.array([4, 3, 2, 1, 0])
    add = comp[mul[comp[:, None], comp[None, :]]].T
    alg = InvolutiveAlgebra(p, mul, 2, add, 2, comp, lattice=True, name="diamond_fig5")
    return require_valid(alg, commutative=True)


# ---------------------------------------------------------------- catalog

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., OrderedAlgebra]
    provenance: str
    pattern: str = ""


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry("L3", luk3, "3-element MV-chain reduct with + = *"),
    CatalogEntry("H5c", lambda: h5("c"), "Brouwerian H5 pointed at c"),
    CatalogEntry("H5one", lambda: h5("1"), "Brouwerian H5 pointed at 1"),
    CatalogEntry("M3", lambda: meet_semilattice_bimonoid(m3_poset(), "M3"),
                 "M3 meet-semilattice with + = * = meet"),
    CatalogEntry("N5", lambda: meet_semilattice_bimonoid(n5_poset(), "N5"),
                 "N5 meet-semilattice with + = * = meet"),
    CatalogEntry("diamond_fig5", diamond_fig5, "five-element diamond failing x = (1^x)(0vx)"),
    CatalogEntry("chain", brouwerian_chain, "pointed Brouwerian chain", "chain:<n>:<pos-of-0>"),
    CatalogEntry("boolean", boolean, "Boolean algebra 2^k", "boolean:<k>"),
    CatalogEntry("sugihara", sugihara, "odd Sugihara chain", "sugihara:<odd n>"),
    CatalogEntry("cyclic", cyclic_group, "cyclic group Z_n", "cyclic:<n>"),
    CatalogEntry("dchain", distributive_chain, "chain as distributive lattice", "dchain:<n>"),
]}


def catalog(name: str) -> OrderedAlgebra:
    head, *args = name.split(":")
    entry = CATALOG.get(head)
    if entry is None or bool(entry.pattern) != bool(args):
        raise UnknownName(name)
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise UnknownName(name) from None
    if entry.pattern and len(nums) != entry.pattern.count("<"):
        raise UnknownName(name)
    try:
        alg = entry.builder(*nums)
    except ValueError as exc:
        raise UnknownName(f"{name}: {exc}") from None
    alg.name = name
    return alg


def catalog_instances(max_size: int = 6) -> list[str]:
    """Concrete catalog names with at most ``max_size`` elements."""
    names = ["L3", "H5c", "H5one", "M3", "N5", "diamond_fig5"]
    names = [s for s in names if catalog(s).n <= max_size]
    for n in range(1, max_size + 1):
        names += [f"chain:{n}:{z}" for z in range(n)]
    k = 0
    while (1 << k) <= max_size:
        names.append(f"boolean:{k}")
        k += 1
    names += [f"sugihara:{n}" for n in range(1, max_size + 1, 2)]
    names += [f"cyclic:{n}" for n in range(1, max_size + 1)]
    names += [f"dchain:{n}" for n in range(1, max_size + 1)]
    return names
