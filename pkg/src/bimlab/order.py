"""Finite posets over dense indices 0..n-1."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

import numpy as np


class PosetError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotReflexive(PosetError):
    pass


class NotAntisymmetric(PosetError):
    pass


class NotTransitive(PosetError):
    pass


class NoBound(LookupError):
    def __init__(self, kind: str, elements: tuple):
        super().__init__(f"no {kind} for {elements}")
        self.kind = kind
        self.elements = elements


class FinitePoset:
    """An immutable partial order on ``range(size)``.

    ``leq[x, y]`` is True when x <= y. Names are optional display labels.
    """

    __slots__ = ("leq", "names", "_meet", "_join")

    def __init__(self, leq, names: Sequence[str] | None = None, *, _checked=False):
        rel = np.array(leq, dtype=bool)
        if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
            raise PosetError(f"relation must be square, got shape {rel.shape}")
        if not _checked:
            _check_order(rel)
        rel.setflags(write=False)
        if names is not None:
            names = tuple(str(s) for s in names)
            if len(names) != rel.shape[0]:
                raise PosetError("names length does not match relation size")
            if len(set(names)) != len(names):
                raise PosetError("names must be pairwise distinct")
        self.leq = rel
        self.names = names
        self._meet = None
        self._join = None

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (isinstance(other, FinitePoset) and np.array_equal(self.leq, other.leq)
                and self.names == other.names)

    def __hash__(self) -> int:
        return hash((self.leq.tobytes(), self.names))

    def __repr__(self) -> str:
        return f"FinitePoset(size={self.size}, names={self.names})"

    def name(self, x: int) -> str:
        return self.names[x] if self.names else f"e{x}"

    def index(self, name: str) -> int:
        if self.names and name in self.names:
            return self.names.index(name)
        if name.startswith("e") and name[1:].isdigit() and int(name[1:]) < self.size:
            return int(name[1:])
        raise KeyError(name)

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def lower_bounds(self, xs: Iterable[int]) -> list[int]:
        xs = list(xs)
        return [z for z in range(self.size) if all(self.leq[z, x] for x in xs)]

    def upper_bounds(self, xs: Iterable[int]) -> list[int]:
        xs = list(xs)
        return [z for z in range(self.size) if all(self.leq[x, z] for x in xs)]

    def greatest(self, xs: Iterable[int]) -> int | None:
        xs = list(xs)
        for z in xs:
            if all(self.leq[w, z] for w in xs):
                return z
        return None

    def least(self, xs: Iterable[int]) -> int | None:
        xs = list(xs)
        for z in xs:
            if all(self.leq[z, w] for w in xs):
                return z
        return None

    def meet_of(self, xs: Iterable[int]) -> int | None:
        """Greatest lower bound of a set, or None. The empty meet is the top."""
        return self.greatest(self.lower_bounds(xs))

    def join_of(self, xs: Iterable[int]) -> int | None:
        return self.least(self.upper_bounds(xs))

    @property
    def bottom(self) -> int | None:
        return self.join_of(())

    @property
    def top(self) -> int | None:
        return self.meet_of(())

    def _tables(self):
        if self._meet is None:
            n = self.size
            m = np.full((n, n), -1, dtype=np.int64)
            j = np.full((n, n), -1, dtype=np.int64)
            for x, y in product(range(n), repeat=2):
                a = self.meet_of((x, y))
                b = self.join_of((x, y))
                m[x, y] = -1 if a is None else a
                j[x, y] = -1 if b is None else b
            m.setflags(write=False)
            j.setflags(write=False)
            self._meet, self._join = m, j
        return self._meet, self._join

    @property
    def meet_table(self) -> np.ndarray:
        """n x n table of binary meets, -1 where the meet is missing."""
        return self._tables()[0]

    @property
    def join_table(self) -> np.ndarray:
        return self._tables()[1]

    def is_lattice(self) -> bool:
        m, j = self._tables()
        return self.size > 0 and bool((m >= 0).all() and (j >= 0).all())

    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())

    def covers(self) -> list[tuple[int, int]]:
        """Hasse edges (x, y) with x < y and nothing strictly between."""
        n = self.size
        lt = self.leq & ~np.eye(n, dtype=bool)
        # x < z < y for some z
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        cov = lt & ~between
        return [(int(x), int(y)) for x, y in np.argwhere(cov)]


def _check_order(rel: np.ndarray) -> None:
    n = rel.shape[0]
    diag = np.flatnonzero(~np.diag(rel))
    if diag.size:
        x = int(diag[0])
        raise NotReflexive(f"not reflexive at {x}", (x,))
    anti = np.argwhere(rel & rel.T & ~np.eye(n, dtype=bool))
    if anti.size:
        x, y = map(int, anti[0])
        raise NotAntisymmetric(f"{x} <= {y} and {y} <= {x}", (x, y))
    # x <= y and y <= z but not x <= z
    trans = (rel.astype(np.int64) @ rel.astype(np.int64) > 0) & ~rel
    bad = np.argwhere(trans)
    if bad.size:
        x, z = map(int, bad[0])
        y = int(np.flatnonzero(rel[x] & rel[:, z])[0])
        raise NotTransitive(f"{x} <= {y} <= {z} but not {x} <= {z}", (x, y, z))


def validate_poset(relation, names: Sequence[str] | None = None) -> FinitePoset:
    """Check that ``relation`` is a partial order and wrap it. No closure is applied."""
    return FinitePoset(relation, names)


def from_cover_pairs(n: int, pairs: Iterable[tuple[int, int]],
                     names: Sequence[str] | None = None) -> FinitePoset:
    """Reflexive-transitive closure of a list of strict pairs (x below y)."""
    rel = np.eye(n, dtype=bool)
    for x, y in pairs:
        rel[x, y] = True
    for k in range(n):  # Warshall
        rel |= rel[:, k:k + 1] & rel[k:k + 1, :]
    return FinitePoset(rel, names)


def chain(n: int, names: Sequence[str] | None = None) -> FinitePoset:
    idx = np.arange(n)
    return FinitePoset(idx[:, None] <= idx[None, :], names, _checked=True)


def antichain(n: int, names: Sequence[str] | None = None) -> FinitePoset:
    return FinitePoset(np.eye(n, dtype=bool), names, _checked=True)


def meet(p: FinitePoset, x: int, y: int) -> int:
    m = p.meet_of((x, y))
    if m is None:
        raise NoBound("meet", (x, y))
    return m


def join(p: FinitePoset, x: int, y: int) -> int:
    j = p.join_of((x, y))
    if j is None:
        raise NoBound("join", (x, y))
    return j


def dualize(p: FinitePoset) -> FinitePoset:
    return FinitePoset(p.leq.T.copy(), p.names, _checked=True)


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(p: FinitePoset, labels: Sequence[str] | None = None, name: str = "poset") -> str:
    """Hasse diagram in Graphviz syntax, edges pointing upwards."""
    if labels is None:
        labels = [p.name(i) for i in range(p.size)]
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;"]
    for i in range(p.size):
        lines.append(f"  {_dot_id(labels[i])};")
    for x, y in p.covers():
        lines.append(f"  {_dot_id(labels[x])} -> {_dot_id(labels[y])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def order_isomorphisms(p: FinitePoset, q: FinitePoset, limit: int | None = None):
    """Yield order isomorphisms p -> q as tuples (brute force with pruning)."""
    n = p.size
    if q.size != n:
        return
    # cheap invariant: number of elements below / above
    pdeg = [(int(p.leq[:, i].sum()), int(p.leq[i].sum())) for i in range(n)]
    qdeg = [(int(q.leq[:, i].sum()), int(q.leq[i].sum())) for i in range(n)]
    if sorted(pdeg) != sorted(qdeg):
        return
    cands = [[j for j in range(n) if qdeg[j] == pdeg[i]] for i in range(n)]
    found = 0
    f = [-1] * n
    used = [False] * n

    def extend(i):
        nonlocal found
        if i == n:
            found += 1
            yield tuple(f)
            return
        for j in cands[i]:
            if used[j]:
                continue
            if all(p.leq[k, i] == q.leq[f[k], j] and p.leq[i, k] == q.leq[j, f[k]] for k in range(i)):
                f[i] = j
                used[j] = True
                yield from extend(i + 1)
                used[j] = False
                f[i] = -1
                if limit is not None and found >= limit:
                    return

    yield from extend(0)
