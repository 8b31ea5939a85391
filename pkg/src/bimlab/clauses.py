"""Terms, universal clauses, model checking, linearization and the
translation of positive clauses into the bimonoid signature."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .algebra import InvolutiveAlgebra, OrderedAlgebra


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedOperator(ValueError):
    pass


class NotLinear(ValueError):
    pass


class NotSlMonoidal(ValueError):
    pass


# ---------------------------------------------------------------- terms

# binding strength, higher binds tighter
PREC = {"->": 1, "v": 2, "^": 3, "+": 4, "*": 5}


@dataclass(frozen=True)
class Term:
    op: str                       # var, const, ~, *, +, v, ^, ->
    args: tuple = ()
    name: str = ""

    def __str__(self) -> str:
        return _show(self, 0)

    def variables(self) -> set[str]:
        if self.op == "var":
            return {self.name}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def ops(self) -> set[str]:
        out = {self.op}
        for a in self.args:
            out |= a.ops()
        return out


def var(name: str) -> Term:
    return Term("var", name=name)


ONE = Term("const", name="1")
ZERO = Term("const", name="0")


def _show(t: Term, outer: int) -> str:
    if t.op in ("var", "const"):
        return t.name
    if t.op == "~":
        return "~" + _show(t.args[0], 6)
    p = PREC[t.op]
    if t.op == "->":
        s = f"{_show(t.args[0], p + 1)} -> {_show(t.args[1], p)}"
    else:
        sep = f" {t.op} " if t.op in ("v", "^") else t.op
        s = sep.join(_show(a, p) for a in _flatten(t))
    return f"({s})" if p < outer else s


def _flatten(t: Term) -> list[Term]:
    out = []
    for a in t.args:
        if a.op == t.op and t.op != "->":
            out += _flatten(a)
        else:
            out.append(a)
    return out


def fold(op: str, terms: Iterable[Term], empty: Term | None = None) -> Term:
    terms = list(terms)
    if not terms:
        if empty is None:
            raise ValueError(f"empty {op}")
        return empty
    acc = terms[0]
    for t in terms[1:]:
        acc = Term(op, (acc, t))
    return acc


@dataclass(frozen=True)
class Ineq:
    lhs: Term
    rel: str                      # <=, >=, =
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} {self.rel} {self.rhs}"

    def variables(self) -> set[str]:
        return self.lhs.variables() | self.rhs.variables()

    def as_le(self) -> "Ineq":
        if self.rel == ">=":
            return Ineq(self.rhs, "<=", self.lhs)
        return self


@dataclass(frozen=True)
class UniversalClause:
    """premises => conclusions (a disjunction); variables universally quantified."""

    premises: tuple[Ineq, ...]
    conclusions: tuple[Ineq, ...]

    def __str__(self) -> str:
        body = " | ".join(str(c) for c in self.conclusions)
        if not self.premises:
            return body
        return " & ".join(str(p) for p in self.premises) + " => " + body

    def variables(self) -> list[str]:
        vs: set[str] = set()
        for i in self.premises + self.conclusions:
            vs |= i.variables()
        return sorted(vs, key=natural_key)

    @property
    def is_positive(self) -> bool:
        return not self.premises


def natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(<=|>=|=>|->|[=&|()*+^~]|[a-z][a-z0-9]*|[01](?![0-9]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", j)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise ParseError(f"expected {want!r}, found {tok or 'end of input'!r}", self.pos())
        self.i += 1
        return tok

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r}", self.pos())

    # term := imp
    def term(self) -> Term:
        return self.binary(1)

    def binary(self, level: int) -> Term:
        if level > 5:
            return self.unary()
        left = self.binary(level + 1)
        op = {1: "->", 2: "v", 3: "^", 4: "+", 5: "*"}[level]
        if op == "->":
            if self.peek() == "->":
                self.take()
                return Term("->", (left, self.binary(1)))
            return left
        while self.peek() == op:
            self.take()
            left = Term(op, (left, self.binary(level + 1)))
        return left

    def unary(self) -> Term:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Term("~", (self.unary(),))
        if tok == "(":
            self.take()
            t = self.term()
            self.take(")")
            return t
        if tok in ("0", "1"):
            self.take()
            return ONE if tok == "1" else ZERO
        if tok is not None and tok[0].isalpha() and tok != "v":
            self.take()
            return var(tok)
        raise ParseError(f"expected a term, found {tok or 'end of input'!r}", self.pos())

    def ineq(self) -> Ineq:
        lhs = self.term()
        rel = self.peek()
        if rel not in ("<=", ">=", "="):
            raise ParseError(f"expected a relation, found {rel or 'end of input'!r}", self.pos())
        self.take()
        return Ineq(lhs, rel, self.term())

    def clause(self) -> UniversalClause:
        first = [self.ineq()]
        while self.peek() == "&":
            self.take()
            first.append(self.ineq())
        if self.peek() == "=>":
            self.take()
            concl = [self.ineq()]
            while self.peek() == "|":
                self.take()
                concl.append(self.ineq())
            return UniversalClause(tuple(first), tuple(concl))
        if len(first) > 1:
            raise ParseError("premises need '=>'", self.pos())
        while self.peek() == "|":
            self.take()
            first.append(self.ineq())
        return UniversalClause((), tuple(first))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_ineq(text: str) -> Ineq:
    p = _Parser(text)
    t = p.ineq()
    p.done()
    return t


def parse_clause(text: str) -> UniversalClause:
    p = _Parser(text)
    c = p.clause()
    p.done()
    return c


def parse(text: str) -> Term | UniversalClause:
    """A clause when the text contains a relation, otherwise a term."""
    if re.search(r"<=|>=|(?<![-=<>])=(?!>)", text):
        return parse_clause(text)
    return parse_term(text)


# ---------------------------------------------------------------- evaluation

@dataclass
class EvalResult:
    holds: bool
    witness: dict[str, str] | None
    variables: list[str]

    def __bool__(self) -> bool:
        return self.holds


def _table(alg: OrderedAlgebra, op: str) -> np.ndarray:
    if op == "*":
        t = alg.mul
    elif op == "+":
        t = alg.add
    elif op == "v":
        t = alg.join_table
    elif op == "^":
        t = alg.meet_table
    else:
        t = alg.residual_table() if alg.mul is not None else None
    if t is None:
        raise UnsupportedOperator(f"operator {op!r} is not available")
    return t


def eval_term(alg: OrderedAlgebra, t: Term, env: Mapping[str, np.ndarray]) -> np.ndarray:
    if t.op == "var":
        return env[t.name]
    if t.op == "const":
        u = alg.one if t.name == "1" else alg.zero
        if u is None:
            raise UnsupportedOperator(f"constant {t.name} is not available")
        return np.asarray(u)
    if t.op == "~":
        if not isinstance(alg, InvolutiveAlgebra):
            raise UnsupportedOperator("~ needs an involutive algebra")
        return alg.comp[eval_term(alg, t.args[0], env)]
    tab = _table(alg, t.op)
    out = tab[eval_term(alg, t.args[0], env), eval_term(alg, t.args[1], env)]
    if (np.asarray(out) < 0).any():
        raise UnsupportedOperator(f"operator {t.op!r} is partial on this algebra")
    return out


def _eval_ineq(alg: OrderedAlgebra, i: Ineq, env) -> np.ndarray:
    l = eval_term(alg, i.lhs, env)
    r = eval_term(alg, i.rhs, env)
    if i.rel == "<=":
        return alg.leq[l, r]
    if i.rel == ">=":
        return alg.leq[r, l]
    return np.asarray(l) == np.asarray(r)


def _as_clause(c) -> UniversalClause:
    if isinstance(c, str):
        c = parse_clause(c)
    if isinstance(c, Ineq):
        c = UniversalClause((), (c,))
    return c


def eval_clause(alg: OrderedAlgebra, clause, valuation: Mapping[str, object] | None = None) -> EvalResult:
    """Check a clause under every valuation, or only under ``valuation``.

    The witness is the first falsifying valuation in lexicographic order of
    the variables (sorted naturally).
    """
    clause = _as_clause(clause)
    vs = clause.variables()
    k = len(vs)
    if valuation is not None:
        missing = [v for v in vs if v not in valuation]
        if missing:
            raise KeyError(f"valuation misses {missing}")
        env = {v: np.asarray(alg.element(valuation[v])) for v in vs}
    else:
        env = {}
        for i, v in enumerate(vs):
            shape = [1] * k
            shape[i] = alg.n
            env[v] = np.arange(alg.n).reshape(shape)
    shape = (alg.n,) * k if valuation is None else ()
    ok = np.zeros(shape, dtype=bool)
    for c in clause.conclusions:
        ok = ok | _eval_ineq(alg, c, env)
    for p in clause.premises:
        ok = ok | ~_eval_ineq(alg, p, env)
    ok = np.broadcast_to(ok, shape)
    if ok.all():
        return EvalResult(True, None, vs)
    if valuation is not None:
        wit = {v: alg.label(int(env[v])) for v in vs}
    else:
        idx = np.argwhere(~ok)[0]
        wit = {v: alg.label(int(i)) for v, i in zip(vs, idx)}
    return EvalResult(False, wit, vs)


# ---------------------------------------------------------------- linearization

Monomial = tuple[str, ...]       # sorted variable names; () is 1


def monomials(t: Term) -> list[Monomial]:
    """Join of monomials equal to t over {v, *, 1}, duplicates removed in order."""
    if t.op == "var":
        res = [(t.name,)]
    elif t.op == "const":
        if t.name != "1":
            raise NotSlMonoidal("only the constant 1 is allowed")
        res = [()]
    elif t.op == "v":
        res = monomials(t.args[0]) + monomials(t.args[1])
    elif t.op == "*":
        res = [tuple(sorted(m + n, key=natural_key))
               for m in monomials(t.args[0]) for n in monomials(t.args[1])]
    else:
        raise NotSlMonoidal(f"operator {t.op!r} is outside v, *, 1")
    out: list[Monomial] = []
    for m in res:
        if m not in out:
            out.append(m)
    return out


def monomial_term(m: Monomial) -> Term:
    return fold("*", [var(x) for x in m], ONE)


def join_term(ms: Iterable[Monomial]) -> Term:
    return fold("v", [monomial_term(m) for m in ms])


def is_linear(i: Ineq) -> bool:
    """Left side a product of distinct variables (or 1), right side over v, *, 1."""
    i = i.as_le()
    if i.rel != "<=":
        return False
    try:
        left = monomials(i.lhs)
        monomials(i.rhs)
    except NotSlMonoidal:
        return False
    return len(left) == 1 and len(set(left[0])) == len(left[0])


def _fresh(base: str, k: int, taken: set[str]) -> list[str]:
    start = 1
    while True:
        names = [f"{base}{start + i}" for i in range(k)]
        if not taken & set(names):
            return names
        start += k


def linearize(ineq) -> list[Ineq]:
    """Equivalent set of linear inequalities over semilattice-ordered monoids."""
    if isinstance(ineq, str):
        ineq = parse_ineq(ineq)
    ineq = ineq.as_le()
    if ineq.rel != "<=":
        raise NotSlMonoidal("equations must be split into two inequalities first")
    right = monomials(ineq.rhs)
    taken = ineq.variables()
    out: list[Ineq] = []
    for m in monomials(ineq.lhs):
        counts: dict[str, int] = {}
        for x in m:
            counts[x] = counts.get(x, 0) + 1
        rename = {x: _fresh(x, k, taken) for x, k in counts.items() if k > 1}
        left: list[str] = []
        for x in sorted(counts, key=natural_key):
            left += rename.get(x, [x])
        new_right: list[Monomial] = []
        for r in right:
            # each right occurrence of x becomes x1 v ... v xk
            choices = [rename.get(x, [x]) for x in r]
            for pick in product(*choices):
                mono = tuple(sorted(pick, key=natural_key))
                if mono not in new_right:
                    new_right.append(mono)
        res = Ineq(monomial_term(tuple(left)), "<=", join_term(new_right))
        if res not in out:
            out.append(res)
    return out


# ---------------------------------------------------------------- translation

def letters() -> Iterable[str]:
    """a, b, ..., z without v, then a1, b1, ..."""
    alpha = [c for c in "abcdefghijklmnopqrstuwxyz"]
    yield from alpha
    k = 1
    while True:
        for c in alpha:
            yield f"{c}{k}"
        k += 1


def _mul_side(xs: list[str], extra: str) -> Term:
    return fold("*", [var(x) for x in xs + [extra]])


def _add_side(xs: list[str], extra: str) -> Term:
    return fold("+", [var(x) for x in xs + [extra]])


def translate_subreduct(clause) -> UniversalClause:
    """Bimonoidal clause equivalent, on A, to the linear positive clause on its completion.

    A variable x becomes a*~b for a fresh pair (a, b); each disjunct t <= u
    is tested against every meet generator e+~f above u.
    """
    clause = _as_clause(clause)
    if clause.premises:
        raise NotLinear("only positive clauses (no premises) can be translated")
    concl = [c.as_le() for c in clause.conclusions]
    for c in concl:
        if c.rel != "<=" or not is_linear(c):
            raise NotLinear(f"{c} is not a linear inequality; linearize it first")
    gen = letters()
    pairs = {v: (next(gen), next(gen)) for v in clause.variables()}
    fresh = [(next(gen), next(gen)) for _ in concl]
    premises: list[tuple] = []
    conclusions: list[Ineq] = []
    order = {v: i for i, v in enumerate(clause.variables())}
    for k, (c, (e, f)) in enumerate(zip(concl, fresh)):
        for m in monomials(c.rhs):
            p = Ineq(_mul_side([pairs[x][0] for x in m], f), "<=",
                     _add_side([pairs[x][1] for x in m], e))
            premises.append(([order[x] for x in m], k, p))
        (left,) = monomials(c.lhs)
        conclusions.append(Ineq(_mul_side([pairs[x][0] for x in left], f), "<=",
                                _add_side([pairs[x][1] for x in left], e)))
    premises.sort(key=lambda t: (t[0], t[1]))
    prem = []
    for _, _, p in premises:
        if p not in prem:
            prem.append(p)
    return UniversalClause(tuple(prem), tuple(conclusions))


def translate_any(clause) -> list[UniversalClause]:
    """Translate after linearizing a single non-linear inequality."""
    clause = _as_clause(clause)
    if not clause.premises and len(clause.conclusions) == 1 and not is_linear(clause.conclusions[0]):
        return [translate_subreduct(UniversalClause((), (i,))) for i in linearize(clause.conclusions[0])]
    return [translate_subreduct(clause)]


# ---------------------------------------------------------------- subreducts

def subreduct_oracle(A: OrderedAlgebra, clause, completion=None) -> bool:
    """Evaluate the original clause on the complemented DM completion of A."""
    from .completion import dm_completion

    C = (completion or dm_completion(A, verify=False)).algebra
    return eval_clause(C, clause).holds


def satisfies_translation(A: OrderedAlgebra, clause) -> bool:
    return all(eval_clause(A, c).holds for c in translate_any(clause))


KNOTTED = {
    "x<=x^n": ("x <= {p}", "{s} <= x"),
    # experimental: 1 <= x^n together with its complement-dual
    "1<=x^n": ("1 <= {p}", "{s} <= 0"),
}


def knotted_laws(direction: str, n: int) -> list[UniversalClause]:
    if n < 2:
        raise ValueError("n must be at least 2")
    if direction not in KNOTTED:
        raise ValueError(f"direction must be one of {sorted(KNOTTED)}")
    p = "*".join(["x"] * n)
    s = "+".join(["x"] * n)
    return [parse_clause(f.format(p=p, s=s)) for f in KNOTTED[direction]]


def knotted_subreduct(A: OrderedAlgebra, direction: str = "x<=x^n", n: int = 2) -> bool:
    """Whether A satisfies the bimonoidal axioms for subreducts of the knotted class."""
    return all(eval_clause(A, c).holds for c in knotted_laws(direction, n))


# ---------------------------------------------------------------- small models

def sl_monoids(max_size: int = 3) -> list[OrderedAlgebra]:
    """All commutative monoids on join-semilattices with <= max_size elements
    whose product distributes over binary joins (up to the enumeration, not up to iso)."""
    from .order import FinitePoset, order_isomorphisms

    out = []
    for n in range(1, max_size + 1):
        posets = []
        for bits in product([False, True], repeat=n * (n - 1) // 2):
            rel = np.eye(n, dtype=bool)
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            for (i, j), b in zip(pairs, bits):
                rel[i, j] = b
            try:
                p = FinitePoset(rel)
            except ValueError:
                continue
            if (p.join_table < 0).any():
                continue
            if any(next(order_isomorphisms(p, q, 1), None) is not None for q in posets):
                continue
            posets.append(p)
        for p in posets:
            J = p.join_table
            cells = [(i, j) for i in range(n) for j in range(i, n)]
            for vals in product(range(n), repeat=len(cells)):
                m = np.empty((n, n), dtype=np.int64)
                for (i, j), v in zip(cells, vals):
                    m[i, j] = m[j, i] = v
                units = [u for u in range(n) if (m[u] == np.arange(n)).all()]
                if not units:
                    continue
                idx = np.arange(n)
                if (m[m[:, :, None], idx[None, None, :]] != m[idx[:, None, None], m[None, :, :]]).any():
                    continue
                if (m[idx[:, None, None], J[None, :, :]] != J[m[:, :, None], m[:, None, :]]).any():
                    continue
                out.append(OrderedAlgebra(p, m, units[0], lattice=False, name=f"sl{n}"))
    return out
