from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from bimlab.clauses import (Ineq, NotLinear, NotSlMonoidal, ParseError, Term, UniversalClause,
                            UnsupportedOperator, eval_clause, is_linear, knotted_laws,
                            knotted_subreduct, linearize, monomials, parse, parse_clause,
                            parse_ineq, parse_term, satisfies_translation, sl_monoids,
                            subreduct_oracle, translate_any, translate_subreduct)
from bimlab.completion import dm_completion
from bimlab.constructions import catalog

from conftest import SMALL

QUASI = "a*f <= b+e & c*f <= d+e => a*c*f <= b+d+e"
LINEARITY = "a*h <= b+g & c*f <= d+e => a*f <= b+e | c*h <= d+g"


def rename(c: UniversalClause, m: dict[str, str]) -> UniversalClause:
    def t(x: Term) -> Term:
        if x.op == "var":
            return Term("var", (), m[x.name])
        return Term(x.op, tuple(t(a) for a in x.args), x.name)
    return UniversalClause(tuple(Ineq(t(i.lhs), i.rel, t(i.rhs)) for i in c.premises),
                           tuple(Ineq(t(i.lhs), i.rel, t(i.rhs)) for i in c.conclusions))


def same_up_to_renaming(c1: UniversalClause, c2: UniversalClause) -> bool:
    v1, v2 = c1.variables(), c2.variables()
    if len(v1) != len(v2):
        return False
    target = ({str(i) for i in c2.premises}, {str(i) for i in c2.conclusions})
    for perm in permutations(v2):
        r = rename(c1, dict(zip(v1, perm)))
        if ({str(i) for i in r.premises}, {str(i) for i in r.conclusions}) == target:
            return True
    return False


def test_parse_and_print_round_trip():
    for text in ["~x*y+z v a ^ b -> c -> d", "x*(y+z) <= x*y+z", "1 v x ^ 0"]:
        t = parse(text)
        assert parse(str(t)) == t


def test_precedence():
    t = parse_term("x v y ^ z*w + u")
    assert t.op == "v" and t.args[1].op == "^"
    assert parse_term("a -> b -> c").args[1].op == "->"


def test_clause_syntax():
    c = parse_clause("x <= y & y <= z => x <= z | z <= x")
    assert len(c.premises) == 2 and len(c.conclusions) == 2
    assert c.variables() == ["x", "y", "z"]
    assert isinstance(parse("x = y"), UniversalClause)
    assert parse_ineq("x >= y").as_le() == parse_ineq("y <= x")


@pytest.mark.parametrize("text,pos", [("x <=", 4), ("x <= y)", 6), ("x # y", 2), ("x <= 2", 5)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_eval_examples():
    assert eval_clause(catalog("H5c"), "x*y <= x v y")
    assert eval_clause(catalog("H5c"), "x <= x*x")
    r = eval_clause(catalog("L3"), "x <= x*x")
    assert not r and r.witness == {"x": "a"}


def test_complement_needs_involution():
    with pytest.raises(UnsupportedOperator):
        eval_clause(catalog("L3"), "~x <= x")
    assert eval_clause(catalog("boolean:1"), "x ^ ~x <= 0")


def test_partial_join_is_reported():
    with pytest.raises(UnsupportedOperator):
        eval_clause(catalog("cyclic:2"), "x v y <= x v y")


def test_valuation_must_cover_the_variables():
    with pytest.raises(KeyError):
        eval_clause(catalog("L3"), "x <= y", {"x": "a"})


def test_linearize_examples():
    assert [str(i) for i in linearize("x*x <= x")] == ["x1*x2 <= x1 v x2"]
    assert [str(i) for i in linearize("x <= 1")] == ["x <= 1"]
    assert [str(i) for i in linearize("x*x*y <= x v y")] == ["x1*x2*y <= x1 v x2 v y"]
    # a join on the left splits into one inequality per component
    assert len(linearize("x v y*y <= x")) == 2


def test_linearize_rejects_other_operators():
    with pytest.raises(NotSlMonoidal):
        linearize("x + x <= x")
    with pytest.raises(NotSlMonoidal):
        monomials(parse_term("x ^ y"))


def test_is_linear():
    assert is_linear(parse_ineq("x*y <= x v y"))
    assert not is_linear(parse_ineq("x*x <= x"))


INEQS = ["x*x <= x", "x <= x*x", "x*x*y <= x v y", "x*y <= x*x v y*y", "x*x <= 1",
         "x*(y v 1) <= x*x v y", "x*x*x <= x*x"]


@pytest.fixture(scope="module")
def slm():
    return sl_monoids(3)


def test_sl_monoid_enumeration(slm):
    assert len(slm) == 15
    assert all(len({tuple(m.mul.ravel()) for m in slm if m.n == k}) > 0 for k in (1, 2, 3))


@pytest.mark.parametrize("text", INEQS)
def test_linearize_preserves_satisfaction(slm, text):
    lin = linearize(text)
    for M in slm:
        assert bool(eval_clause(M, text)) == all(eval_clause(M, i) for i in lin)


def test_translate_quasiequation():
    got = translate_subreduct("x*y <= x v y")
    assert same_up_to_renaming(got, parse_clause(QUASI))


def test_translate_linearity_clause():
    got = translate_subreduct("x <= y | y <= x")
    assert same_up_to_renaming(got, parse_clause(LINEARITY))
    assert str(got) == LINEARITY


def test_translate_tautology():
    got = translate_subreduct("x <= x")
    assert same_up_to_renaming(got, parse_clause("a*f <= b+e => a*f <= b+e"))


def test_translate_requires_linear_input():
    with pytest.raises(NotLinear):
        translate_subreduct("x*x <= x")
    got = translate_any("x*x <= x")
    assert len(got) == 1 and same_up_to_renaming(got[0], parse_clause(QUASI))


def test_linearity_fails_on_l3_at_the_reference_valuation():
    L3 = catalog("L3")
    lin = translate_subreduct("x <= y | y <= x")
    val = dict(a="1", b="1", c="a", d="b", e="b", f="a", g="1", h="1")
    assert not eval_clause(L3, lin, val)
    assert not eval_clause(L3, lin)
    assert not subreduct_oracle(L3, "x <= y | y <= x")


def test_one_element_algebra_satisfies_everything():
    A = catalog("chain:1:0")
    for text in ["x <= y | y <= x", "x*y <= x v y", "x*x*x <= x"]:
        assert subreduct_oracle(A, text)
        assert satisfies_translation(A, text)


@pytest.mark.parametrize("name", SMALL)
def test_translation_agrees_with_the_completion(name):
    A = catalog(name)
    C = dm_completion(A, verify=False)
    for text in ["x*y <= x v y", "x <= y | y <= x"]:
        assert satisfies_translation(A, text) == subreduct_oracle(A, text, C)


@pytest.mark.parametrize("name", SMALL)
def test_preservation_of_linear_inequalities(name):
    """A linear inequality holding on the generators a*~b holds on the whole completion."""
    A = catalog(name)
    res = dm_completion(A, verify=False)
    C = res.algebra
    gens = sorted({i for i, g in enumerate(res.gen_index) if len(g) == 1})
    for text in ["x*y <= x v y", "x <= x*x", "x*y*z <= x v y v z"]:
        clause = parse_clause(text)
        vs = clause.variables()
        on_gens = all(eval_clause(C, clause, dict(zip(vs, combo)))
                      for combo in _tuples(gens, len(vs)))
        if on_gens:
            assert eval_clause(C, clause)


def _tuples(xs, k):
    from itertools import product
    return product(xs, repeat=k)


def test_knotted_examples():
    assert not knotted_subreduct(catalog("L3"))
    assert knotted_subreduct(catalog("sugihara:3"))
    assert knotted_subreduct(catalog("H5c"))
    assert len(knotted_laws("x<=x^n", 3)) == 2
    with pytest.raises(ValueError):
        knotted_laws("x<=x^n", 1)
    with pytest.raises(ValueError):
        knotted_laws("sideways", 2)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [2, 3])
def test_knotted_agrees_with_the_completion(name, n):
    A = catalog(name)
    C = dm_completion(A, verify=False).algebra
    power = "*".join(["x"] * n)
    assert knotted_subreduct(A, "x<=x^n", n) == bool(eval_clause(C, f"x <= {power}"))


@given(st.sampled_from(SMALL), st.data())
def test_single_valuation_agrees_with_full_search(name, data):
    A = catalog(name)
    clause = parse_clause("x*y <= x + y | y <= x")
    r = eval_clause(A, clause)
    if not r:
        assert not eval_clause(A, clause, r.witness)
    val = {v: A.label(data.draw(st.integers(0, A.n - 1))) for v in clause.variables()}
    if r:
        assert eval_clause(A, clause, val)
