import numpy as np
import pytest
from hypothesis import given, strategies as st

from bimlab.order import (FinitePoset, NoBound, NotAntisymmetric, NotReflexive, NotTransitive,
                          antichain, chain, dualize, export_dot, from_cover_pairs, join, meet,
                          order_isomorphisms, validate_poset)
from bimlab.constructions import h5_poset


@st.composite
def posets(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return from_cover_pairs(n, chosen)


def test_singleton():
    p = validate_poset(np.eye(1, dtype=bool))
    assert p.size == 1


def test_h5_from_covers():
    p = h5_poset()
    assert p.size == 5
    assert p.is_lattice()
    assert sorted(p.covers()) == [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]


def test_order_errors_name_witnesses():
    with pytest.raises(NotAntisymmetric):
        validate_poset([[True, True], [True, True]])
    with pytest.raises(NotReflexive):
        validate_poset([[False, True], [False, True]])
    rel = np.eye(3, dtype=bool)
    rel[0, 1] = rel[1, 2] = True
    with pytest.raises(NotTransitive):
        validate_poset(rel)


def test_meet_and_join_in_h5():
    p = h5_poset()
    a, b = p.index("a"), p.index("b")
    assert p.name(meet(p, a, b)) == "bot"
    assert p.name(join(p, a, b)) == "c"
    assert meet(p, a, a) == a


def test_antichain_has_no_meet():
    p = antichain(2, ["u", "v"])
    with pytest.raises(NoBound):
        meet(p, 0, 1)


def test_dualize():
    p = chain(2, ["lo", "hi"])
    d = dualize(p)
    assert d.leq[1, 0] and not d.leq[0, 1]
    assert dualize(d) == p


def test_dot_of_chain_has_n_minus_1_edges():
    text = export_dot(chain(3))
    assert text.count("->") == 2


def test_isomorphisms_of_h5():
    p = h5_poset()
    isos = list(order_isomorphisms(p, p))
    assert len(isos) == 2  # identity and the a/b swap


@given(posets())
def test_meet_is_greatest_lower_bound(p):
    n = p.size
    m = p.meet_table
    for x in range(n):
        for y in range(n):
            z = m[x, y]
            if z < 0:
                continue
            assert p.leq[z, x] and p.leq[z, y]
            for w in range(n):
                if p.leq[w, x] and p.leq[w, y]:
                    assert p.leq[w, z]


@given(posets())
def test_dual_swaps_meets_and_joins(p):
    d = dualize(p)
    assert np.array_equal(d.meet_table, p.join_table)
    assert np.array_equal(d.join_table, p.meet_table)


@given(posets())
def test_dot_edges_are_the_transitive_reduction(p):
    cov = set(p.covers())
    for x, y in cov:
        assert not any(p.lt(x, z) and p.lt(z, y) for z in range(p.size))
    # the reflexive-transitive closure of the covers gives back the order
    assert from_cover_pairs(p.size, sorted(cov)) == p
    assert export_dot(p).count("->") == len(cov)
