from itertools import product

import numpy as np
import pytest

from bimlab.algebra import AlgebraError, check_morphism, find_isomorphism, validate
from bimlab.completion import (ClosedSet, FrameAxiomViolation, IncompatibleFIAlpha, SizeCap,
                               _le4, bits_of, check_frame, check_funayama, closure_left,
                               closure_right, compare_generators, dm_completion,
                               dm_completion_bisemigroup, enumerate_closed_sets,
                               frame_of_bimonoid, frame_of_bisemigroup, galois_algebra,
                               generator_values, is_faithful, mask_of, polar_left, polar_right)
from bimlab.constructions import catalog, meet_monoid, trivial_bimonoid
from bimlab.order import chain

from conftest import SMALL


@pytest.fixture(scope="module")
def l3():
    return catalog("L3")


def pair(A, a, b):
    return A.element(a) * A.n + A.element(b)


def test_bitset_helpers():
    assert bits_of(0b1011) == [0, 1, 3]
    assert mask_of([3, 0, 1]) == 0b1011
    X = ClosedSet(0b101)
    assert 2 in X and 1 not in X and len(X) == 2 and list(X) == [0, 2]
    assert X <= ClosedSet(0b111)


def test_w_of_l3_relation(l3):
    W = frame_of_bimonoid(l3)
    one, zero = l3.one, l3.zero
    a, b = l3.element("a"), l3.element("b")
    # <a,0> [= <b,1> iff a*1 <= 0+b, false since b < a
    assert not W.sq[a * 3 + zero, b * 3 + one]
    assert W.sq[W.lam[l3.one], W.rho[l3.one]]
    assert is_faithful(W)


@pytest.mark.parametrize("name", SMALL)
def test_nuclearity_spot_check(name):
    """<a,b> o <c,d> [= <e,f> iff a*c*f <= b+d+e."""
    A = catalog(name)
    W = frame_of_bimonoid(A)
    M, S, n = A.mul, A.add, A.n
    for a, b, c, d, e, f in product(range(n), repeat=6) if n <= 3 else []:
        lhs = W.sq[W.circ[a * n + b, c * n + d], e * n + f]
        assert lhs == A.leq[M[M[a, c], f], S[S[b, d], e]]
    assert check_frame(W)


def test_broken_frame_is_caught(l3):
    W = frame_of_bimonoid(l3)
    sq = W.sq.copy()
    sq[W.lam[0], W.rho[0]] = False
    W.sq = sq
    r = check_frame(W)
    assert not r


def test_closure_extremes(l3):
    W = frame_of_bimonoid(l3)
    least = closure_right(W, [])
    masks = enumerate_closed_sets(W)
    assert least.bits == masks[0]
    full = (1 << W.nL) - 1
    assert closure_right(W, range(W.nL)).bits == full
    assert closure_left(W, range(W.nR)) == polar_right(W, polar_left(W, range(W.nR)))


def test_closure_of_an_embedded_point(l3):
    W = frame_of_bimonoid(l3)
    a = l3.element("a")
    got = set(closure_right(W, [W.lam[a]]))
    expected = {x for x in range(W.nL) if W.sq[x, W.rho[a]]}
    assert got == expected


@pytest.mark.parametrize("name", ["L3", "H5c", "chain:3:1"])
def test_closure_laws(name):
    """Extensive, idempotent and isotone on random subsets."""
    A = catalog(name)
    W = frame_of_bimonoid(A)
    rng = np.random.default_rng(0)
    for _ in range(40):
        X = set(rng.choice(W.nL, size=int(rng.integers(0, 4)), replace=False).tolist())
        Y = X | set(rng.choice(W.nL, size=2, replace=False).tolist())
        cX = closure_right(W, X)
        assert all(x in cX for x in X)
        assert closure_right(W, cX).bits == cX.bits
        assert cX <= closure_right(W, Y)


def test_size_cap(l3):
    with pytest.raises(SizeCap):
        dm_completion(l3, cap=4)


def test_l3_completion(l3):
    res = dm_completion(l3)
    C = res.algebra
    assert C.n == 8 and C.name == "L3^D"
    assert all(res.checks.values())
    assert sorted(res.labels) == sorted(["b", "a", "a*~a", "a*~b", "1", "1 v a*~b", "~a", "~b"])
    fixed = sorted(res.labels[i] for i in range(C.n) if C.comp[i] == i)
    assert fixed == ["1", "a*~b"]
    # a*~b and 1 are the only incomparable pair
    lab = res.labels
    incomparable = [(lab[x], lab[y]) for x, y in product(range(8), repeat=2)
                    if x < y and not C.leq[x, y] and not C.leq[y, x]]
    assert len(incomparable) == 1 and set(incomparable[0]) == {"a*~b", "1"}


def test_completion_needs_a_commutative_bimonoid():
    with pytest.raises(AlgebraError):
        dm_completion(meet_monoid(chain(2)))


def test_unquotiented_frame_gives_the_same_algebra(l3):
    W = frame_of_bimonoid(l3)
    r1 = galois_algebra(W, quotient=True)
    r2 = galois_algebra(W, quotient=False)
    iso = find_isomorphism(r1.algebra, r2.algebra, {r1.embed[a]: r2.embed[a] for a in range(3)})
    assert iso is not None


@pytest.mark.parametrize("name,size", [("H5c", 10), ("H5one", 11), ("M3", 27), ("N5", 15),
                                       ("diamond_fig5", 5), ("cyclic:2", 4), ("chain:4:0", 8),
                                       ("dchain:5", 16), ("boolean:2", 4)])
def test_completion_sizes(name, size):
    res = dm_completion(catalog(name))
    assert res.size == size
    assert all(res.checks.values())


def test_complete_algebras_are_fixed():
    """A finite complemented lattice is its own completion."""
    for name in ["boolean:2", "sugihara:5", "diamond_fig5"]:
        A = catalog(name)
        res = dm_completion(A)
        assert res.size == A.n
        assert check_morphism(res.embed, A, res.algebra, embedding=True)


def test_compare_generators_on_l3(l3):
    res = dm_completion(l3)
    C = res.algebra
    gm = generator_values(res, l3, "mul")
    ga = generator_values(res, l3, "add")
    R = _le4(l3)
    for a, b, c, d in product(range(3), repeat=4):
        for s1, g1 in (("mul", gm), ("add", ga)):
            for s2, g2 in (("mul", gm), ("add", ga)):
                assert compare_generators(l3, (a, b, s1), (c, d, s2), R) == C.leq[g1[a, b], g2[c, d]]


def test_compare_generators_rejects_bad_side(l3):
    with pytest.raises(ValueError):
        compare_generators(l3, (0, 0, "mul"), (0, 0, "join"))


def test_funayama_on_m3_and_n5():
    for name, k in (("M3", 6), ("N5", 2)):
        rep = check_funayama(catalog(name))
        assert not rep.all_admissible and not rep.all_preserved
        assert len(rep.non_admissible) == k
        assert rep.non_admissible == rep.not_preserved
        assert rep


def test_funayama_on_distributive_examples():
    for name in ["H5c", "dchain:4", "L3"]:
        rep = check_funayama(catalog(name))
        assert rep.all_admissible and rep.all_preserved


@pytest.fixture(scope="module")
def two():
    return trivial_bimonoid(meet_monoid(chain(2)))


@pytest.mark.parametrize("F,I,alpha,size", [((), (), "-", 8), ((), (), "+", 9),
                                            ((1,), (), "-", 6), ((), (0,), "-", 6),
                                            ((1,), (0,), "-", 4)])
def test_bisemigroup_completion(two, F, I, alpha, size):
    res = dm_completion_bisemigroup(two, F, I, alpha)
    assert res.size == size
    assert all(res.checks.values()), res.checks
    assert check_frame(frame_of_bisemigroup(two, F, I, alpha))


def test_bisemigroup_parameter_errors(two):
    with pytest.raises(IncompatibleFIAlpha):
        frame_of_bisemigroup(two, (0, 1), (), "-")   # 0 is not a left unit upper bound
    with pytest.raises(IncompatibleFIAlpha):
        frame_of_bisemigroup(two, (1,), (1,), "+")   # I is not a downset
    with pytest.raises(ValueError):
        frame_of_bisemigroup(two, (), (), "x")


def test_frame_rejects_non_bimonoids():
    with pytest.raises(AlgebraError):
        frame_of_bimonoid(meet_monoid(chain(2)))


def test_frame_violation_type(l3):
    W = frame_of_bimonoid(l3)
    circ = W.circ.copy()
    circ[0, 1], circ[1, 0] = circ[1, 0], (circ[1, 0] + 1) % W.nL
    W.circ = circ
    with pytest.raises(FrameAxiomViolation):
        galois_algebra(W, check=True)
