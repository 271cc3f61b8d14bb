from fractions import Fraction
from itertools import product
from random import Random

import pytest

from cohtaylor.laws import gen_morphism, sample_base
from cohtaylor.model import (
    COH,
    NUCS,
    PCOH,
    REL,
    WCS,
    WREL_NAT,
    WREL_RAT,
    Morphism,
    NotSummable,
    atoms_obj,
    compose,
    identity,
    partial_sum,
    tensor,
    tensor_obj,
    validate,
    zero,
)
from cohtaylor.multiset import atom, pair, tag
from cohtaylor.summability import (
    lift,
    s_inj,
    s_mor,
    s_obj,
    s_proj,
    sdist,
    sigma,
    sproddist,
    sproddist_inv,
    sstr_l,
    sstr_r,
    swap,
    theta,
    witness,
)

a, b = atom("a"), atom("b")
ALL = (REL, WREL_NAT, WREL_RAT, WCS, COH, NUCS, PCOH)


def M(f):
    return f.materialize()


def total(fs, dom, cod):
    # sums in WREL over ℕ are always defined
    return M(partial_sum(fs)) if fs else zero(dom, cod)


def test_s_mor_examples():
    X, Y = atoms_obj(WREL_RAT, ["a"]), atoms_obj(WREL_RAT, ["b"])
    f = Morphism(X, Y, {(a, b): Fraction(1, 2)})
    assert s_mor(f, 1).entries == {(tag(0, a), tag(0, b)): Fraction(1, 2), (tag(1, a), tag(1, b)): Fraction(1, 2)}
    assert M(s_mor(identity(X), 3)) == M(identity(s_obj(X, 3)))
    C = atoms_obj(COH, ["a"]), atoms_obj(COH, ["b"])
    assert validate(M(s_mor(Morphism(C[0], C[1], {(a, b): 1}), 3)))


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_s_is_a_functor(model):
    for seed in range(6):
        rng = Random(seed)
        X, Y, Z = (sample_base(model, 2, rng, names=n) for n in ("ab", "pq", "uv"))
        f = gen_morphism(X, Y, Fraction(1, 2), seed)
        g = gen_morphism(Y, Z, Fraction(1, 2), seed + 1)
        assert M(s_mor(compose(g, f), 2)) == M(compose(s_mor(g, 2), s_mor(f, 2)))


def test_projections_and_injections():
    X = atoms_obj(REL, ["a", "b"])
    D = 2
    for i, j in product(range(D + 1), repeat=2):
        got = M(compose(s_proj(j, X, D), s_inj(i, X, D)))
        assert got == (M(identity(X)) if i == j else zero(X, X))


def test_theta_defining_equation():
    X = atoms_obj(WREL_NAT, ["a", "b"])
    D = 3
    SX = s_obj(X, D)
    assert theta(X, 2).get(tag(1, tag(1, a)), tag(2, a)) == 1
    for i in range(D + 1):
        lhs = M(compose(s_proj(i, X, D), theta(X, D)))
        terms = [M(compose(s_proj(i - j, X, D), s_proj(j, SX, D))) for j in range(i + 1)]
        assert lhs == total(terms, s_obj(SX, D), X)


def test_lift_and_swap_defining_equations():
    X = atoms_obj(WREL_NAT, ["a"])
    D = 2
    SX = s_obj(X, D)
    for i, j in product(range(D + 1), repeat=2):
        pp = compose(s_proj(i, X, D), compose(s_proj(j, SX, D), lift(X, D)))
        assert M(pp) == (M(s_proj(i, X, D)) if i == j else zero(SX, X))
        lhs = compose(s_proj(i, X, D), compose(s_proj(j, SX, D), swap(X, D)))
        rhs = compose(s_proj(j, X, D), s_proj(i, SX, D))
        assert M(lhs) == M(rhs)


def test_sigma_is_sum_of_projections():
    X = atoms_obj(WREL_NAT, ["a", "b"])
    D = 3
    assert M(sigma(X, D)) == total([M(s_proj(i, X, D)) for i in range(D + 1)], s_obj(X, D), X)


def test_swap_involution_and_yang_baxter():
    X = atoms_obj(REL, ["a", "b"])
    D = 2
    c = swap(X, D)
    assert M(compose(c, c)) == M(identity(c.dom))
    SX = s_obj(X, D)
    c1 = s_mor(swap(X, D), D)       # S c
    c2 = swap(SX, D)                # c_S
    lhs = compose(c1, compose(c2, c1))
    rhs = compose(c2, compose(c1, c2))
    assert M(lhs) == M(rhs)


def test_sdist_commutative_square():
    X, Y = atoms_obj(REL, ["a"]), atoms_obj(REL, ["b", "c"])
    D = 3
    SX, SY = s_obj(X, D), s_obj(Y, D)
    XY = tensor_obj(X, Y)
    # S X ⊗ S Y → S(S X ⊗ Y) → S S (X ⊗ Y) → S (X ⊗ Y), and the mirror path
    left = compose(theta(XY, D), compose(s_mor(sstr_r(X, Y, D), D), sstr_l(X, SY, D)))
    right = compose(theta(XY, D), compose(swap(XY, D), compose(s_mor(sstr_l(X, Y, D), D), sstr_r(SX, Y, D))))
    assert M(left) == M(right)
    assert M(left) == M(sdist(X, Y, D))


def test_sproddist_is_an_isomorphism():
    for k in (1, 2, 3):
        objs = [atoms_obj(REL, [n]) for n in "abc"[:k]]
        fwd, back = sproddist(objs, 2), sproddist_inv(objs, 2)
        assert M(compose(back, fwd)) == M(identity(fwd.dom))
        assert M(compose(fwd, back)) == M(identity(back.dom))


def test_witness_examples():
    X, Y = atoms_obj(REL, ["a"]), atoms_obj(REL, ["b"])
    f = Morphism(X, Y, {(a, b): 1})
    h = witness([f, f], 2)
    assert h.entries == {(a, tag(0, b)): 1, (a, tag(1, b)): 1}
    X, Y = atoms_obj(COH, ["a"]), atoms_obj(COH, ["b"])
    g = Morphism(X, Y, {(a, b): 1})
    with pytest.raises(NotSummable):
        witness([g, g], 2)


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_witness_projects_and_sums(model):
    for seed in range(10):
        rng = Random(seed)
        X, Y = sample_base(model, 2, rng), sample_base(model, 2, rng, names="pq")
        fs = [gen_morphism(X, Y, Fraction(1, 3), seed * 4 + i) for i in range(3)]
        try:
            s = partial_sum(fs)
        except NotSummable:
            with pytest.raises(NotSummable):
                witness(fs, 3)
            continue
        h = witness(fs, 3)
        for i, f in enumerate(fs):
            assert M(compose(s_proj(i, Y, 3), h)) == M(f)
        assert M(compose(sigma(Y, 3), h)) == s


def coh_s_oracle(X, x, y):
    i, p = x[1], x[2]
    j, q = y[1], y[2]
    coh = p == q or frozenset((p[1], q[1])) in X.shape[2]
    return coh and (i == j or p != q)


def test_coh_s_coherence_matches_definition():
    X = atoms_obj(COH, ["a", "b", "c"], coh=[("a", "b")])
    SX = s_obj(X, 2)
    for x, y in product(SX.web, repeat=2):
        assert SX.coheres(x, y) == coh_s_oracle(X, x, y)


def test_strengths_are_degree_preserving():
    X, Y = atoms_obj(REL, ["a"]), atoms_obj(REL, ["b"])
    for i in range(3):
        row = sstr_l(X, Y, 2).row(pair(tag(i, a), b))
        assert row == {tag(i, pair(a, b)): 1}
        assert M(tensor(identity(X), identity(Y))) == M(identity(tensor_obj(X, Y)))
