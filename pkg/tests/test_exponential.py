from fractions import Fraction
from itertools import permutations, product
from random import Random

import pytest

from cohtaylor.exponential import (
    bang_mor,
    bang_mor_via_transports,
    bang_obj,
    contraction,
    der,
    dig,
    exp_structural,
    kleisli_compose,
    ocmont,
    ocmont_derived,
    seely2,
    seely2_inv,
    weakening,
)
from cohtaylor.laws import gen_morphism, sample_base
from cohtaylor.model import (
    COH,
    NUCS,
    PCOH,
    REL,
    WCS,
    WREL_BOOL,
    WREL_NAT,
    WREL_RAT,
    Morphism,
    atoms_obj,
    compose,
    identity,
    unit_obj,
    validate,
)
from cohtaylor.multiset import EMPTY, UNIT, Multiset, atom, bag, pair

ALL = (REL, WREL_BOOL, WREL_NAT, WREL_RAT, WCS, COH, NUCS, PCOH)
a, b, c = atom("a"), atom("b"), atom("c")


def bang_by_tuples(s, d):
    """(!s)_{m,p} = Σ over distinct orderings (a_i) of m of Π s(a_i, b_i), for one fixed ordering (b_i) of p."""
    sr = s.semiring
    dom, cod = bang_obj(s.dom, d), bang_obj(s.cod, d)
    out = {}
    for mp in dom.web:
        orderings = set(permutations(list(mp[1])))
        for pp in cod.web:
            right = list(pp[1])
            if len(right) != mp[1].size:
                continue
            total = sr.zero
            for left in orderings:
                w = sr.one
                for x, y in zip(left, right):
                    w = sr.mul(w, s.get(x, y))
                total = sr.add(total, w)
            if not sr.is_zero(total):
                out[(mp, pp)] = total
    return out


def test_bang_webs():
    X = atoms_obj(REL, ["a"])
    assert set(bang_obj(X, 2).web) == {bag([]), bag([a]), bag([a, a])}
    Y = atoms_obj(COH, ["a", "b"])
    assert set(bang_obj(Y, 2).web) == {bag([]), bag([a]), bag([b]), bag([a, a]), bag([b, b])}
    Z = atoms_obj(COH, ["a", "b"], coh=[("a", "b")])
    assert bag([a, b]) in bang_obj(Z, 2).web


def test_bang_mor_examples():
    X, Y = atoms_obj(WREL_RAT, ["a"]), atoms_obj(WREL_RAT, ["b"])
    s = Morphism(X, Y, {(a, b): Fraction(1, 2)})
    assert bang_mor(s, 2).get(bag([a, a]), bag([b, b])) == Fraction(1, 4)
    X, Y = atoms_obj(REL, ["a"]), atoms_obj(REL, ["b", "c"])
    s = Morphism(X, Y, {(a, b): 1, (a, c): 1})
    assert bang_mor(s, 2).get(bag([a, a]), bag([b, c])) == 1
    X, Y = atoms_obj(WREL_NAT, ["a", "b"]), atoms_obj(WREL_NAT, ["c"])
    s = Morphism(X, Y, {(a, c): 1, (b, c): 1})
    assert bang_mor(s, 2).get(bag([a, b]), bag([c, c])) == 2


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_bang_mor_matches_tuple_enumeration(model):
    for seed, d in product(range(8), (1, 2, 3)):
        rng = Random(seed)
        X = sample_base(model, 1 + rng.randrange(3), rng)
        Y = sample_base(model, 1 + rng.randrange(3), rng, names="pqr")
        s = gen_morphism(X, Y, Fraction(1, 2), seed)
        want = bang_by_tuples(s, d)
        assert bang_mor(s, d).entries == want
        assert bang_mor_via_transports(s, d).entries == want


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_bang_preserves_identity(model):
    for size, d in product((1, 2, 3), (1, 2, 3)):
        X = sample_base(model, size, Random(size * 10 + d))
        assert bang_mor(identity(X), d).materialize() == identity(bang_obj(X, d)).materialize()


def test_promotion_property_over_rationals():
    # Σ_m x^m (!s)_{m,p} = (s x)^p, size by size
    rng = Random(3)
    for seed in range(10):
        X = sample_base(WREL_RAT, 2, rng)
        Y = sample_base(WREL_RAT, 2, rng, names="pq")
        s = gen_morphism(X, Y, Fraction(2, 3), seed)
        x = {p: Fraction(rng.randrange(1, 5), rng.randrange(1, 5)) for p in X.web}
        sx = {q: sum((x[p] * s.get(p, q) for p in X.web), Fraction(0)) for q in Y.web}

        def power(vec, m):
            out = Fraction(1)
            for e, k in m.items:
                out *= vec.get(e, Fraction(0)) ** k
            return out

        B = bang_mor(s, 3)
        for pp in bang_obj(Y, 3).web:
            lhs = sum((power(x, mp[1]) * B.get(mp, pp) for mp in B.dom.web), Fraction(0))
            assert lhs == power(sx, pp[1])


def test_der_and_dig_examples():
    X = atoms_obj(REL, ["a", "b"])
    assert der(bang_obj(X, 2)).entries == {(bag([a]), a): 1, (bag([b]), b): 1}
    A = atoms_obj(REL, ["a"])
    row = set(dig(bang_obj(A, 2)).row(bag([a, a])))
    empty = bag(EMPTY)
    want = {bag([bag([a, a])]), bag([bag([a, a]), empty]), bag([bag([a]), bag([a])])}
    assert row == want
    assert set(dig(bang_obj(A, 2)).row(bag([]))) == {bag([]), bag([empty]), bag([empty, empty])}


def _brute_dig_row(m, outer):
    # multisets of at most `outer` inner multisets that add up to m
    elems = list(m)
    out = set()
    for k in range(outer + 1):
        for labels in product(range(k), repeat=len(elems)):
            blocks = [Multiset(e for e, l in zip(elems, labels) if l == i) for i in range(k)]
            out.add(bag([bag(blk) for blk in blocks]))
    return out


def test_dig_rows_match_brute_force():
    X = atoms_obj(REL, ["a", "b"])
    for d in (1, 2, 3):
        D = dig(bang_obj(X, d))
        for mp in bang_obj(X, d).web:
            want = {t for t in _brute_dig_row(mp[1], d) if D.cod.contains(t)}
            assert set(D.row(mp)) == want


def test_contraction_coefficients():
    A = atoms_obj(WREL_RAT, ["a"])
    row = contraction(bang_obj(A, 2)).row(bag([a, a]))
    m2, m1, m0 = bag([a, a]), bag([a]), bag([])
    # the only transport of [a,a] to [(0,a),(1,a)] has p!/r! = 1, and (x,x)^p = x_a² agrees
    assert row == {pair(m2, m0): 1, pair(m1, m1): 1, pair(m0, m2): 1}
    R = atoms_obj(REL, ["a"])
    assert contraction(bang_obj(R, 2)).row(bag([a, a])) == {pair(m2, m0): 1, pair(m1, m1): 1, pair(m0, m2): 1}
    assert weakening(bang_obj(R, 2)).entries == {(m0, UNIT): 1}


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_seely_round_trip(model):
    X = sample_base(model, 2, Random(1))
    Y = sample_base(model, 2, Random(2), names="pq")
    for d in (1, 2, 3):
        fwd, back = seely2(X, Y, d), seely2_inv(X, Y, d)
        rt = compose(fwd, back).materialize()
        assert rt == identity(back.dom).materialize()
        for p in fwd.dom.web:
            if p[1][1].size + p[2][1].size <= d:
                assert compose(back, fwd).row(p) == {p: model.semiring.one}


@pytest.mark.parametrize("model", (REL, WREL_NAT, WREL_RAT), ids=lambda m: m.name)
def test_ocmont_equals_its_derivation(model):
    X = sample_base(model, 2, Random(4))
    Y = sample_base(model, 1, Random(5), names="p")
    for d in (1, 2):
        assert ocmont(X, Y, d).materialize() == ocmont_derived(X, Y, d).materialize()


@pytest.mark.parametrize("model", ALL, ids=lambda m: m.name)
def test_kleisli_unit_laws(model):
    for seed in range(6):
        rng = Random(seed)
        X = sample_base(model, 2, rng)
        Y = sample_base(model, 2, rng, names="pq")
        d = 2
        f = gen_morphism(bang_obj(X, d), Y, Fraction(1, 2), seed)
        assert kleisli_compose(der(bang_obj(Y, d)), f).materialize() == f.materialize()
        assert kleisli_compose(f, der(bang_obj(X, d))).materialize() == f.materialize()


def test_kleisli_with_constant_argument():
    X, Y, Z = atoms_obj(WREL_NAT, ["a"]), atoms_obj(WREL_NAT, ["b"]), atoms_obj(WREL_NAT, ["c"])
    f = Morphism(bang_obj(X, 2), Y, {(bag([]), b): 3})
    g = Morphism(bang_obj(Y, 2), Z, {(bag([b, b]), c): 1, (bag([]), c): 5})
    h = kleisli_compose(g, f)
    # from [] the argument is the constant 3·b: 5 + 3² = 14
    assert h.get(bag([]), c) == 14
    assert h.get(bag([a]), c) == 0


@pytest.mark.parametrize("name", ["DER", "DIG", "CONTR", "WEAK"])
def test_coh_structural_maps_are_cliques(name):
    X = atoms_obj(COH, ["a", "b", "c"], coh=[("a", "b")])
    for d in (1, 2, 3):
        assert validate(exp_structural(name, bang_obj(X, d)).materialize())
        assert validate(bang_mor(gen_morphism(X, X, Fraction(1, 2), d), d).materialize())


def test_nucs_bang_neutrality_on_singletons():
    X = atoms_obj(NUCS, ["a", "b", "c"], scoh=[("a", "b")], sincoh=[("a", "c")])
    B = bang_obj(X, 2)
    for x, y in product(X.web, repeat=2):
        assert (B.rel(bag([x]), bag([y])) == "N") == (X.rel(x, y) == "N")


def test_bang_of_unit_counts():
    I = unit_obj(REL)
    assert len(bang_obj(I, 4).web) == 5
