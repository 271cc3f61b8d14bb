from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from cohtaylor.semiring import (
    BOOL,
    INF,
    NATINF,
    RATPOS,
    NoInverse,
    Op,
    Scalar,
    SemiringId,
    SemiringMismatch,
    combine,
    from_nat,
    get_semiring,
    inv_factorial,
    sum_family,
)

bools = st.sampled_from([0, 1])
nats = st.one_of(st.integers(0, 50), st.just(INF))
rats = st.one_of(st.fractions(min_value=0, max_value=20, max_denominator=12), st.just(INF))
CASES = [(BOOL, bools), (NATINF, nats), (RATPOS, rats)]


@pytest.mark.parametrize("sr,vals", CASES, ids=["bool", "nat", "rat"])
def test_commutative_semiring_laws(sr, vals):
    @given(vals, vals, vals)
    def check(a, b, c):
        assert sr.add(sr.add(a, b), c) == sr.add(a, sr.add(b, c))
        assert sr.mul(sr.mul(a, b), c) == sr.mul(a, sr.mul(b, c))
        assert sr.add(a, b) == sr.add(b, a)
        assert sr.mul(a, b) == sr.mul(b, a)
        assert sr.mul(a, sr.add(b, c)) == sr.add(sr.mul(a, b), sr.mul(a, c))
        assert sr.add(a, sr.zero) == a
        assert sr.mul(a, sr.one) == a
        assert sr.is_zero(sr.mul(a, sr.zero))

    check()


@pytest.mark.parametrize("sr,vals", CASES, ids=["bool", "nat", "rat"])
def test_format_parse_round_trip(sr, vals):
    @given(vals)
    def check(a):
        assert sr.parse(sr.format(a)) == a
        assert sr.check(a)

    check()


def test_infinity_absorbs_except_zero():
    for sr in (NATINF, RATPOS):
        assert sr.add(INF, sr.one) is INF
        assert sr.mul(INF, sr.from_nat(3)) is INF
        assert sr.is_zero(sr.mul(INF, sr.zero))


def test_bool_is_saturating():
    assert BOOL.add(1, 1) == 1
    assert BOOL.from_nat(5) == 1
    assert BOOL.from_nat(0) == 0


def test_inverse_factorials():
    for n in range(8):
        assert RATPOS.inv_factorial(n) == Fraction(1, factorial(n))
        assert BOOL.inv_factorial(n) == 1
    assert NATINF.inv_factorial(0) == 1 and NATINF.inv_factorial(1) == 1
    with pytest.raises(NoInverse):
        NATINF.inv_factorial(2)


def test_rational_text_is_lowest_terms():
    assert RATPOS.format(Fraction(6, 4)) == "3/2"
    assert RATPOS.parse("6/4") == Fraction(3, 2)
    assert RATPOS.format(INF) == "inf"
    with pytest.raises(ValueError):
        RATPOS.parse("-1/2")
    with pytest.raises(ValueError):
        BOOL.parse("2")
    with pytest.raises(ValueError):
        NATINF.parse("1/2")


def test_tagged_scalars_and_mismatch():
    x = Scalar(SemiringId.RATPOS, Fraction(1, 2))
    y = Scalar(SemiringId.RATPOS, Fraction(1, 3))
    assert combine(Op.ADD, x, y).value == Fraction(5, 6)
    assert combine(Op.MUL, x, y).value == Fraction(1, 6)
    with pytest.raises(SemiringMismatch):
        combine(Op.ADD, x, Scalar(SemiringId.BOOL, 1))
    assert sum_family([x, y, x]).value == Fraction(4, 3)
    assert from_nat(SemiringId.NATINF, 7).value == 7
    assert inv_factorial(SemiringId.RATPOS, 3).value == Fraction(1, 6)
    assert get_semiring("nat") is NATINF


@given(st.lists(rats, max_size=6))
def test_sum_is_order_independent(xs):
    assert RATPOS.sum(xs) == RATPOS.sum(list(reversed(xs))) == RATPOS.sum(sorted(xs, key=str))
