"""Complete positive semirings supplying every scalar used by the toolkit.

Three semirings are provided: booleans, naturals extended with a saturating
infinity, and exact nonnegative rationals extended with infinity.  Internally
scalars are raw Python values (``int`` or ``Fraction`` or the ``INF``
sentinel) and all arithmetic goes through a :class:`Semiring` instance.  The
:class:`Scalar` wrapper and the module-level functions form the tagged public
surface where mixing semirings must be detected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable


class SemiringMismatch(ValueError):
    """Raised when two scalars from different semirings are combined."""


class NoInverse(ArithmeticError):
    """Raised when a factorial has no multiplicative inverse."""


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class SemiringId(enum.Enum):
    BOOL = "bool"
    NATINF = "nat"
    RATPOS = "rat"


class Semiring:
    """Arithmetic of one semiring over raw values."""

    ident: SemiringId
    zero: object
    one: object

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def from_nat(self, k: int):
        raise NotImplementedError

    def inv_factorial(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def check(self, value) -> bool:
        raise NotImplementedError

    def leq(self, x, y) -> bool:
        """Natural order ``x <= y``, which coincides with the usual order here."""
        if y is INF:
            return True
        if x is INF:
            return False
        return x <= y

    def is_zero(self, x) -> bool:
        return x is not INF and x == 0

    def format(self, x) -> str:
        return "inf" if x is INF else str(x)

    def sum(self, xs: Iterable):
        return reduce(self.add, xs, self.zero)

    def prod(self, xs: Iterable):
        return reduce(self.mul, xs, self.one)

    def power(self, x, k: int):
        if k == 0:
            return self.one
        if x is INF:
            return INF
        return x**k

    def __repr__(self) -> str:
        return f"<semiring {self.ident.value}>"

    def __reduce__(self):
        return (get_semiring, (self.ident,))


class _Bool(Semiring):
    ident = SemiringId.BOOL
    zero = 0
    one = 1

    def add(self, x, y):
        return x | y

    def mul(self, x, y):
        return x & y

    def power(self, x, k):
        return 1 if k == 0 else x

    def from_nat(self, k):
        return 1 if k > 0 else 0

    def inv_factorial(self, n):
        return 1

    def parse(self, text):
        text = text.strip()
        if text not in ("0", "1"):
            raise ValueError(f"not a boolean scalar: {text!r}")
        return int(text)

    def check(self, value):
        return type(value) is int and value in (0, 1)


class _NatInf(Semiring):
    ident = SemiringId.NATINF
    zero = 0
    one = 1

    def add(self, x, y):
        if x is INF or y is INF:
            return INF
        return x + y

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        if x is INF or y is INF:
            return INF
        return x * y

    def from_nat(self, k):
        return int(k)

    def inv_factorial(self, n):
        if n <= 1:
            return 1
        raise NoInverse(f"{n}! = {math.factorial(n)} has no inverse in the naturals")

    def parse(self, text):
        text = text.strip()
        if text == "inf":
            return INF
        if not text.isdigit():
            raise ValueError(f"not a natural scalar: {text!r}")
        return int(text)

    def check(self, value):
        return value is INF or (type(value) is int and value >= 0)


class _RatPos(Semiring):
    ident = SemiringId.RATPOS
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, x, y):
        if x is INF or y is INF:
            return INF
        return x + y

    def mul(self, x, y):
        if x == 0 or y == 0:
            return self.zero
        if x is INF or y is INF:
            return INF
        return x * y

    def from_nat(self, k):
        return Fraction(k)

    def inv_factorial(self, n):
        return Fraction(1, math.factorial(n))

    def parse(self, text):
        text = text.strip()
        if text == "inf":
            return INF
        value = Fraction(text)
        if value < 0:
            raise ValueError(f"negative scalar: {text!r}")
        return value

    def format(self, x):
        if x is INF:
            return "inf"
        return f"{x.numerator}/{x.denominator}"

    def check(self, value):
        return value is INF or (isinstance(value, Fraction) and value >= 0)


BOOL = _Bool()
NATINF = _NatInf()
RATPOS = _RatPos()

_BY_ID = {s.ident: s for s in (BOOL, NATINF, RATPOS)}


def get_semiring(ident: SemiringId | str) -> Semiring:
    if isinstance(ident, str):
        ident = SemiringId(ident)
    return _BY_ID[ident]


# Tagged scalars


@dataclass(frozen=True)
class Scalar:
    semiring: SemiringId
    value: object

    def __post_init__(self):
        sr = get_semiring(self.semiring)
        if sr is RATPOS and type(self.value) is int:
            object.__setattr__(self, "value", Fraction(self.value))
        if not sr.check(self.value):
            raise ValueError(f"{self.value!r} is not an element of {self.semiring.name}")

    def __str__(self) -> str:
        return get_semiring(self.semiring).format(self.value)

    @classmethod
    def parse(cls, semiring: SemiringId, text: str) -> "Scalar":
        return cls(semiring, get_semiring(semiring).parse(text))


class Op(enum.Enum):
    ADD = "add"
    MUL = "mul"


def combine(op: Op, x: Scalar, y: Scalar) -> Scalar:
    if x.semiring is not y.semiring:
        raise SemiringMismatch(f"{x.semiring.name} vs {y.semiring.name}")
    sr = get_semiring(x.semiring)
    fn = sr.add if op is Op.ADD else sr.mul
    return Scalar(x.semiring, fn(x.value, y.value))


def sum_family(xs: Iterable[Scalar], semiring: SemiringId | None = None) -> Scalar:
    """Finite sum; the empty family needs ``semiring`` to know which zero to return."""
    xs = list(xs)
    if not xs:
        if semiring is None:
            raise ValueError("empty family needs an explicit semiring")
        return Scalar(semiring, get_semiring(semiring).zero)
    ident = xs[0].semiring
    for x in xs:
        if x.semiring is not ident:
            raise SemiringMismatch(f"{ident.name} vs {x.semiring.name}")
    sr = get_semiring(ident)
    return Scalar(ident, sr.sum(x.value for x in xs))


def from_nat(semiring: SemiringId, k: int) -> Scalar:
    return Scalar(semiring, get_semiring(semiring).from_nat(k))


def inv_factorial(semiring: SemiringId, n: int) -> Scalar:
    return Scalar(semiring, get_semiring(semiring).inv_factorial(n))
