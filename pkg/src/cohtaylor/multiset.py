"""Web points, finite multisets and the combinatorics built on them.

Points are plain tuples whose first component is a variant tag, so Python's
tuple ordering gives the canonical total order (variant first, then the
fields recursively).  Multisets are immutable sorted tuples of
``(point, multiplicity)`` pairs wrapped in :class:`Multiset`.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache, total_ordering
from itertools import combinations_with_replacement, product
from typing import Iterable, Iterator

ATOM, UNIT_V, PAIR, TAG, DEG, BAG = range(6)

Point = tuple


def atom(name: str) -> Point:
    return (ATOM, name)


UNIT: Point = (UNIT_V,)


def pair(a: Point, b: Point) -> Point:
    return (PAIR, a, b)


def tag(i: int, a: Point) -> Point:
    return (TAG, i, a)


def deg(n: int) -> Point:
    return (DEG, n)


def bag(items: "Multiset | Iterable[Point]") -> Point:
    if not isinstance(items, Multiset):
        items = Multiset(items)
    return (BAG, items)


class MarginalMismatch(ValueError):
    """The second marginal of a transport differs from the expected multiset."""


@total_ordering
class Multiset:
    """Finite multiset with canonical (sorted, zero-free) storage."""

    __slots__ = ("items", "_hash", "_size")

    def __init__(self, elements: Iterable[Point] = ()):
        counts = Counter(elements)
        self.items = tuple(sorted(counts.items()))
        self._hash = hash(self.items)
        self._size = sum(counts.values())

    @classmethod
    def from_counts(cls, counts: dict) -> "Multiset":
        m = cls.__new__(cls)
        m.items = tuple(sorted((p, k) for p, k in counts.items() if k > 0))
        m._hash = hash(m.items)
        m._size = sum(k for _, k in m.items)
        return m

    @property
    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Point]:
        for p, k in self.items:
            for _ in range(k):
                yield p

    def __contains__(self, p) -> bool:
        return any(q == p for q, _ in self.items)

    def count(self, p) -> int:
        for q, k in self.items:
            if q == p:
                return k
        return 0

    def support(self) -> tuple:
        return tuple(p for p, _ in self.items)

    def counts(self) -> dict:
        return dict(self.items)

    def __add__(self, other: "Multiset") -> "Multiset":
        c = Counter(dict(self.items))
        c.update(dict(other.items))
        return Multiset.from_counts(c)

    def __sub__(self, other: "Multiset") -> "Multiset":
        c = dict(self.items)
        for p, k in other.items:
            if c.get(p, 0) < k:
                raise ValueError("multiset difference would be negative")
            c[p] -= k
        return Multiset.from_counts(c)

    def includes(self, other: "Multiset") -> bool:
        c = dict(self.items)
        return all(c.get(p, 0) >= k for p, k in other.items)

    def map(self, fn) -> "Multiset":
        c: Counter = Counter()
        for p, k in self.items:
            c[fn(p)] += k
        return Multiset.from_counts(c)

    def factorial(self) -> int:
        return factorial(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self.items == other.items

    def __lt__(self, other: "Multiset") -> bool:
        return self.items < other.items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "[" + ", ".join(show(p) for p in self) + "]"


EMPTY = Multiset()


def show(p: Point) -> str:
    """Compact human-readable rendering of a point."""
    v = p[0]
    if v == ATOM:
        return p[1]
    if v == UNIT_V:
        return "*"
    if v == PAIR:
        return f"({show(p[1])},{show(p[2])})"
    if v == TAG:
        return f"<{p[1]}:{show(p[2])}>"
    if v == DEG:
        return f"#{p[1]}"
    return repr(p[1])


# JSON encoding


def point_to_json(p: Point):
    v = p[0]
    if v == ATOM:
        return p[1]
    if v == UNIT_V:
        return ["*"]
    if v == PAIR:
        return ["pair", point_to_json(p[1]), point_to_json(p[2])]
    if v == TAG:
        return ["in", p[1], point_to_json(p[2])]
    if v == DEG:
        return ["deg", p[1]]
    return ["bag", [point_to_json(q) for q in p[1]]]


def point_from_json(data) -> Point:
    if isinstance(data, str):
        return atom(data)
    if not isinstance(data, list) or not data:
        raise ValueError(f"bad point encoding: {data!r}")
    head = data[0]
    if head == "*" and len(data) == 1:
        return UNIT
    if head == "pair" and len(data) == 3:
        return pair(point_from_json(data[1]), point_from_json(data[2]))
    if head == "in" and len(data) == 3 and _is_nat(data[1]):
        return tag(data[1], point_from_json(data[2]))
    if head == "deg" and len(data) == 2 and _is_nat(data[1]):
        return deg(data[1])
    if head == "bag" and len(data) == 2 and isinstance(data[1], list):
        return bag(point_from_json(q) for q in data[1])
    raise ValueError(f"bad point encoding: {data!r}")


def _is_nat(x) -> bool:
    return type(x) is int and x >= 0


# Combinatorics


def factorial(m: Multiset) -> int:
    out = 1
    for _, k in m.items:
        out *= math.factorial(k)
    return out


def _tables(rows: list[int], cols: list[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Nonnegative integer matrices with the given row and column sums."""
    if sum(rows) != sum(cols):
        return
    n_rows = len(rows)

    def rec(i: int, remaining: list[int]):
        if i == n_rows:
            if not any(remaining):
                yield ()
            return
        for row in _compositions(rows[i], remaining):
            rest = [c - r for c, r in zip(remaining, row)]
            for tail in rec(i + 1, rest):
                yield (row,) + tail

    yield from rec(0, list(cols))


def _compositions(total: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    """Vectors bounded by ``caps`` componentwise and summing to ``total``."""
    if not caps:
        if total == 0:
            yield ()
        return
    head, rest = caps[0], caps[1:]
    room = sum(rest)
    for x in range(min(head, total), -1, -1):
        if total - x <= room:
            for tail in _compositions(total - x, rest):
                yield (x,) + tail


@lru_cache(maxsize=1 << 16)
def _table_shapes(rows: tuple, cols: tuple) -> tuple:
    return tuple(_tables(list(rows), list(cols)))


def transports(m: Multiset, p: Multiset) -> list[Multiset]:
    """All multisets over pairs whose marginals are ``m`` and ``p``."""
    return list(_transports(m, p))


@lru_cache(maxsize=1 << 16)
def _transports(m: Multiset, p: Multiset) -> tuple:
    if m.size != p.size:
        return ()
    left, lk = zip(*m.items) if m.items else ((), ())
    right, rk = zip(*p.items) if p.items else ((), ())
    out = []
    for table in _table_shapes(tuple(lk), tuple(rk)):
        counts = {}
        for a, row in zip(left, table):
            for b, k in zip(right, row):
                if k:
                    counts[pair(a, b)] = k
        out.append(Multiset.from_counts(counts))
    return tuple(sorted(out))


def marginals(r: Multiset) -> tuple[Multiset, Multiset]:
    first: Counter = Counter()
    second: Counter = Counter()
    for q, k in r.items:
        first[q[1]] += k
        second[q[2]] += k
    return Multiset.from_counts(first), Multiset.from_counts(second)


def multinomb(p: Multiset, r: Multiset) -> int:
    """Generalized multinomial: prod_b p(b)! / prod_(a,b) r(a,b)!."""
    if marginals(r)[1] != p:
        raise MarginalMismatch(f"second marginal of {r!r} is not {p!r}")
    num = factorial(p)
    den = factorial(r)
    assert num % den == 0
    return num // den


def multinom(ms: Iterable[Multiset]) -> int:
    """(m_1 + ... + m_n)! / (m_1! ... m_n!)."""
    total = EMPTY
    den = 1
    for m in ms:
        total = total + m
        den *= factorial(m)
    return factorial(total) // den


def mpart(n: int) -> list[Multiset]:
    """Multisets of positive degrees whose weighted sum is ``n``."""

    def parts(rest: int, largest: int) -> Iterator[list[int]]:
        if rest == 0:
            yield []
            return
        for first in range(min(rest, largest), 0, -1):
            for tail in parts(rest - first, first):
                yield [first] + tail

    return sorted(Multiset(deg(i) for i in ps) for ps in parts(n, n))


def multisets_up_to(points: Iterable[Point], max_size: int) -> Iterator[Multiset]:
    pts = sorted(points)
    for k in range(max_size + 1):
        for combo in combinations_with_replacement(pts, k):
            yield Multiset(combo)


def multiset_partitions(m: Multiset) -> list[tuple[Multiset, ...]]:
    """Unordered partitions of ``m`` into nonempty blocks (blocks sorted)."""
    elems = list(m)
    seen = set()

    def rec(i: int, blocks: list[list[Point]]):
        if i == len(elems):
            key = tuple(sorted(Multiset(b) for b in blocks))
            seen.add(key)
            return
        x = elems[i]
        for b in blocks:
            b.append(x)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([x])
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return sorted(seen)


def sub_multisets(m: Multiset) -> Iterator[Multiset]:
    keys = [p for p, _ in m.items]
    ranges = [range(k + 1) for _, k in m.items]
    for ks in product(*ranges):
        yield Multiset.from_counts(dict(zip(keys, ks)))


def ordered_enumerations(m: Multiset) -> Iterator[tuple[Point, ...]]:
    """Distinct tuples whose underlying multiset is ``m``."""
    counts = dict(m.items)
    keys = sorted(counts)
    n = m.size

    def rec(prefix: list[Point]):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for p in keys:
            if counts[p]:
                counts[p] -= 1
                prefix.append(p)
                yield from rec(prefix)
                prefix.pop()
                counts[p] += 1

    yield from rec([])
