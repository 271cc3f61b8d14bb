"""Objects, sparse morphisms and the monoidal, closed and cartesian structure.

An :class:`Obj` is a truncated web together with model-specific coherence
data.  Coherence of composite objects is never materialized; each object
builds a relation function from its components on first use.  Relations are
three-valued: ``"S"`` (strictly coherent), ``"N"`` (neutral) and ``"I"``
(strictly incoherent).  Weak coherence spaces only use ``S``/``I``; coherence
spaces are handled as nonuniform ones whose neutrality is equality.

A :class:`Morphism` is a sparse matrix.  Structural morphisms are built lazily
from a row function, so that law checks only ever compute the rows they
compare; materialization happens on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from .multiset import (
    ATOM,
    BAG,
    DEG,
    PAIR,
    TAG,
    UNIT,
    Multiset,
    Point,
    atom,
    deg,
    pair,
    point_from_json,
    point_to_json,
    show,
    tag,
)
from .semiring import Semiring, SemiringId, get_semiring


class ObjectMismatch(TypeError):
    pass


class ModelMismatch(TypeError):
    pass


class ArityError(TypeError):
    pass


class NotSummable(ValueError):
    """A family of morphisms has no sum in the current model."""

    def __init__(self, message: str, offending=None):
        super().__init__(message)
        self.offending = offending


# Models


KINDS = ("REL", "WREL", "WCS", "COH", "NUCS", "PCOHNUM")
COHERENCE_KINDS = ("WCS", "COH", "NUCS")


@dataclass(frozen=True)
class Model:
    kind: str
    semiring_id: SemiringId = SemiringId.BOOL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        forced = {"REL": SemiringId.BOOL, "WCS": SemiringId.BOOL, "COH": SemiringId.BOOL,
                  "NUCS": SemiringId.BOOL, "PCOHNUM": SemiringId.RATPOS}
        if self.kind in forced and self.semiring_id is not forced[self.kind]:
            raise ValueError(f"{self.kind} uses {forced[self.kind].name} scalars")

    @property
    def semiring(self) -> Semiring:
        return get_semiring(self.semiring_id)

    @property
    def has_coherence(self) -> bool:
        return self.kind in COHERENCE_KINDS

    @property
    def name(self) -> str:
        if self.kind == "WREL":
            return "wrel-" + self.semiring_id.value
        if self.kind == "PCOHNUM":
            return "pcoh"
        return self.kind.lower()

    def __str__(self) -> str:
        return self.name


REL = Model("REL")
WREL_BOOL = Model("WREL", SemiringId.BOOL)
WREL_NAT = Model("WREL", SemiringId.NATINF)
WREL_RAT = Model("WREL", SemiringId.RATPOS)
WCS = Model("WCS")
COH = Model("COH")
NUCS = Model("NUCS")
PCOH = Model("PCOHNUM", SemiringId.RATPOS)

MODELS_BY_NAME = {m.name: m for m in (REL, WREL_BOOL, WREL_NAT, WREL_RAT, WCS, COH, NUCS, PCOH)}


def model_from_name(name: str) -> Model:
    try:
        return MODELS_BY_NAME[name.lower()]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; known: {', '.join(MODELS_BY_NAME)}") from None


# Objects


def _upair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


class Obj:
    """A finite truncated web with coherence data, identified by its shape.

    Shapes are tuples: ``("atoms", names, data)``, ``("unit",)``,
    ``("degrees", D)``, ``("tensor", A, B)``, ``("lolli", A, B)``,
    ``("with", (A, ...))``, ``("plus", (A, ...))``, ``("dual", A)``,
    ``("bang", A, d)``, ``("bange", A, d)`` and ``("S", A, D)``.
    """

    __slots__ = ("model", "shape", "_hash", "__dict__")

    def __init__(self, model: Model, shape: tuple):
        self.model = model
        self.shape = shape
        self._hash = hash((model, shape))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, Obj) and self._hash == other._hash
                and self.model == other.model and self.shape == other.shape)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Obj({self.model.name}, {self.describe_short()})"

    @property
    def kind(self) -> str:
        return self.shape[0]

    def describe_short(self) -> str:
        k = self.shape[0]
        if k == "atoms":
            return "{" + ",".join(self.shape[1]) + "}"
        if k == "unit":
            return "1"
        if k == "degrees":
            return f"D{self.shape[1]}"
        if k in ("tensor", "lolli"):
            op = "⊗" if k == "tensor" else "⊸"
            return f"({self.shape[1].describe_short()}{op}{self.shape[2].describe_short()})"
        if k in ("with", "plus"):
            op = "&" if k == "with" else "⊕"
            inner = op.join(a.describe_short() for a in self.shape[1])
            return f"({inner})" if self.shape[1] else ("T" if k == "with" else "0")
        if k == "dual":
            return f"{self.shape[1].describe_short()}^"
        if k == "bang":
            return f"!{self.shape[1].describe_short()}"
        if k == "bange":
            return f"!e{self.shape[1].describe_short()}"
        return f"S{self.shape[1].describe_short()}"

    # structure accessors

    def child(self, i: int = 0) -> "Obj":
        k = self.shape[0]
        if k in ("with", "plus"):
            return self.shape[1][i]
        if k in ("tensor", "lolli"):
            return self.shape[1 + i]
        return self.shape[1]

    @property
    def bound(self) -> int:
        """Truncation bound of a ``bang``/``bange``/``S``/``degrees`` object."""
        k = self.shape[0]
        if k in ("bang", "bange", "S"):
            return self.shape[2]
        if k == "degrees":
            return self.shape[1]
        raise AttributeError(f"{k} objects carry no bound")

    # membership and enumeration

    def contains(self, p: Point) -> bool:
        return self._contains(p)

    @cached_property
    def _contains(self) -> Callable[[Point], bool]:
        k = self.shape[0]
        if k == "atoms":
            names = frozenset(self.shape[1])
            return lambda p: p[0] == ATOM and p[1] in names
        if k == "unit":
            return lambda p: p == UNIT
        if k == "degrees":
            top = self.shape[1]
            return lambda p: p[0] == DEG and 0 <= p[1] <= top
        if k in ("tensor", "lolli"):
            ca, cb = self.shape[1]._contains, self.shape[2]._contains
            return lambda p: p[0] == PAIR and ca(p[1]) and cb(p[2])
        if k in ("with", "plus"):
            cs = [a._contains for a in self.shape[1]]
            n = len(cs)
            return lambda p: p[0] == TAG and 0 <= p[1] < n and cs[p[1]](p[2])
        if k == "dual":
            return self.shape[1]._contains
        if k == "S":
            ca, top = self.shape[1]._contains, self.shape[2]
            return lambda p: p[0] == TAG and 0 <= p[1] <= top and ca(p[2])
        # bang / bange
        base, d = self.shape[1], self.shape[2]
        ca = base._contains
        uniform = k == "bang" and self.model.kind == "COH"
        rel = base.rel if uniform else None

        def contains_bag(p):
            if p[0] != BAG or p[1].size > d:
                return False
            supp = p[1].support()
            if not all(ca(a) for a in supp):
                return False
            if uniform:
                return all(rel(x, y) != "I" for x, y in itertools.combinations(supp, 2))
            return True

        return contains_bag

    @cached_property
    def web(self) -> tuple:
        return tuple(sorted(self.points()))

    def points(self, max_weight: int | None = None) -> Iterator[Point]:
        """Enumerate the web, optionally only points of degree weight <= max_weight."""
        k = self.shape[0]
        w = max_weight
        if k == "atoms":
            yield from (atom(n) for n in self.shape[1])
        elif k == "unit":
            yield UNIT
        elif k == "degrees":
            top = self.shape[1] if w is None else min(w, self.shape[1])
            yield from (deg(n) for n in range(top + 1))
        elif k in ("tensor", "lolli"):
            A, B = self.shape[1], self.shape[2]
            for a in A.points(w):
                rest = None if w is None else w - A.weight(a)
                for b in B.points(rest):
                    yield pair(a, b)
        elif k in ("with", "plus"):
            for i, A in enumerate(self.shape[1]):
                for a in A.points(w):
                    yield tag(i, a)
        elif k == "dual":
            yield from self.shape[1].points(w)
        elif k == "S":
            A, top = self.shape[1], self.shape[2]
            for i in range(top + 1 if w is None else min(top, w) + 1):
                for a in A.points(None if w is None else w - i):
                    yield tag(i, a)
        else:
            yield from self._bag_points(w)

    def _bag_points(self, w):
        base, d = self.shape[1], self.shape[2]
        pts = sorted(base.points(w))
        weights = [base.weight(p) for p in pts]
        contains = self._contains

        def rec(start: int, size: int, budget, acc: list):
            m = Multiset(acc)
            p = (BAG, m)
            if contains(p):
                yield p
            if size == d:
                return
            for j in range(start, len(pts)):
                if budget is not None and weights[j] > budget:
                    continue
                acc.append(pts[j])
                yield from rec(j, size + 1, None if budget is None else budget - weights[j], acc)
                acc.pop()

        yield from rec(0, 0, w, [])

    def weight(self, p: Point) -> int:
        return self._weight(p)

    @cached_property
    def _weight(self) -> Callable[[Point], int]:
        k = self.shape[0]
        if k in ("atoms", "unit"):
            return lambda p: 0
        if k == "degrees":
            return lambda p: p[1]
        if k in ("tensor", "lolli"):
            wa, wb = self.shape[1]._weight, self.shape[2]._weight
            return lambda p: wa(p[1]) + wb(p[2])
        if k in ("with", "plus"):
            ws = [a._weight for a in self.shape[1]]
            return lambda p: ws[p[1]](p[2])
        if k == "dual":
            return self.shape[1]._weight
        if k == "S":
            wa = self.shape[1]._weight
            return lambda p: p[1] + wa(p[2])
        wa = self.shape[1]._weight
        return lambda p: sum(wa(a) * n for a, n in p[1].items)

    # coherence

    def rel(self, x: Point, y: Point) -> str:
        return self._rel(x, y)

    @cached_property
    def _rel(self) -> Callable[[Point, Point], str]:
        fam = self.model.kind
        if fam == "WCS":
            return _wcs_relation(self)
        if fam in ("COH", "NUCS"):
            return _nu_relation(self)
        return lambda x, y: "S"

    def coheres(self, x: Point, y: Point) -> bool:
        """Large coherence (for WCS: strict coherence)."""
        return self._rel(x, y) != "I"

    def is_clique(self, points: Iterable[Point]) -> bool:
        return find_incoherent(self, points) is None

    # PCOH witnesses

    def witnesses(self) -> list[dict]:
        return _witnesses(self)

    # serialization

    def describe(self):
        """JSON descriptor from which the object (and so its coherence) is rebuilt."""
        k = self.shape[0]
        if k == "atoms":
            names, data = self.shape[1], self.shape[2]
            out: dict = {"atoms": list(names)}
            fam = self.model.kind
            if fam == "WCS":
                out["scoh"] = _pairs_json(data)
            elif fam == "COH":
                out["coh"] = _pairs_json(data)
            elif fam == "NUCS":
                out["scoh"] = _pairs_json(data[0])
                out["sincoh"] = _pairs_json(data[1])
            elif fam == "PCOHNUM" and data:
                out["witnesses"] = [[[n, f"{v.numerator}/{v.denominator}"] for n, v in w]
                                    for w in data]
            return out
        if k == "unit":
            return {"unit": []}
        if k == "degrees":
            return {"degrees": self.shape[1]}
        if k in ("tensor", "lolli"):
            return {k: [self.shape[1].describe(), self.shape[2].describe()]}
        if k in ("with", "plus"):
            return {k: [a.describe() for a in self.shape[1]]}
        if k == "dual":
            return {"dual": self.shape[1].describe()}
        return {k: [self.shape[1].describe(), self.shape[2]]}

    def to_json(self):
        return {"web": [point_to_json(p) for p in self.web], "coh": self.describe()}


def _pairs_json(pairs: frozenset) -> list:
    out = []
    for pr in pairs:
        xs = sorted(pr)
        out.append([xs[0], xs[-1]])
    return sorted(out)


def obj_from_descriptor(model: Model, data) -> Obj:
    if not isinstance(data, dict) or not data:
        raise ValueError(f"bad object descriptor: {data!r}")
    if "atoms" in data:
        names = data["atoms"]
        kwargs = {}
        for key in ("scoh", "sincoh", "coh"):
            if key in data:
                kwargs[key] = [tuple(p) for p in data[key]]
        if "witnesses" in data:
            kwargs["witnesses"] = [{n: Fraction(v) for n, v in w} for w in data["witnesses"]]
        return atoms_obj(model, names, **kwargs)
    (key, val), = data.items()
    if key == "unit":
        return unit_obj(model)
    if key == "degrees":
        return degrees_obj(model, val)
    if key == "tensor":
        return tensor_obj(obj_from_descriptor(model, val[0]), obj_from_descriptor(model, val[1]))
    if key == "lolli":
        return lolli_obj(obj_from_descriptor(model, val[0]), obj_from_descriptor(model, val[1]))
    if key == "with":
        return with_obj([obj_from_descriptor(model, v) for v in val], model)
    if key == "plus":
        return plus_obj([obj_from_descriptor(model, v) for v in val], model)
    if key == "dual":
        return dual_obj(obj_from_descriptor(model, val))
    if key in ("bang", "bange", "S"):
        inner = obj_from_descriptor(model, val[0])
        return Obj(model, (key, inner, int(val[1])))
    raise ValueError(f"bad object descriptor key {key!r}")


def obj_from_json(model: Model, data) -> Obj:
    obj = obj_from_descriptor(model, data["coh"])
    if "web" in data:
        web = tuple(sorted(point_from_json(p) for p in data["web"]))
        if web != obj.web:
            raise ValueError("declared web does not match the object descriptor")
    return obj


# Object constructors


def atoms_obj(model: Model, names: Sequence[str], *, scoh=(), sincoh=(), coh=(),
              witnesses=()) -> Obj:
    """A base object on named atoms.

    WCS takes ``scoh`` (self pairs allowed), COH takes ``coh`` (strict
    coherence between distinct atoms), NUCS takes ``scoh`` and ``sincoh``
    (unlisted pairs are neutral) and PCOHNUM takes witness vectors given as
    dicts from atom names to rationals.
    """
    names = tuple(sorted(set(names)))
    known = set(names)

    def pairset(pairs):
        out = set()
        for a, b in pairs:
            if a not in known or b not in known:
                raise ValueError(f"coherence pair ({a}, {b}) mentions an unknown atom")
            out.add(_upair(a, b))
        return frozenset(out)

    kind = model.kind
    if kind == "WCS":
        data = pairset(scoh)
    elif kind == "COH":
        data = frozenset(p for p in pairset(coh) if len(p) == 2)
    elif kind == "NUCS":
        s, i = pairset(scoh), pairset(sincoh)
        if s & i:
            raise ValueError("strict coherence and strict incoherence must be disjoint")
        data = (s, i)
    elif kind == "PCOHNUM":
        ws = []
        for w in witnesses:
            vec = tuple(sorted((n, Fraction(v)) for n, v in w.items() if Fraction(v) != 0))
            if any(n not in known for n, _ in vec) or any(v < 0 for _, v in vec):
                raise ValueError("witness must be a nonnegative vector over the atoms")
            ws.append(vec)
        data = tuple(ws)
    else:
        data = None
    return Obj(model, ("atoms", names, data))


def unit_obj(model: Model) -> Obj:
    return Obj(model, ("unit",))


def degrees_obj(model: Model, D: int) -> Obj:
    return Obj(model, ("degrees", D))


def _same_model(*objs: Obj) -> Model:
    model = objs[0].model
    for o in objs[1:]:
        if o.model != model:
            raise ModelMismatch(f"{o.model} vs {model}")
    return model


def tensor_obj(A: Obj, B: Obj) -> Obj:
    return Obj(_same_model(A, B), ("tensor", A, B))


def lolli_obj(A: Obj, B: Obj) -> Obj:
    return Obj(_same_model(A, B), ("lolli", A, B))


def with_obj(objs: Sequence[Obj], model: Model | None = None) -> Obj:
    objs = tuple(objs)
    if not objs and model is None:
        raise ArityError("empty with needs an explicit model")
    return Obj(model or _same_model(*objs), ("with", objs))


def plus_obj(objs: Sequence[Obj], model: Model | None = None) -> Obj:
    objs = tuple(objs)
    if not objs and model is None:
        raise ArityError("empty plus needs an explicit model")
    return Obj(model or _same_model(*objs), ("plus", objs))


def top_obj(model: Model) -> Obj:
    return with_obj((), model)


def dual_obj(A: Obj) -> Obj:
    if A.shape[0] == "dual":
        return A.shape[1]
    return Obj(A.model, ("dual", A))


# Coherence relations


def _wcs_relation(obj: Obj):
    k = obj.shape[0]
    if k == "atoms":
        data = obj.shape[2]
        return lambda x, y: "S" if _upair(x[1], y[1]) in data else "I"
    if k in ("unit", "degrees"):
        return lambda x, y: "S"
    if k == "tensor":
        ra, rb = obj.shape[1]._rel, obj.shape[2]._rel
        return lambda x, y: "S" if ra(x[1], y[1]) == "S" and rb(x[2], y[2]) == "S" else "I"
    if k == "lolli":
        ra, rb = obj.shape[1]._rel, obj.shape[2]._rel
        return lambda x, y: "S" if ra(x[1], y[1]) != "S" or rb(x[2], y[2]) == "S" else "I"
    if k == "with":
        rs = [a._rel for a in obj.shape[1]]
        return lambda x, y: "S" if x[1] != y[1] else rs[x[1]](x[2], y[2])
    if k == "plus":
        rs = [a._rel for a in obj.shape[1]]
        return lambda x, y: "I" if x[1] != y[1] else rs[x[1]](x[2], y[2])
    if k == "dual":
        ra = obj.shape[1]._rel
        return lambda x, y: "I" if ra(x, y) == "S" else "S"
    if k == "S":
        ra = obj.shape[1]._rel
        return lambda x, y: ra(x[2], y[2])
    if k == "bang":
        ra = obj.shape[1]._rel

        def bang_rel(x, y):
            for a in x[1].support():
                for b in y[1].support():
                    if ra(a, b) != "S":
                        return "I"
            return "S"

        return bang_rel
    raise ModelMismatch(f"{k} objects do not exist in WCS")


_SWAP = {"S": "I", "I": "S", "N": "N"}


def _nu_relation(obj: Obj):
    k = obj.shape[0]
    if k == "atoms":
        if obj.model.kind == "COH":
            data = obj.shape[2]

            def coh_atoms(x, y):
                if x == y:
                    return "N"
                return "S" if _upair(x[1], y[1]) in data else "I"

            return coh_atoms
        scoh, sincoh = obj.shape[2]

        def nucs_atoms(x, y):
            key = _upair(x[1], y[1])
            if key in scoh:
                return "S"
            if key in sincoh:
                return "I"
            return "N"

        return nucs_atoms
    if k == "unit":
        return lambda x, y: "N"
    if k == "degrees":
        return lambda x, y: "N" if x == y else "S"
    if k == "tensor":
        ra, rb = obj.shape[1]._rel, obj.shape[2]._rel

        def tensor_rel(x, y):
            u, v = ra(x[1], y[1]), rb(x[2], y[2])
            if u == "I" or v == "I":
                return "I"
            return "N" if u == "N" and v == "N" else "S"

        return tensor_rel
    if k == "lolli":
        ra, rb = obj.shape[1]._rel, obj.shape[2]._rel

        def lolli_rel(x, y):
            u, v = ra(x[1], y[1]), rb(x[2], y[2])
            if u == "N" and v == "N":
                return "N"
            if u == "I":
                return "S"
            if v == "I" or (v == "N" and u != "N"):
                return "I"
            return "S"

        return lolli_rel
    if k == "with":
        rs = [a._rel for a in obj.shape[1]]
        return lambda x, y: "S" if x[1] != y[1] else rs[x[1]](x[2], y[2])
    if k == "plus":
        rs = [a._rel for a in obj.shape[1]]
        return lambda x, y: "I" if x[1] != y[1] else rs[x[1]](x[2], y[2])
    if k == "dual":
        ra = obj.shape[1]._rel
        return lambda x, y: _SWAP[ra(x, y)]
    if k == "S":
        ra = obj.shape[1]._rel

        def s_rel(x, y):
            r = ra(x[2], y[2])
            if r == "S":
                return "S"
            if r == "N" and x[1] == y[1]:
                return "N"
            return "I"

        return s_rel
    if k == "bang":
        ra = obj.shape[1]._rel

        def bang_rel(x, y):
            m, mp = x[1], y[1]
            for a in m.support():
                for b in mp.support():
                    if ra(a, b) == "I":
                        return "I"
            if m.size == mp.size and _neutral_matching(list(m), list(mp), ra):
                return "N"
            return "S"

        return bang_rel
    if k == "bange":
        ra = obj.shape[1]._rel

        def bange_rel(x, y):
            elems = list(x[1]) + list(y[1])
            n = len(elems)
            for i in range(n):
                for j in range(i + 1, n):
                    if ra(elems[i], elems[j]) == "I":
                        return "I"
            for i in range(n):
                if all(ra(elems[i], elems[j]) == "S" for j in range(n) if j != i):
                    return "S"
            return "N"

        return bange_rel
    raise ModelMismatch(f"unknown shape {k}")


def _neutral_matching(xs: list, ys: list, rel) -> bool:
    """Is there a bijection pairing each x with a neutral y?"""
    match: dict[int, int] = {}

    def augment(i: int, seen: set) -> bool:
        for j, y in enumerate(ys):
            if j in seen or rel(xs[i], y) != "N":
                continue
            seen.add(j)
            if j not in match or augment(match[j], seen):
                match[j] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(xs)))


def find_incoherent(obj: Obj, points: Iterable[Point]):
    """First pair of points (self pairs included) that is not coherent, if any."""
    pts = list(points)
    rel = obj._rel
    for i, x in enumerate(pts):
        for y in pts[i:]:
            if rel(x, y) == "I":
                return (x, y)
    return None


# PCOH witnesses


def _witnesses(obj: Obj) -> list[dict]:
    """Finite sample of elements of P(obj) used by the sound-only validity check."""
    k = obj.shape[0]
    if k == "atoms":
        names = obj.shape[1]
        out = [{atom(n): Fraction(1)} for n in names]
        for w in obj.shape[2] or ():
            out.append({atom(n): v for n, v in w})
        return out
    if k in ("unit", "degrees"):
        return [{p: Fraction(1)} for p in obj.web]
    if k in ("with", "plus", "S"):
        children = obj.shape[1] if k != "S" else [obj.shape[1]] * (obj.shape[2] + 1)
        out = []
        for i, A in enumerate(children):
            for w in A.witnesses():
                out.append({tag(i, a): v for a, v in w.items()})
        return out
    if k == "tensor":
        A, B = obj.shape[1], obj.shape[2]
        return [{pair(a, b): u * v for a, u in wa.items() for b, v in wb.items()}
                for wa in A.witnesses() for wb in B.witnesses()]
    if k in ("bang", "bange"):
        base = obj.shape[1]
        ws = base.witnesses()
        if ws:
            n = len(ws)
            mix: dict = {}
            for w in ws:
                for a, v in w.items():
                    mix[a] = mix.get(a, 0) + v / n
            ws = ws + [mix]
        out = []
        for w in ws:
            prom = {}
            for p in obj.web:
                val = Fraction(1)
                for a, c in p[1].items:
                    val *= w.get(a, Fraction(0)) ** c
                if val:
                    prom[p] = val
            out.append(prom)
        return out
    return []


def pcoh_gauge(obj: Obj, vec: dict):
    """Norm whose unit ball is P(obj) for base/&/⊕/S/degrees shapes; None otherwise."""
    k = obj.shape[0]
    if k in ("atoms", "unit"):
        return sum(vec.values(), Fraction(0))
    if k == "degrees":
        return max(vec.values(), default=Fraction(0))
    if k in ("with", "plus"):
        parts = []
        for i, A in enumerate(obj.shape[1]):
            sub = {p[2]: v for p, v in vec.items() if p[1] == i}
            g = pcoh_gauge(A, sub)
            if g is None:
                return None
            parts.append(g)
        if k == "with":
            return max(parts, default=Fraction(0))
        return sum(parts, Fraction(0))
    if k == "S":
        total: dict = {}
        for p, v in vec.items():
            total[p[2]] = total.get(p[2], 0) + v
        return pcoh_gauge(obj.shape[1], total)
    return None


# Morphisms


_EMPTY_ROW: dict = {}


class Morphism:
    """Sparse matrix from ``dom`` web to ``cod`` web, possibly computed lazily."""

    __slots__ = ("dom", "cod", "_rows", "_rowfn", "_support", "_complete", "label")

    def __init__(self, dom: Obj, cod: Obj, entries: dict | None = None, *,
                 rowfn: Callable[[Point], dict] | None = None,
                 support: Iterable[Point] | None = None, label: str = ""):
        if dom.model != cod.model:
            raise ModelMismatch(f"{dom.model} vs {cod.model}")
        self.dom = dom
        self.cod = cod
        self.label = label
        if rowfn is None:
            sr = dom.model.semiring
            rows: dict = {}
            for (p, q), v in (entries or {}).items():
                if sr.is_zero(v):
                    continue
                rows.setdefault(p, {})[q] = v
            self._rows = rows
            self._rowfn = None
            self._support = None
            self._complete = True
        else:
            self._rows = {}
            self._rowfn = rowfn
            self._support = None if support is None else tuple(support)
            self._complete = False

    @property
    def model(self) -> Model:
        return self.dom.model

    @property
    def semiring(self) -> Semiring:
        return self.dom.model.semiring

    def row(self, p: Point) -> dict:
        rows = self._rows
        r = rows.get(p)
        if r is not None:
            return r
        if self._complete:
            return _EMPTY_ROW
        sr = self.semiring
        r = {q: v for q, v in self._rowfn(p).items() if not sr.is_zero(v)}
        rows[p] = r
        return r

    def support_rows(self) -> Iterable[Point]:
        if self._complete:
            return sorted(self._rows)
        if self._support is not None:
            return self._support
        return self.dom.web

    def materialize(self) -> "Morphism":
        if not self._complete:
            for p in self.support_rows():
                self.row(p)
            self._rows = {p: r for p, r in self._rows.items() if r}
            self._complete = True
            self._rowfn = None
        return self

    @property
    def entries(self) -> dict:
        self.materialize()
        return {(p, q): v for p, r in self._rows.items() for q, v in r.items()}

    def items(self) -> list:
        """Canonically ordered ``((p, q), value)`` list."""
        return sorted(self.entries.items())

    def get(self, p: Point, q: Point):
        return self.row(p).get(q, self.semiring.zero)

    def __len__(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def restrict(self, keep: Callable[[Point, Point], bool]) -> "Morphism":
        return Morphism(self.dom, self.cod,
                        {k: v for k, v in self.entries.items() if keep(*k)})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Morphism) and self.dom == other.dom
                and self.cod == other.cod and self.entries == other.entries)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        name = f" {self.label}" if self.label else ""
        if not self._complete:
            return f"<lazy morphism{name} {self.dom!r} -> {self.cod!r}>"
        sr = self.semiring
        body = ", ".join(f"({show(p)},{show(q)}):{sr.format(v)}" for (p, q), v in self.items())
        return f"<morphism{name} {self.dom.describe_short()} -> {self.cod.describe_short()} {{{body}}}>"

    def to_json(self) -> dict:
        sr = self.semiring
        return {
            "model": self.model.name,
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "entries": [[point_to_json(p), point_to_json(q), sr.format(v)]
                        for (p, q), v in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Morphism":
        model = model_from_name(data["model"])
        dom = obj_from_json(model, data["dom"])
        cod = obj_from_json(model, data["cod"])
        sr = model.semiring
        entries = {}
        for p, q, s in data["entries"]:
            key = (point_from_json(p), point_from_json(q))
            if not dom.contains(key[0]) or not cod.contains(key[1]):
                raise ValueError(f"entry {key} lies outside the declared webs")
            entries[key] = sr.parse(s)
        return cls(dom, cod, entries)


def lazy(dom: Obj, cod: Obj, rowfn: Callable[[Point], dict], label: str = "",
         support: Iterable[Point] | None = None) -> Morphism:
    return Morphism(dom, cod, rowfn=rowfn, label=label, support=support)


def from_relation(dom: Obj, cod: Obj, fn: Callable[[Point], Iterable[Point]],
                  label: str = "") -> Morphism:
    """Lazy 0/1 matrix given by a point-to-points function, clipped to ``cod``."""
    one = dom.model.semiring.one
    contains = cod._contains

    def rowfn(p):
        return {q: one for q in fn(p) if contains(q)}

    return lazy(dom, cod, rowfn, label)


# Category structure


def identity(X: Obj) -> Morphism:
    one = X.model.semiring.one
    return lazy(X, X, lambda p: {p: one}, "id")


def zero(A: Obj, B: Obj) -> Morphism:
    return Morphism(A, B, {})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """Matrix product ``g ∘ f`` (first ``f``, then ``g``)."""
    if f.cod != g.dom:
        raise ObjectMismatch(f"cannot compose: {f.cod!r} is not {g.dom!r}")
    sr = f.semiring
    add, mul, is_zero = sr.add, sr.mul, sr.is_zero

    def rowfn(p):
        acc: dict = {}
        for b, v in f.row(p).items():
            for c, w in g.row(b).items():
                x = mul(v, w)
                if c in acc:
                    acc[c] = add(acc[c], x)
                elif not is_zero(x):
                    acc[c] = x
        return acc

    support = f.support_rows() if (f._complete or f._support is not None) else None
    h = lazy(f.dom, g.cod, rowfn, support=support)
    if f._complete and (g._complete or len(f._rows) < 64):
        h.materialize()
    return h


def compose_all(*ms: Morphism) -> Morphism:
    """``compose_all(h, g, f) = h ∘ g ∘ f``."""
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = compose(m, out)
    return out


def tensor(f: Morphism, g: Morphism) -> Morphism:
    dom = tensor_obj(f.dom, g.dom)
    cod = tensor_obj(f.cod, g.cod)
    mul = f.semiring.mul

    def rowfn(p):
        out = {}
        rg = g.row(p[2])
        for b1, v in f.row(p[1]).items():
            for b2, w in rg.items():
                out[pair(b1, b2)] = mul(v, w)
        return out

    support = None
    if (f._complete or f._support is not None) and (g._complete or g._support is not None):
        support = [pair(a, b) for a in f.support_rows() for b in g.support_rows()]
    return lazy(dom, cod, rowfn, "tensor", support)


# Symmetric monoidal structure


def sym(A: Obj, B: Obj) -> Morphism:
    return from_relation(tensor_obj(A, B), tensor_obj(B, A), lambda p: [pair(p[2], p[1])], "sym")


def assoc(A: Obj, B: Obj, C: Obj) -> Morphism:
    dom = tensor_obj(tensor_obj(A, B), C)
    cod = tensor_obj(A, tensor_obj(B, C))
    return from_relation(dom, cod, lambda p: [pair(p[1][1], pair(p[1][2], p[2]))], "assoc")


def assoc_inv(A: Obj, B: Obj, C: Obj) -> Morphism:
    dom = tensor_obj(A, tensor_obj(B, C))
    cod = tensor_obj(tensor_obj(A, B), C)
    return from_relation(dom, cod, lambda p: [pair(pair(p[1], p[2][1]), p[2][2])], "assoc_inv")


def unit_l(A: Obj) -> Morphism:
    return from_relation(tensor_obj(unit_obj(A.model), A), A, lambda p: [p[2]], "unit_l")


def unit_l_inv(A: Obj) -> Morphism:
    return from_relation(A, tensor_obj(unit_obj(A.model), A), lambda p: [pair(UNIT, p)], "unit_l_inv")


def unit_r(A: Obj) -> Morphism:
    return from_relation(tensor_obj(A, unit_obj(A.model)), A, lambda p: [p[1]], "unit_r")


def unit_r_inv(A: Obj) -> Morphism:
    return from_relation(A, tensor_obj(A, unit_obj(A.model)), lambda p: [pair(p, UNIT)], "unit_r_inv")


# Closed structure


def evaluation(A: Obj, B: Obj) -> Morphism:
    """``ev : (A ⊸ B) ⊗ A → B``, entries (((a,b),a),b)."""
    dom = tensor_obj(lolli_obj(A, B), A)
    return from_relation(dom, B, lambda p: [p[1][2]] if p[1][1] == p[2] else [], "ev")


def curry(f: Morphism) -> Morphism:
    """``cur(f) : Z → (X ⊸ Y)`` for ``f : Z ⊗ X → Y``."""
    if f.dom.shape[0] != "tensor":
        raise ObjectMismatch("curry needs a morphism out of a tensor")
    Z, X = f.dom.shape[1], f.dom.shape[2]
    cod = lolli_obj(X, f.cod)
    xs = X.web

    def rowfn(c):
        out = {}
        for a in xs:
            for b, v in f.row(pair(c, a)).items():
                out[pair(a, b)] = v
        return out

    return lazy(Z, cod, rowfn, "cur")


def uncurry(g: Morphism) -> Morphism:
    """Inverse of :func:`curry`: ``Z ⊗ X → Y`` from ``g : Z → (X ⊸ Y)``."""
    if g.cod.shape[0] != "lolli":
        raise ObjectMismatch("uncurry needs a morphism into a linear arrow")
    X, Y = g.cod.shape[1], g.cod.shape[2]
    dom = tensor_obj(g.dom, X)

    def rowfn(p):
        c, a = p[1], p[2]
        return {ab[2]: v for ab, v in g.row(c).items() if ab[1] == a}

    return lazy(dom, Y, rowfn, "uncur")


def transpose(f: Morphism) -> Morphism:
    """``fᵀ : cod^⊥ → dom^⊥`` with swapped indices."""
    entries = {(q, p): v for (p, q), v in f.entries.items()}
    return Morphism(dual_obj(f.cod), dual_obj(f.dom), entries)


# Cartesian structure


def proj(i: int, objs: Sequence[Obj]) -> Morphism:
    W = with_obj(objs)
    if not 0 <= i < len(W.shape[1]):
        raise ArityError(f"projection index {i} out of range")
    return from_relation(W, W.shape[1][i], lambda p: [p[2]] if p[1] == i else [], f"proj{i}")


def tuple_of(fs: Sequence[Morphism], dom: Obj | None = None) -> Morphism:
    """Tupling ``⟨f_i⟩ : Z → &Y_i`` with entries (a,(i,b)) = f_i(a,b)."""
    fs = list(fs)
    if not fs and dom is None:
        raise ArityError("empty tupling needs an explicit domain")
    Z = dom if dom is not None else fs[0].dom
    for f in fs:
        if f.dom != Z:
            raise ObjectMismatch("tupled morphisms must share a domain")
    cod = with_obj([f.cod for f in fs], Z.model)

    def rowfn(a):
        out = {}
        for i, f in enumerate(fs):
            for b, v in f.row(a).items():
                out[tag(i, b)] = v
        return out

    return lazy(Z, cod, rowfn, "tuple")


def inj(i: int, objs: Sequence[Obj]) -> Morphism:
    P = plus_obj(objs)
    if not 0 <= i < len(P.shape[1]):
        raise ArityError(f"injection index {i} out of range")
    return from_relation(P.shape[1][i], P, lambda a: [tag(i, a)], f"inj{i}")


def cotuple_of(fs: Sequence[Morphism]) -> Morphism:
    fs = list(fs)
    if not fs:
        raise ArityError("empty cotupling")
    Z = fs[0].cod
    for f in fs:
        if f.cod != Z:
            raise ObjectMismatch("cotupled morphisms must share a codomain")
    dom = plus_obj([f.dom for f in fs])
    return lazy(dom, Z, lambda p: dict(fs[p[1]].row(p[2])), "cotuple")


STRUCTURAL = {
    "SYM": sym,
    "SYM_INV": lambda A, B: sym(B, A),
    "ASSOC": assoc,
    "ASSOC_INV": assoc_inv,
    "UNIT_L": unit_l,
    "UNIT_L_INV": unit_l_inv,
    "UNIT_R": unit_r,
    "UNIT_R_INV": unit_r_inv,
    "PROJ": lambda i, *objs: proj(i, objs),
    "TUPLE": lambda *fs: tuple_of(fs),
    "INJ": lambda i, *objs: inj(i, objs),
    "COTUPLE": lambda *fs: cotuple_of(fs),
    "CURRY": curry,
    "UNCURRY": uncurry,
    "EVAL": evaluation,
    "TRANSPOSE": transpose,
    "ZERO": zero,
}


def structural(name: str, *args) -> Morphism:
    try:
        builder = STRUCTURAL[name.upper()]
    except KeyError:
        raise ArityError(f"unknown structural map {name!r}") from None
    try:
        return builder(*args)
    except TypeError as exc:
        if isinstance(exc, (ObjectMismatch, ModelMismatch, ArityError)):
            raise
        raise ArityError(f"{name}: {exc}") from None


# Validity and sums


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    offending: tuple | None = None
    sound_only: bool = False
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid


def lolli_relation(dom: Obj, cod: Obj):
    """Relation on entry pairs (a, b) of ``dom ⊸ cod``."""
    return lolli_obj(dom, cod)._rel


def validate(f: Morphism) -> ValidityReport:
    kind = f.model.kind
    if kind in ("REL", "WREL"):
        return ValidityReport(True)
    if kind == "PCOHNUM":
        return _validate_pcoh(f)
    rel = lolli_relation(f.dom, f.cod)
    keys = [pair(p, q) for (p, q) in sorted(f.entries)]
    for i, x in enumerate(keys):
        for y in keys[i:]:
            if rel(x, y) == "I":
                return ValidityReport(False, ((x[1], x[2]), (y[1], y[2])),
                                      detail="entries are not coherent in dom ⊸ cod")
    return ValidityReport(True)


def apply_linear(f: Morphism, vec: dict) -> dict:
    sr = f.semiring
    out: dict = {}
    for a, x in vec.items():
        for b, v in f.row(a).items():
            out[b] = sr.add(out.get(b, sr.zero), sr.mul(x, v))
    return out


def _validate_pcoh(f: Morphism) -> ValidityReport:
    cod_ws = f.cod.witnesses()
    for w in f.dom.witnesses():
        y = apply_linear(f, w)
        g = pcoh_gauge(f.cod, y)
        if g is not None:
            if g <= 1:
                continue
            worst = max(y, key=lambda b: y[b])
            return ValidityReport(False, (w, worst), sound_only=True,
                                  detail=f"image has norm {g} > 1")
        if any(all(v <= cw.get(b, 0) for b, v in y.items()) for cw in cod_ws):
            continue
        return ValidityReport(False, (w, None), sound_only=True,
                              detail="image not dominated by any codomain witness")
    return ValidityReport(True, sound_only=True)


GRADINGS = ("preserves", "lowers", "raises")


def audit_grading(f: Morphism, grading: str, rows: Iterable[Point] | None = None):
    """First entry whose degree-weight shift contradicts ``grading``, or None.

    ``preserves`` means weight(q) = weight(p) on every entry, ``lowers`` means
    weight(q) <= weight(p) and ``raises`` means weight(q) >= weight(p).
    """
    if grading not in GRADINGS:
        raise ValueError(f"unknown grading {grading!r}")
    wd, wc = f.dom._weight, f.cod._weight
    for p in f.dom.web if rows is None else rows:
        for q in f.row(p):
            shift = wc(q) - wd(p)
            if (grading == "preserves" and shift) or (grading == "lowers" and shift > 0) \
                    or (grading == "raises" and shift < 0):
                return (p, q, shift)
    return None


def partial_sum(fs: Sequence[Morphism]) -> Morphism:
    """Sum of a family, or :class:`NotSummable` when the model has no such sum."""
    fs = list(fs)
    if not fs:
        raise ArityError("partial_sum needs at least one morphism (or use zero)")
    dom, cod = fs[0].dom, fs[0].cod
    for f in fs[1:]:
        if f.dom != dom or f.cod != cod:
            raise ObjectMismatch("summands must share domain and codomain")
    sr = dom.model.semiring
    kind = dom.model.kind
    total: dict = {}
    for f in fs:
        for k, v in f.entries.items():
            total[k] = sr.add(total.get(k, sr.zero), v)
    result = Morphism(dom, cod, total)
    if kind in ("REL", "WREL"):
        return result
    if kind == "PCOHNUM":
        report = validate(result)
        if not report:
            raise NotSummable(f"sum fails the witness check: {report.detail}", report.offending)
        return result
    rel = lolli_relation(dom, cod)
    if kind == "COH":
        owner: dict = {}
        for idx, f in enumerate(fs):
            for k in f.entries:
                if k in owner:
                    raise NotSummable("summands are not pairwise disjoint", (k, k))
                owner[k] = idx
    report = validate(result)
    if not report:
        raise NotSummable("the union is not a clique", report.offending)
    if kind == "NUCS":
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                for (p, q) in fs[i].entries:
                    for (p2, q2) in fs[j].entries:
                        if rel(pair(p, q), pair(p2, q2)) != "S":
                            raise NotSummable("entries of distinct summands are not strictly coherent",
                                              ((p, q), (p2, q2)))
    return result
