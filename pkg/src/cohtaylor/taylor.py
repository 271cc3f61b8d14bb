"""Degrees object, its analytic coalgebra, and the Taylor distributive law.

The law ``∂ : !S X → S !X`` is computed twice: :func:`sdl_pipeline` assembles
it from currying, ``!ev``, the lax monoidal map and the coalgebra on degrees;
:func:`sdl_explicit` writes down the closed form m!/p!.  Neither calls the
other, so comparing them is a genuine oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .exponential import bang_mor, bang_obj, bange_obj, ocmont
from .model import (
    ArityError,
    Model,
    Morphism,
    Obj,
    ObjectMismatch,
    compose,
    compose_all,
    curry,
    degrees_obj,
    evaluation,
    from_relation,
    identity,
    lazy,
    lolli_obj,
    tensor,
    tensor_obj,
    unit_obj,
)
from .multiset import BAG, UNIT, bag, deg, factorial, pair, tag
from .summability import s_inj, s_mor, s_obj, s_proj


class NonIntegralCoefficient(ArithmeticError):
    pass


# Degrees and their bimonoid


def w(model: Model, i: int, D: int) -> Morphism:
    """w_i : 1 → D."""
    return from_relation(unit_obj(model), degrees_obj(model, D), lambda p: [deg(i)], f"w{i}")


def diag(model: Model, D: int) -> Morphism:
    """w̄ : 1 → D, hitting every degree."""
    return from_relation(unit_obj(model), degrees_obj(model, D),
                         lambda p: [deg(n) for n in range(D + 1)], "w̄")


def counit(model: Model, D: int) -> Morphism:
    return from_relation(degrees_obj(model, D), unit_obj(model),
                         lambda p: [UNIT] if p[1] == 0 else [], "counit")


def comult(model: Model, D: int) -> Morphism:
    Dg = degrees_obj(model, D)
    return from_relation(Dg, tensor_obj(Dg, Dg),
                         lambda p: [pair(deg(i), deg(p[1] - i)) for i in range(p[1] + 1)], "comult")


def mult(model: Model, D: int) -> Morphism:
    Dg = degrees_obj(model, D)
    return from_relation(tensor_obj(Dg, Dg), Dg, lambda p: [p[1]] if p[1] == p[2] else [], "mult")


def degree_proj(model: Model, n: int, D: int) -> Morphism:
    """Projection D → 1 onto degree ``n``."""
    return from_relation(degrees_obj(model, D), unit_obj(model),
                         lambda p: [UNIT] if p[1] == n else [], f"π{n}")


def degrees_structural(name: str, model: Model, D: int, i: int | None = None) -> Morphism:
    name = name.upper()
    if name == "W":
        if i is None:
            raise ArityError("W needs a degree index")
        return w(model, i, D)
    table = {"DIAG": diag, "UNIT": diag, "COUNIT": counit, "COMULT": comult, "MULT": mult}
    if name not in table:
        raise ArityError(f"unknown degrees map {name!r}")
    return table[name](model, D)


def _degree_bags(n: int, D: int, d: int):
    """Multisets of degrees (each ≤ D) of size ≤ d summing to n."""

    def positive_parts(rest, largest, room):
        if rest == 0:
            yield []
            return
        if room == 0:
            return
        for first in range(min(rest, largest), 0, -1):
            for tail in positive_parts(rest - first, first, room - 1):
                yield [first] + tail

    for parts in positive_parts(n, D, d):
        for zeros in range(d - len(parts) + 1):
            yield bag(deg(i) for i in parts + [0] * zeros)


def coalgebra_D(model: Model, d: int, D: int) -> Morphism:
    """∂_D : D → !D with entries (n, [i_1..i_k]) whenever Σ i_j = n."""
    Dg = degrees_obj(model, D)
    return from_relation(Dg, bang_obj(Dg, d), lambda p: list(_degree_bags(p[1], D, d)), "∂D")


# The distributive law


def s_to_lolli(X: Obj, D: int) -> Morphism:
    """S X ≅ D ⊸ X, (i, a) ↦ (i, a)."""
    Dg = degrees_obj(X.model, D)
    return from_relation(s_obj(X, D), lolli_obj(Dg, X), lambda p: [pair(deg(p[1]), p[2])], "S≅")


def lolli_to_s(X: Obj, D: int) -> Morphism:
    Dg = degrees_obj(X.model, D)
    return from_relation(lolli_obj(Dg, X), s_obj(X, D), lambda p: [tag(p[1][1], p[2])], "≅S")


def sdl_pipeline(X: Obj, d: int, D: int) -> Morphism:
    """∂ = cur(!ev ∘ μ ∘ (id ⊗ ∂_D)), transported along S ≅ D ⊸ _."""
    model = X.model
    Dg = degrees_obj(model, D)
    L = lolli_obj(Dg, X)
    bang_L = bang_obj(L, d)
    spread = tensor(identity(bang_L), coalgebra_D(model, d, D))
    pairing = ocmont(L, Dg, d)
    apply_all = bang_mor(evaluation(Dg, X), d)
    mate = compose_all(apply_all, pairing, spread)
    law = curry(mate)
    into = bang_mor(s_to_lolli(X, D), d)
    out = lolli_to_s(bang_obj(X, d), D)
    return compose_all(out, law, into)


def sdl_explicit(X: Obj, d: int, D: int) -> Morphism:
    """Closed form: ∂_{p,(n,m)} = m!/p! when p = [(i_j, a_j)], Σ i_j = n, m = [a_j]."""
    SX = s_obj(X, D)
    dom = bang_obj(SX, d)
    cod = s_obj(bang_obj(X, d), D)
    sr = X.model.semiring
    contains = cod._contains

    def rowfn(pp):
        p = pp[1]
        n = sum(t[1] * k for t, k in p.items)
        m = p.map(lambda t: t[2])
        coef = Fraction(factorial(m), factorial(p))
        if coef.denominator != 1:
            raise NonIntegralCoefficient(f"m!/p! = {coef} at p = {p!r}")
        target = tag(n, (BAG, m))
        return {target: sr.from_nat(coef.numerator)} if contains(target) else {}

    return lazy(dom, cod, rowfn, "∂")


def taylor_functor(s: Morphism, D: int) -> Morphism:
    """T(s) : !S X → S Y in closed form δ_{n,Σi} (m!/p!) s_{m,b}."""
    if s.dom.shape[0] != "bang":
        raise ObjectMismatch("the Taylor functor acts on morphisms out of a !-object")
    X, d = s.dom.shape[1], s.dom.shape[2]
    dom = bang_obj(s_obj(X, D), d)
    cod = s_obj(s.cod, D)
    sr = s.semiring

    def rowfn(pp):
        p = pp[1]
        n = sum(t[1] * k for t, k in p.items)
        if n > D:
            return {}
        m = p.map(lambda t: t[2])
        coef = sr.from_nat(factorial(m) // factorial(p))
        return {tag(n, b): sr.mul(coef, v) for b, v in s.row((BAG, m)).items()}

    return lazy(dom, cod, rowfn, "T")


def taylor_composite(s: Morphism, D: int, law: Morphism | None = None) -> Morphism:
    """T(s) as S(s) ∘ ∂ (∂ from the pipeline unless given)."""
    X, d = s.dom.shape[1], s.dom.shape[2]
    if law is None:
        law = sdl_pipeline(X, d, D)
    return compose(s_mor(s, D), law)


def homogeneous(s: Morphism, n: int, D: int) -> Morphism:
    """π_n ∘ T(s) ∘ !ι_1, the degree-n part of ``s``."""
    if n > D:
        raise ArityError(f"homogeneous degree {n} exceeds the S degree {D}")
    X, d = s.dom.shape[1], s.dom.shape[2]
    return compose_all(s_proj(n, s.cod, D), taylor_functor(s, D), bang_mor(s_inj(1, X, D), d))


# !1 ≅ D


def generalized_dereliction(model: Model, n: int, d: int) -> Morphism:
    """!1 → 1 with the single entry (n[*], *)."""
    return from_relation(bang_obj(unit_obj(model), d), unit_obj(model),
                         lambda p: [UNIT] if p[1].size == n else [], f"der{n}")


def deg_iso(model: Model, d: int, D: int) -> tuple[Morphism, Morphism]:
    """(∂deg : !1 → D, its inverse !π_1 ∘ ∂_D : D → !1)."""
    B1 = bang_obj(unit_obj(model), d)
    Dg = degrees_obj(model, D)
    ders = [generalized_dereliction(model, n, d) for n in range(D + 1)]

    def rowfn(p):
        out = {}
        for n, f in enumerate(ders):
            for _, v in f.row(p).items():
                out[deg(n)] = v
        return out

    forward = lazy(B1, Dg, rowfn, "∂deg")
    backward = compose(bang_mor(degree_proj(model, 1, D), d), coalgebra_D(model, d, D))
    return forward, backward


# The NUCS negative check


@dataclass
class NegativeResult:
    degrees: int
    bijections_tried: int
    isomorphism: tuple | None
    reasons: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.isomorphism is not None


def nucs_negative(D: int, model: Model | None = None) -> NegativeResult:
    """Search all bijections between truncated !e(1) and D for a coherence isomorphism."""
    from .model import NUCS

    model = model or NUCS
    E = bange_obj(unit_obj(model), D)
    Dg = degrees_obj(model, D)
    left = [bag([UNIT] * k) for k in range(D + 1)]
    right = list(Dg.web)
    tried = 0
    reasons = []
    for perm in permutations(right):
        tried += 1
        mapping = dict(zip(left, perm))
        bad = None
        for i, x in enumerate(left):
            for y in left[i:]:
                if E.rel(x, y) != Dg.rel(mapping[x], mapping[y]):
                    bad = (x[1].size, y[1].size, E.rel(x, y), Dg.rel(mapping[x], mapping[y]))
                    break
            if bad:
                break
        if bad is None:
            return NegativeResult(D, tried, tuple((x[1].size, mapping[x][1]) for x in left))
        reasons.append(bad)
    return NegativeResult(D, tried, None, reasons)
