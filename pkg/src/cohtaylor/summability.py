"""The summability functor ``S`` truncated to degrees ``0..D`` and its bimonad maps.

Points of ``S X`` are ``tag(i, a)`` with ``0 <= i <= D``.  Maps whose entries
would leave the truncated web (sums of degrees above ``D``) simply lose those
entries; law checks only compare the region where this cannot matter.
"""

from __future__ import annotations

from typing import Sequence

from .model import (
    ArityError,
    Morphism,
    NotSummable,
    Obj,
    ObjectMismatch,
    from_relation,
    lazy,
    partial_sum,
    tensor_obj,
    with_obj,
)
from .multiset import pair, tag


def s_obj(X: Obj, D: int) -> Obj:
    if D < 0:
        raise ValueError("S degree must be nonnegative")
    return Obj(X.model, ("S", X, D))


def _require_s(X: Obj, what: str) -> tuple[Obj, int]:
    if X.shape[0] != "S":
        raise ObjectMismatch(f"{what} expects an S-object, got {X!r}")
    return X.shape[1], X.shape[2]


def s_mor(f: Morphism, D: int) -> Morphism:
    """``S f`` with entries ((i,a),(i,b)) = f(a,b)."""
    dom, cod = s_obj(f.dom, D), s_obj(f.cod, D)

    def rowfn(p):
        i = p[1]
        return {tag(i, b): v for b, v in f.row(p[2]).items()}

    support = None
    if f._complete or f._support is not None:
        support = [tag(i, a) for i in range(D + 1) for a in f.support_rows()]
    return lazy(dom, cod, rowfn, "S", support)


def s_proj(i: int, X: Obj, D: int) -> Morphism:
    """π_i : S X → X."""
    return from_relation(s_obj(X, D), X, lambda p: [p[2]] if p[1] == i else [], f"π{i}")


def s_inj(i: int, X: Obj, D: int) -> Morphism:
    """ι_i : X → S X."""
    return from_relation(X, s_obj(X, D), lambda a: [tag(i, a)], f"ι{i}")


def sigma(X: Obj, D: int) -> Morphism:
    """σ = Σ_i π_i : S X → X."""
    return from_relation(s_obj(X, D), X, lambda p: [p[2]], "σ")


def theta(X: Obj, D: int) -> Morphism:
    """θ : S S X → S X with entries ((j,(k,a)), (j+k,a))."""
    SX = s_obj(X, D)
    return from_relation(s_obj(SX, D), SX, lambda p: [tag(p[1] + p[2][1], p[2][2])], "θ")


def lift(X: Obj, D: int) -> Morphism:
    """l : S X → S S X with entries ((i,a), (i,(i,a)))."""
    SX = s_obj(X, D)
    return from_relation(SX, s_obj(SX, D), lambda p: [tag(p[1], p)], "l")


def swap(X: Obj, D: int) -> Morphism:
    """c : S S X → S S X with entries ((i,(j,a)), (j,(i,a)))."""
    SSX = s_obj(s_obj(X, D), D)
    return from_relation(SSX, SSX, lambda p: [tag(p[2][1], tag(p[1], p[2][2]))], "c")


def sstr_l(X: Obj, Y: Obj, D: int) -> Morphism:
    """Left strength S X ⊗ Y → S (X ⊗ Y)."""
    dom = tensor_obj(s_obj(X, D), Y)
    cod = s_obj(tensor_obj(X, Y), D)
    return from_relation(dom, cod, lambda p: [tag(p[1][1], pair(p[1][2], p[2]))], "strL")


def sstr_r(X: Obj, Y: Obj, D: int) -> Morphism:
    """Right strength X ⊗ S Y → S (X ⊗ Y)."""
    dom = tensor_obj(X, s_obj(Y, D))
    cod = s_obj(tensor_obj(X, Y), D)
    return from_relation(dom, cod, lambda p: [tag(p[2][1], pair(p[1], p[2][2]))], "strR")


def sdist(X: Obj, Y: Obj, D: int) -> Morphism:
    """Cauchy-product distribution S X ⊗ S Y → S (X ⊗ Y)."""
    dom = tensor_obj(s_obj(X, D), s_obj(Y, D))
    cod = s_obj(tensor_obj(X, Y), D)
    return from_relation(dom, cod, lambda p: [tag(p[1][1] + p[2][1], pair(p[1][2], p[2][2]))],
                         "Sdist")


def sproddist(objs: Sequence[Obj], D: int) -> Morphism:
    """S(&X_i) → &(S X_i) with entries ((n,(i,a)), (i,(n,a)))."""
    W = with_obj(objs)
    cod = with_obj([s_obj(X, D) for X in objs], W.model)
    return from_relation(s_obj(W, D), cod, lambda p: [tag(p[2][1], tag(p[1], p[2][2]))],
                         "SprodDist")


def sproddist_inv(objs: Sequence[Obj], D: int) -> Morphism:
    W = with_obj(objs)
    dom = with_obj([s_obj(X, D) for X in objs], W.model)
    return from_relation(dom, s_obj(W, D), lambda p: [tag(p[2][1], tag(p[1], p[2][2]))],
                         "SprodDist⁻¹")


def witness(fs: Sequence[Morphism], D: int) -> Morphism:
    """The unique h : A → S B with π_i ∘ h = f_i, if the family is summable."""
    fs = list(fs)
    if not fs:
        raise ArityError("witness needs a nonempty family")
    if len(fs) > D + 1:
        raise ArityError(f"{len(fs)} morphisms do not fit in degrees 0..{D}")
    partial_sum(fs)
    A, B = fs[0].dom, fs[0].cod
    entries = {}
    for i, f in enumerate(fs):
        for (a, b), v in f.entries.items():
            entries[(a, tag(i, b))] = v
    return Morphism(A, s_obj(B, D), entries)


S_STRUCTURAL = {
    "PROJ": s_proj,
    "INJ": s_inj,
    "SIGMA": sigma,
    "THETA": theta,
    "LIFT": lift,
    "SWAP": swap,
    "SDIST": sdist,
    "SSTR_L": sstr_l,
    "SSTR_R": sstr_r,
    "SPRODDIST": sproddist,
    "SPRODDIST_INV": sproddist_inv,
}


# How each map moves the degree weight of a point (audited in the tests).
S_GRADING = {
    "PROJ": "lowers",
    "INJ": "raises",
    "SIGMA": "lowers",
    "THETA": "preserves",
    "LIFT": "raises",
    "SWAP": "preserves",
    "SDIST": "preserves",
    "SSTR_L": "preserves",
    "SSTR_R": "preserves",
    "SPRODDIST": "preserves",
    "SPRODDIST_INV": "preserves",
}


def s_structural(name: str, *args) -> Morphism:
    try:
        builder = S_STRUCTURAL[name.upper()]
    except KeyError:
        raise ArityError(f"unknown summability map {name!r}") from None
    try:
        return builder(*args)
    except TypeError as exc:
        if isinstance(exc, ObjectMismatch):
            raise
        raise ArityError(f"{name}: {exc}") from None


__all__ = [
    "NotSummable",
    "S_GRADING",
    "s_obj",
    "s_mor",
    "s_proj",
    "s_inj",
    "sigma",
    "theta",
    "lift",
    "swap",
    "sstr_l",
    "sstr_r",
    "sdist",
    "sproddist",
    "sproddist_inv",
    "witness",
    "s_structural",
]
