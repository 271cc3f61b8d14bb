"""Power-series functions of coKleisli matrices over exact nonnegative rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Morphism, Obj, ObjectMismatch, pcoh_gauge
from .multiset import Multiset, Point, factorial, mpart, ordered_enumerations, point_from_json, point_to_json, sub_multisets, tag
from .semiring import INF, RATPOS


class BoundViolation(ValueError):
    def __init__(self, message: str, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


@dataclass(frozen=True)
class Vector:
    """Finitely supported vector with exact nonnegative coordinates over a web."""

    web: Obj
    coords: tuple  # sorted ((point, Fraction), ...) without zeros

    @classmethod
    def of(cls, web: Obj, coords: dict | None = None) -> "Vector":
        items = []
        for p, v in (coords or {}).items():
            if v is not INF:
                v = Fraction(v)
                if v < 0:
                    raise ValueError("coordinates must be nonnegative")
                if v == 0:
                    continue
            if not web.contains(p):
                raise ValueError(f"point {p!r} is not in the web")
            items.append((p, v))
        return cls(web, tuple(sorted(items)))

    def as_dict(self) -> dict:
        return dict(self.coords)

    def __getitem__(self, p: Point):
        return dict(self.coords).get(p, Fraction(0))

    def scale(self, c: Fraction) -> "Vector":
        return Vector.of(self.web, {p: RATPOS.mul(Fraction(c), v) for p, v in self.coords})

    def __add__(self, other: "Vector") -> "Vector":
        out = self.as_dict()
        for p, v in other.coords:
            out[p] = RATPOS.add(out.get(p, Fraction(0)), v)
        return Vector.of(self.web, out)

    def to_json(self) -> dict:
        return {"web": self.web.to_json(),
                "coords": [[point_to_json(p), RATPOS.format(v)] for p, v in self.coords]}

    @classmethod
    def from_json(cls, web: Obj, data) -> "Vector":
        coords = data["coords"] if isinstance(data, dict) else data
        return cls.of(web, {point_from_json(p): RATPOS.parse(str(v)) for p, v in coords})


def _require_rat(t: Morphism) -> None:
    if t.semiring is not RATPOS:
        raise ObjectMismatch("power-series evaluation needs rational scalars")
    if t.dom.shape[0] != "bang":
        raise ObjectMismatch("power-series evaluation needs a morphism out of a !-object")


def promotion(x: dict, m: Multiset):
    """x^m = Π_a x_a^{m(a)}."""
    out = RATPOS.one
    for a, k in m.items:
        out = RATPOS.mul(out, RATPOS.power(x.get(a, RATPOS.zero), k))
        if out == 0:
            break
    return out


def fun_apply(t: Morphism, x: Vector) -> Vector:
    """(Fun t (x))_b = Σ_m t_{m,b} x^m."""
    _require_rat(t)
    xs = x.as_dict()
    out: dict = {}
    for (mp, b), v in t.entries.items():
        c = RATPOS.mul(v, promotion(xs, mp[1]))
        if c != 0:
            out[b] = RATPOS.add(out.get(b, RATPOS.zero), c)
    return Vector.of(t.cod, out)


def deriv(t: Morphism, n: int, x: Vector, us: Sequence[Vector]) -> Vector:
    """Deriv^n(x)(u^1..u^n)_b = Σ ((m+[ā])!/m!) t_{m+[ā],b} x^m Π_k u^k_{a_k}."""
    _require_rat(t)
    if len(us) != n:
        raise ValueError(f"deriv of order {n} needs {n} directions")
    xs = x.as_dict()
    uds = [u.as_dict() for u in us]
    out: dict = {}
    for (qp, b), v in t.entries.items():
        q = qp[1]
        if q.size < n:
            continue
        qf = factorial(q)
        for taken in sub_multisets(q):
            if taken.size != n:
                continue
            m = q - taken
            base = RATPOS.mul(v, promotion(xs, m))
            if base == 0:
                continue
            base = RATPOS.mul(base, Fraction(qf, factorial(m)))
            dirs = RATPOS.zero
            for order in ordered_enumerations(taken):
                term = RATPOS.one
                for u, a in zip(uds, order):
                    term = RATPOS.mul(term, u.get(a, RATPOS.zero))
                dirs = RATPOS.add(dirs, term)
            c = RATPOS.mul(base, dirs)
            if c != 0:
                out[b] = RATPOS.add(out.get(b, RATPOS.zero), c)
    return Vector.of(t.cod, out)


def taylor_functional(t: Morphism, xs: Sequence[Vector]) -> list[Vector]:
    """Component n = Σ_{μ ∈ mpart(n)} (1/μ!) Deriv^{|μ|}(x(0))(x(i) repeated μ(i) times)."""
    _require_rat(t)
    out = []
    for n in range(len(xs)):
        acc: dict = {}
        for mu in mpart(n):
            if any(i >= len(xs) for i in (p[1] for p in mu.support())):
                continue
            dirs = [xs[p[1]] for p in mu]
            term = deriv(t, mu.size, xs[0], dirs).scale(Fraction(1, factorial(mu)))
            for b, v in term.coords:
                acc[b] = RATPOS.add(acc.get(b, RATPOS.zero), v)
        out.append(Vector.of(t.cod, acc))
    return out


def s_vector(xs: Sequence[Vector], D: int, SX: Obj) -> Vector:
    """The S-vector with coordinates (i, a) ↦ x(i)_a."""
    return Vector.of(SX, {tag(i, a): v for i, x in enumerate(xs[: D + 1]) for a, v in x.coords})


def s_components(v: Vector, D: int, Y: Obj) -> list[Vector]:
    comps: list[dict] = [{} for _ in range(D + 1)]
    for p, c in v.coords:
        comps[p[1]][p[2]] = c
    return [Vector.of(Y, c) for c in comps]


@dataclass
class WitnessReport:
    ok: bool
    sound_only: bool
    checked: int
    violation: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _bound(Y: Obj, vec: dict, cod_witnesses: Sequence[Vector]):
    g = pcoh_gauge(Y, vec)
    if g is not None:
        return g <= 1, g
    for w in cod_witnesses:
        wd = w.as_dict()
        if all(v <= wd.get(b, 0) for b, v in vec.items()):
            return True, None
    return False, None


def witness_check(t: Morphism, witnesses: Sequence[Vector], D: int,
                  cod_witnesses: Sequence[Vector] = (), families: Sequence[Sequence[Vector]] = (),
                  raise_on_violation: bool = False) -> WitnessReport:
    """Check Fun t and the summed Taylor components stay in the codomain's unit ball.

    Each base witness ``x`` is also split into ``D + 1`` equal parts, a
    summable family whose Taylor components must sum to at most Fun t(x).
    """
    _require_rat(t)
    decidable = pcoh_gauge(t.cod, {}) is not None
    checked = 0
    fams = [list(f) for f in families]
    for x in witnesses:
        fams.append([x.scale(Fraction(1, D + 1))] * (D + 1))
        y = fun_apply(t, x).as_dict()
        ok, g = _bound(t.cod, y, cod_witnesses)
        checked += 1
        if not ok:
            worst = max(y, key=lambda b: y[b]) if y else None
            report = WitnessReport(False, not decidable, checked, ("fun", x, worst),
                                   f"Fun t(x) has norm {g}")
            if raise_on_violation:
                raise BoundViolation(report.detail, worst)
            return report
    for fam in fams:
        comps = taylor_functional(t, fam)
        total: dict = {}
        for c in comps:
            for b, v in c.coords:
                total[b] = total.get(b, 0) + v
        ok, g = _bound(t.cod, total, cod_witnesses)
        checked += 1
        if not ok:
            worst = max(total, key=lambda b: total[b]) if total else None
            report = WitnessReport(False, not decidable, checked, ("taylor", fam, worst),
                                   f"summed Taylor components have norm {g}")
            if raise_on_violation:
                raise BoundViolation(report.detail, worst)
            return report
    return WitnessReport(True, not decidable, checked)
