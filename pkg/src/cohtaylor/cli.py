"""Morphism expression language and the ``cohtaylor`` command line.

Source files are s-expressions::

    (model wrel-rat :bang-degree 3 :s-degree 4)
    (obj A (atoms a b) (coh (a b)))
    (obj B (atoms c))
    (let f (lit !A B (((bag a a) c 1/2) ((bag) c 1))))
    (taylor f)

The last bare expression (or, failing that, the last ``let``) is the result.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import analytic as an
from . import laws
from .exponential import (
    bang_mor,
    bang_obj,
    contraction,
    der,
    dig,
    kleisli_compose,
    ocmont,
    seely2,
    weakening,
)
from .model import (
    ArityError,
    Model,
    ModelMismatch,
    Morphism,
    NotSummable,
    Obj,
    ObjectMismatch,
    assoc,
    atoms_obj,
    compose,
    cotuple_of,
    curry,
    degrees_obj,
    dual_obj,
    evaluation,
    identity,
    inj,
    lolli_obj,
    model_from_name,
    MODELS_BY_NAME,
    partial_sum,
    plus_obj,
    proj,
    sym,
    tensor,
    tensor_obj,
    top_obj,
    transpose,
    tuple_of,
    uncurry,
    unit_l,
    unit_obj,
    unit_r,
    validate,
    with_obj,
    zero,
)
from .multiset import ATOM, DEG, PAIR, TAG, UNIT, UNIT_V, atom, bag, deg, pair, tag
from .semiring import SemiringId
from .summability import (
    lift,
    s_inj,
    s_mor,
    s_obj,
    s_proj,
    sdist,
    sigma,
    sproddist,
    sproddist_inv,
    swap,
    theta,
)
from .taylor import (
    coalgebra_D,
    deg_iso,
    homogeneous,
    sdl_explicit,
    sdl_pipeline,
    taylor_composite,
    taylor_functor,
)

ENV_MODEL = "COHTAYLOR_DEFAULT_MODEL"

EXIT_OK, EXIT_SYNTAX, EXIT_SUM, EXIT_ORACLE = 0, 2, 3, 4


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col = line, col


class TypeCheckError(TypeError):
    def __init__(self, message: str, node=None):
        where = f"{node.line}:{node.col}: " if node is not None and node.line else ""
        super().__init__(where + message)
        self.node = node


# S-expressions


@dataclass(frozen=True)
class Sx:
    """An s-expression: ``items`` is a str for atoms, a tuple of Sx for lists."""

    items: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def is_atom(self) -> bool:
        return isinstance(self.items, str)

    @property
    def head(self) -> str | None:
        if self.is_atom or not self.items or not self.items[0].is_atom:
            return None
        return self.items[0].items


def read_all(src: str) -> list[Sx]:
    """Every top-level form of ``src``; ``;`` starts a comment."""
    out: list[Sx] = []
    stack: list[tuple[list, int, int]] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(([], line, col))
            i, col = i + 1, col + 1
            continue
        if ch == ")":
            if not stack:
                raise ParseError("unexpected ')'", line, col)
            items, l0, c0 = stack.pop()
            node = Sx(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
            i, col = i + 1, col + 1
            continue
        start, c0 = i, col
        while i < n and not src[i].isspace() and src[i] not in "();":
            i += 1
        col += i - start
        node = Sx(src[start:i], line, c0)
        (stack[-1][0] if stack else out).append(node)
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unbalanced '(' (missing ')')", l0, c0)
    return out


def write(sx: Sx) -> str:
    if sx.is_atom:
        return sx.items
    return "(" + " ".join(write(x) for x in sx.items) + ")"


# MorExpr


@dataclass(frozen=True)
class MorExpr:
    """A morphism expression node: ``op`` with morphism, object, integer or raw arguments."""

    op: str
    args: tuple
    src: Sx = field(compare=False, repr=False, default=None)

    @property
    def line(self) -> int:
        return self.src.line if self.src else 0

    @property
    def col(self) -> int:
        return self.src.col if self.src else 0


@dataclass(frozen=True)
class ObjRef:
    """An object expression kept as syntax until a session resolves it."""

    sx: Sx


@dataclass(frozen=True)
class Raw:
    sx: Sx


# argument kinds: M morphism, O object, I integer, and a trailing + for one or more
SIGNATURES: dict[str, str] = {
    "id": "O", "zero": "OO",
    "compose": "MM+", "tensor": "MM", "tuple": "M+", "cotuple": "M+",
    "curry": "M", "uncurry": "M", "transpose": "M",
    "sym": "OO", "assoc": "OOO", "unit-l": "O", "unit-r": "O", "ev": "OO",
    "with-proj": "IO+", "plus-inj": "IO+",
    "bang": "M", "der": "O", "dig": "O", "seely2": "OO", "contr": "O", "weak": "O", "ocmont": "OO",
    "S": "M", "proj": "IO", "inj": "IO", "sigma": "O", "theta": "O", "lift": "O", "swap": "O",
    "sdist": "OO", "sproddist": "O+", "sproddist-inv": "O+",
    "sdl": "O", "sdl-explicit": "O", "taylor": "M", "homog": "MI", "sum": "M+", "kleisli": "MM",
    "coalgebra-d": "", "deg-iso": "", "deg-iso-inv": "",
}


def _expand(sig: str, count: int) -> list[str] | None:
    if sig.endswith("+"):
        fixed, rep = sig[:-2], sig[-2]
        if count < len(fixed) + 1:
            return None
        return list(fixed) + [rep] * (count - len(fixed))
    return list(sig) if count == len(sig) else None


def to_expr(sx: Sx) -> MorExpr:
    """Convert an s-expression into a :class:`MorExpr` (shape only, no types)."""
    if sx.is_atom:
        return MorExpr("ref", (sx.items,), sx)
    head = sx.head
    if head is None:
        raise ParseError("expected an operator name", sx.line, sx.col)
    rest = sx.items[1:]
    if head == "lit":
        if len(rest) != 3 or rest[2].is_atom:
            raise ParseError("lit takes a domain, a codomain and an entry list", sx.line, sx.col)
        return MorExpr("lit", (ObjRef(rest[0]), ObjRef(rest[1]), Raw(rest[2])), sx)
    if head not in SIGNATURES:
        raise ParseError(f"unknown operator {head!r}", sx.line, sx.col)
    kinds = _expand(SIGNATURES[head], len(rest))
    if kinds is None:
        raise ParseError(f"{head} takes arguments {SIGNATURES[head] or 'none'}, got {len(rest)}",
                         sx.line, sx.col)
    args = []
    for k, a in zip(kinds, rest):
        if k == "M":
            args.append(to_expr(a))
        elif k == "O":
            args.append(ObjRef(a))
        else:
            if not a.is_atom or not a.items.isdigit():
                raise ParseError(f"{head} expects a natural number", a.line, a.col)
            args.append(int(a.items))
    return MorExpr(head, tuple(args), sx)


def from_expr(e: MorExpr) -> Sx:
    if e.op == "ref":
        return Sx(e.args[0])
    out = [Sx(e.op)]
    for a in e.args:
        if isinstance(a, MorExpr):
            out.append(from_expr(a))
        elif isinstance(a, (ObjRef, Raw)):
            out.append(a.sx)
        else:
            out.append(Sx(str(a)))
    return Sx(tuple(out))


def parse(src: str) -> MorExpr:
    """Parse a single morphism expression."""
    forms = read_all(src)
    if len(forms) != 1:
        raise ParseError(f"expected one expression, found {len(forms)}", 1, 1)
    return to_expr(forms[0])


def unparse(e: MorExpr) -> str:
    return write(from_expr(e))


@dataclass
class Program:
    model: tuple | None = None  # (name, bang degree, s degree) from a (model …) form
    statements: list = field(default_factory=list)  # ("obj", name, Sx) | ("let", name, MorExpr) | ("expr", MorExpr)


def parse_program(src: str) -> Program:
    prog = Program()
    for form in read_all(src):
        head = form.head
        rest = form.items[1:] if not form.is_atom else ()
        if head == "model":
            if prog.statements:
                raise ParseError("(model …) must come before objects and bindings", form.line, form.col)
            if not rest or not rest[0].is_atom:
                raise ParseError("model needs a name", form.line, form.col)
            opts = {"bang-degree": None, "s-degree": None}
            k = 1
            while k < len(rest):
                key = rest[k]
                if not key.is_atom or key.items[1:] not in opts or k + 1 >= len(rest) \
                        or not rest[k + 1].is_atom or not rest[k + 1].items.isdigit():
                    raise ParseError("expected :bang-degree N or :s-degree N", key.line, key.col)
                opts[key.items[1:]] = int(rest[k + 1].items)
                k += 2
            prog.model = (rest[0].items, opts["bang-degree"], opts["s-degree"])
        elif head == "obj":
            if len(rest) < 2 or not rest[0].is_atom:
                raise ParseError("obj needs a name and a definition", form.line, form.col)
            prog.statements.append(("obj", rest[0].items, form))
        elif head == "let":
            if len(rest) != 2 or not rest[0].is_atom:
                raise ParseError("let needs a name and an expression", form.line, form.col)
            prog.statements.append(("let", rest[0].items, to_expr(rest[1])))
        else:
            prog.statements.append(("expr", to_expr(form)))
    return prog


# Sessions, typing and evaluation


@dataclass
class Session:
    model: Model
    bang_degree: int = 2
    s_degree: int = 2
    objects: dict = field(default_factory=dict)
    bindings: dict = field(default_factory=dict)

    # objects

    def obj(self, sx: Sx) -> Obj:
        if sx.is_atom:
            name = sx.items
            if name.startswith("!") and len(name) > 1:
                return bang_obj(self.obj(Sx(name[1:], sx.line, sx.col + 1)), self.bang_degree)
            if name in ("1", "unit"):
                return unit_obj(self.model)
            if name == "top":
                return top_obj(self.model)
            if name in self.objects:
                return self.objects[name]
            raise TypeCheckError(f"unknown object {name!r}", sx)
        head, rest = sx.head, sx.items[1:]
        try:
            if head in ("bang", "S") and len(rest) in (1, 2):
                bound = int(rest[1].items) if len(rest) == 2 else (
                    self.bang_degree if head == "bang" else self.s_degree)
                inner = self.obj(rest[0])
                return bang_obj(inner, bound) if head == "bang" else s_obj(inner, bound)
            if head in ("tensor", "lolli") and len(rest) == 2:
                a, b = self.obj(rest[0]), self.obj(rest[1])
                return tensor_obj(a, b) if head == "tensor" else lolli_obj(a, b)
            if head in ("with", "plus"):
                parts = [self.obj(r) for r in rest]
                return (with_obj if head == "with" else plus_obj)(parts, self.model)
            if head == "degrees" and len(rest) <= 1:
                return degrees_obj(self.model, int(rest[0].items) if rest else self.s_degree)
            if head == "dual" and len(rest) == 1:
                return dual_obj(self.obj(rest[0]))
            if head == "atoms":
                return self._atoms(sx, rest, [])
        except (ValueError, AttributeError) as exc:
            raise TypeCheckError(f"bad object: {exc}", sx) from None
        raise TypeCheckError(f"cannot read an object from {write(sx)}", sx)

    def _atoms(self, sx: Sx, names, clauses) -> Obj:
        if not names or any(not n.is_atom for n in names):
            raise TypeCheckError("atoms takes atom names", sx)
        kw: dict = {"scoh": [], "sincoh": [], "coh": [], "witnesses": []}
        kind = self.model.kind
        for c in clauses:
            head = c.head
            if head in ("coh", "scoh", "sincoh"):
                pairs = []
                for p in c.items[1:]:
                    if p.is_atom or len(p.items) != 2 or not all(x.is_atom for x in p.items):
                        raise TypeCheckError("coherence pairs are written (a b)", p)
                    pairs.append((p.items[0].items, p.items[1].items))
                key = head
                if head == "coh":
                    key = "coh" if kind == "COH" else "scoh"
                kw[key].extend(pairs)
            elif head == "witness":
                vec = {}
                for p in c.items[1:]:
                    if p.is_atom or len(p.items) != 2:
                        raise TypeCheckError("witness coordinates are written (a p/q)", p)
                    vec[p.items[0].items] = Fraction(p.items[1].items)
                kw["witnesses"].append(vec)
            else:
                raise TypeCheckError(f"unknown object clause {write(c)}", c)
        try:
            return atoms_obj(self.model, [n.items for n in names], **kw)
        except ValueError as exc:
            raise TypeCheckError(str(exc), sx) from None

    def declare(self, name: str, form: Sx) -> None:
        body, clauses = form.items[2], form.items[3:]
        if body.head == "atoms":
            self.objects[name] = self._atoms(body, body.items[1:], clauses)
        else:
            if clauses:
                raise TypeCheckError("coherence clauses only apply to (atoms …)", clauses[0])
            self.objects[name] = self.obj(body)

    # points and literals

    def point(self, sx: Sx):
        if sx.is_atom:
            return UNIT if sx.items == "*" else atom(sx.items)
        head, rest = sx.head, sx.items[1:]
        try:
            if head == "bag":
                return bag(self.point(r) for r in rest)
            if head == "pair" and len(rest) == 2:
                return pair(self.point(rest[0]), self.point(rest[1]))
            if head == "in" and len(rest) == 2:
                return tag(int(rest[0].items), self.point(rest[1]))
            if head == "deg" and len(rest) == 1:
                return deg(int(rest[0].items))
        except (TypeError, ValueError):
            pass
        raise TypeCheckError(f"cannot read a point from {write(sx)}", sx)

    def literal(self, e: MorExpr) -> Morphism:
        dom, cod = self.obj(e.args[0].sx), self.obj(e.args[1].sx)
        sr = self.model.semiring
        entries: dict = {}
        for ent in e.args[2].sx.items:
            if ent.is_atom or len(ent.items) not in (2, 3):
                raise TypeCheckError("an entry is (row col) or (row col scalar)", ent)
            p, q = self.point(ent.items[0]), self.point(ent.items[1])
            if not dom.contains(p):
                raise TypeCheckError(f"row {write(ent.items[0])} is not in the domain web", ent)
            if not cod.contains(q):
                raise TypeCheckError(f"column {write(ent.items[1])} is not in the codomain web", ent)
            v = sr.one
            if len(ent.items) == 3:
                try:
                    v = sr.parse(ent.items[2].items)
                except (ValueError, AttributeError, TypeError) as exc:
                    raise TypeCheckError(f"bad scalar: {exc}", ent.items[2]) from None
            entries[(p, q)] = sr.add(entries[(p, q)], v) if (p, q) in entries else v
        return Morphism(dom, cod, entries)


@dataclass
class Typed:
    expr: MorExpr
    dom: Obj
    cod: Obj
    build: Callable[[], Morphism]


def _mismatch(e: MorExpr, what: str, expected: Obj, actual: Obj) -> TypeCheckError:
    return TypeCheckError(f"{e.op}: {what}: expected {expected.describe_short()}, "
                          f"got {actual.describe_short()}", e.src)


def typecheck(e: MorExpr, s: Session) -> Typed:
    """Infer dom/cod for every node; ``build`` then produces the matrix."""
    op, args = e.op, e.args
    if op == "ref":
        name = args[0]
        if name not in s.bindings:
            raise TypeCheckError(f"unbound morphism {name!r}", e.src)
        m = s.bindings[name]
        return Typed(e, m.dom, m.cod, lambda: m)
    if op == "lit":
        m = s.literal(e)
        return Typed(e, m.dom, m.cod, lambda: m)
    subs = [typecheck(a, s) if isinstance(a, MorExpr) else a for a in args]
    objs = [s.obj(a.sx) if isinstance(a, ObjRef) else None for a in args]
    d, D = s.bang_degree, s.s_degree
    morph = [x for x in subs if isinstance(x, Typed)]
    ints = [x for x in subs if isinstance(x, int)]
    os_ = [o for o in objs if o is not None]

    if op == "compose":
        chain = morph
        for left, right in zip(chain, chain[1:]):
            if right.cod != left.dom:
                raise _mismatch(e, "middle object", left.dom, right.cod)

        def build():
            out = chain[-1].build()
            for t in reversed(chain[:-1]):
                out = compose(t.build(), out)
            return out

        return Typed(e, chain[-1].dom, chain[0].cod, build)
    if op == "sum":
        first = morph[0]
        for t in morph[1:]:
            if (t.dom, t.cod) != (first.dom, first.cod):
                raise _mismatch(e, "summand type", lolli_obj(first.dom, first.cod), lolli_obj(t.dom, t.cod))
        return Typed(e, first.dom, first.cod, lambda: partial_sum([t.build() for t in morph]))
    if op == "kleisli":
        g, f = morph
        if g.dom.shape[0] != "bang" or f.dom.shape[0] != "bang":
            raise TypeCheckError("kleisli: both arguments must leave a !-object", e.src)
        if g.dom.shape[1] != f.cod:
            raise _mismatch(e, "intermediate base", g.dom.shape[1], f.cod)
    if op in ("taylor", "homog") and morph[0].dom.shape[0] != "bang":
        raise TypeCheckError(f"{op}: the argument must leave a !-object, "
                             f"got {morph[0].dom.describe_short()}", e.src)
    if op == "homog" and ints[0] > D:
        raise TypeCheckError(f"homog: degree {ints[0]} exceeds the S degree {D}", e.src)
    if op in ("proj", "inj") and ints[0] > D:
        raise TypeCheckError(f"{op}: index {ints[0]} exceeds the S degree {D}", e.src)
    if op in ("with-proj", "plus-inj") and ints[0] >= len(os_):
        raise TypeCheckError(f"{op}: index {ints[0]} out of range", e.src)

    builders: dict[str, Callable[[], Morphism]] = {
        "id": lambda: identity(os_[0]),
        "zero": lambda: zero(os_[0], os_[1]),
        "tensor": lambda: tensor(morph[0].build(), morph[1].build()),
        "tuple": lambda: tuple_of([t.build() for t in morph]),
        "cotuple": lambda: cotuple_of([t.build() for t in morph]),
        "curry": lambda: curry(morph[0].build()),
        "uncurry": lambda: uncurry(morph[0].build()),
        "transpose": lambda: transpose(morph[0].build()),
        "sym": lambda: sym(*os_),
        "assoc": lambda: assoc(*os_),
        "unit-l": lambda: unit_l(os_[0]),
        "unit-r": lambda: unit_r(os_[0]),
        "ev": lambda: evaluation(*os_),
        "with-proj": lambda: proj(ints[0], os_),
        "plus-inj": lambda: inj(ints[0], os_),
        "bang": lambda: bang_mor(morph[0].build(), d),
        "der": lambda: der(bang_obj(os_[0], d)),
        "dig": lambda: dig(bang_obj(os_[0], d)),
        "seely2": lambda: seely2(os_[0], os_[1], d),
        "contr": lambda: contraction(bang_obj(os_[0], d)),
        "weak": lambda: weakening(bang_obj(os_[0], d)),
        "ocmont": lambda: ocmont(os_[0], os_[1], d),
        "S": lambda: s_mor(morph[0].build(), D),
        "proj": lambda: s_proj(ints[0], os_[0], D),
        "inj": lambda: s_inj(ints[0], os_[0], D),
        "sigma": lambda: sigma(os_[0], D),
        "theta": lambda: theta(os_[0], D),
        "lift": lambda: lift(os_[0], D),
        "swap": lambda: swap(os_[0], D),
        "sdist": lambda: sdist(os_[0], os_[1], D),
        "sproddist": lambda: sproddist(os_, D),
        "sproddist-inv": lambda: sproddist_inv(os_, D),
        "sdl": lambda: sdl_pipeline(os_[0], d, D),
        "sdl-explicit": lambda: sdl_explicit(os_[0], d, D),
        "taylor": lambda: taylor_functor(morph[0].build(), D),
        "homog": lambda: homogeneous(morph[0].build(), ints[0], D),
        "kleisli": lambda: kleisli_compose(morph[0].build(), morph[1].build()),
        "coalgebra-d": lambda: coalgebra_D(s.model, d, D),
        "deg-iso": lambda: deg_iso(s.model, d, D)[0],
        "deg-iso-inv": lambda: deg_iso(s.model, d, D)[1],
    }
    build = builders[op]
    # every constructor is lazy, so building here only infers the objects
    try:
        probe = _probe(op, morph, build)
    except (ObjectMismatch, ArityError, ModelMismatch, ValueError) as exc:
        raise TypeCheckError(f"{op}: {exc}", e.src) from None
    return Typed(e, probe.dom, probe.cod, build)


def _probe(op: str, morph: list[Typed], build: Callable[[], Morphism]) -> Morphism:
    if not any(t.expr.op == "sum" for t in morph):
        return build()
    # a sum below this node is only type-checked here; stand in zeros of the right type
    stand_ins = [Typed(t.expr, t.dom, t.cod, (lambda t=t: zero(t.dom, t.cod))) for t in morph]
    saved = [t.build for t in morph]
    for t, st in zip(morph, stand_ins):
        t.build = st.build
    try:
        return build()
    finally:
        for t, b in zip(morph, saved):
            t.build = b


def evaluate(t: Typed, s: Session) -> Morphism:
    return t.build().materialize()


def run_program(prog: Program, s: Session) -> tuple[Morphism, Typed]:
    last_let = last_expr = None
    for st in prog.statements:
        if st[0] == "obj":
            s.declare(st[1], st[2])
        elif st[0] == "let":
            t = typecheck(st[2], s)
            m = evaluate(t, s)
            s.bindings[st[1]] = m
            last_let = (m, t)
        else:
            t = typecheck(st[1], s)
            last_expr = (evaluate(t, s), t)
    result = last_expr or last_let
    if result is None:
        raise TypeCheckError("the program defines no morphism")
    return result


# Output


def point_sx(p) -> str:
    v = p[0]
    if v == ATOM:
        return p[1]
    if v == UNIT_V:
        return "*"
    if v == PAIR:
        return f"(pair {point_sx(p[1])} {point_sx(p[2])})"
    if v == TAG:
        return f"(in {p[1]} {point_sx(p[2])})"
    if v == DEG:
        return f"(deg {p[1]})"
    return "(bag" + "".join(" " + point_sx(q) for q in p[1]) + ")"


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    out = [fmt(header), fmt(["-" * w for w in widths])]
    out += [fmt(r) for r in rows]
    return "\n".join(out)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def render_morphism(m: Morphism, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(m.to_json(), ensure_ascii=False, indent=2)
    sr = m.semiring
    rows = [[point_sx(p), point_sx(q), sr.format(v)] for (p, q), v in m.items()]
    header = ["row", "col", "value"]
    if fmt == "csv":
        return _csv(header, rows)
    title = f"{m.model.name}: {m.dom.describe_short()} -> {m.cod.describe_short()}, {len(rows)} entries"
    return title + "\n" + _table(header, rows)


def render_vector(v: an.Vector, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(v.to_json(), ensure_ascii=False, indent=2)
    rows = [[point_sx(p), an.RATPOS.format(x)] for p, x in v.coords]
    return _csv(["point", "value"], rows) if fmt == "csv" else _table(["point", "value"], rows)


def render_reports(reps: list[laws.CheckReport], fmt: str, timing: bool) -> str:
    if fmt == "json":
        return json.dumps([r.to_json(include_timing=timing) for r in reps], ensure_ascii=False, indent=2)
    header = ["suite", "check", "status", "configs", "reused", "detail"] + (["seconds"] if timing else [])
    rows = []
    for r in reps:
        row = [r.suite, r.name, r.status, str(len(r.configs)), str(r.reused), r.detail]
        if timing:
            row.append(f"{r.elapsed:.2f}")
        rows.append(row)
    if fmt == "csv":
        return _csv(header, rows)
    text = _table(header, rows)
    for r in reps:
        if r.counterexample:
            text += f"\n\n{r.suite}/{r.name} counterexample:\n"
            text += json.dumps(r.counterexample, ensure_ascii=False, indent=2)
    return text


# Command line


def _resolve_model(args, file_model: tuple | None) -> tuple[Model, int, int]:
    name = args.model or (file_model[0] if file_model else None) or os.environ.get(ENV_MODEL) or "rel"
    if args.semiring:
        sid = {"bool": "bool", "nat": "nat", "natinf": "nat", "rat": "rat", "ratpos": "rat"}.get(
            args.semiring.lower())
        if sid is None:
            raise TypeCheckError(f"unknown semiring {args.semiring!r}")
        base = name.split("-")[0].lower()
        if base not in ("rel", "wrel"):
            if model_from_name(name).semiring_id is not SemiringId(sid):
                raise TypeCheckError(f"model {name} does not use the {args.semiring} semiring")
        else:
            name = "rel" if base == "rel" and sid == "bool" else f"wrel-{sid}"
    try:
        model = model_from_name(name)
    except ValueError as exc:
        raise TypeCheckError(str(exc)) from None
    d = args.bang_degree or (file_model[1] if file_model and file_model[1] else None) or 2
    D = args.s_degree or (file_model[2] if file_model and file_model[2] else None) or 2
    return model, d, D


def _load(args) -> tuple[Morphism, Typed, Session]:
    with open(args.file, encoding="utf-8") as fh:
        prog = parse_program(fh.read())
    model, d, D = _resolve_model(args, prog.model)
    s = Session(model, d, D)
    m, t = run_program(prog, s)
    return m, t, s


def _check_valid(m: Morphism, args) -> None:
    if args.no_validate:
        return
    rep = validate(m)
    if not rep:
        off = rep.offending
        detail = rep.detail
        if off and isinstance(off[0], tuple):
            detail += ": " + ", ".join(f"({point_sx(p)} {point_sx(q)})" for p, q in off)
        raise _Invalid(detail)


class _Invalid(Exception):
    pass


class _OracleMismatch(Exception):
    pass


def _cmd_eval(args) -> str:
    m, _, _ = _load(args)
    _check_valid(m, args)
    return render_morphism(m, args.format)


def _cmd_taylor(args) -> str:
    m, _, s = _load(args)
    if m.dom.shape[0] != "bang":
        raise TypeCheckError("taylor: the result must leave a !-object")
    T = taylor_functor(m, s.s_degree)
    rows = list(T.dom.points(s.s_degree))
    bad = laws.compare([T], [taylor_composite(m, s.s_degree)], rows, diagram="closed form = S s ∘ ∂")
    if bad:
        raise _OracleMismatch(json.dumps(bad, ensure_ascii=False))
    T = T.materialize()
    _check_valid(T, args)
    return render_morphism(T, args.format)


def _cmd_homog(args) -> str:
    m, _, s = _load(args)
    if m.dom.shape[0] != "bang":
        raise TypeCheckError("homog: the result must leave a !-object")
    if args.n > s.s_degree:
        raise TypeCheckError(f"homog: degree {args.n} exceeds the S degree {s.s_degree}")
    h = homogeneous(m, args.n, s.s_degree).materialize()
    _check_valid(h, args)
    return render_morphism(h, args.format)


def _read_vector(text: str, web: Obj) -> an.Vector:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TypeCheckError(f"vector is not JSON: {exc}") from None
    try:
        if isinstance(data, dict) and "coords" in data:
            return an.Vector.from_json(web, data)
        if isinstance(data, dict):
            return an.Vector.of(web, {atom(k): Fraction(str(v)) for k, v in data.items()})
        return an.Vector.from_json(web, data)
    except (ValueError, KeyError, TypeError) as exc:
        raise TypeCheckError(f"bad vector: {exc}") from None


def _cmd_fun(args) -> str:
    m, _, s = _load(args)
    if m.semiring is not an.RATPOS or m.dom.shape[0] != "bang":
        raise TypeCheckError("fun needs a rational-valued morphism out of a !-object")
    x = _read_vector(args.vector, m.dom.shape[1])
    return render_vector(an.fun_apply(m, x), args.format)


def _int_list(text: str) -> tuple:
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _cmd_lawcheck(args) -> tuple[str, bool]:
    base = laws.SuiteParams()
    env = os.environ.get(ENV_MODEL)
    models = tuple(args.model.split(",")) if args.model else ((env,) if env else base.models)
    for name in models:
        model_from_name(name)
    params = laws.SuiteParams(
        models=models,
        web_sizes=_int_list(args.web_size) if args.web_size else base.web_sizes,
        bang_degrees=_int_list(args.bang_degree) if args.bang_degree else base.bang_degrees,
        s_degrees=_int_list(args.s_degree) if args.s_degree else base.s_degrees,
        seeds=_int_list(args.seed) if args.seed else base.seeds,
    )
    suites = laws.SUITES if args.suite.upper() == "ALL" else tuple(s.strip() for s in args.suite.split(","))
    reps: list[laws.CheckReport] = []
    for name in suites:
        reps.extend(laws.run_suite(name, params))
    return render_reports(reps, args.format, args.timing), all(r.ok for r in reps)


def _cmd_models(args) -> str:
    rows = []
    for name, m in MODELS_BY_NAME.items():
        coh = {"WCS": "strict coherence", "COH": "coherence (uniform !)", "NUCS": "strict coherence / incoherence",
               "PCOHNUM": "witness vectors"}.get(m.kind, "none")
        rows.append([name, m.kind, m.semiring_id.value, coh])
    header = ["model", "kind", "semiring", "coherence data"]
    if args.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2)
    return _csv(header, rows) if args.format == "csv" else _table(header, rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help=f"model name (default: ${ENV_MODEL} or rel)")
    common.add_argument("--semiring", help="scalar semiring for weighted relations: bool, nat or rat")
    common.add_argument("--bang-degree", help="bound d on multiset sizes")
    common.add_argument("--s-degree", help="bound D on S degrees")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--seed", help="seed or seeds (e.g. 0-24 or 1,5)")
    common.add_argument("--no-validate", action="store_true", help="skip the validity check on results")

    p = argparse.ArgumentParser(prog="cohtaylor", description="Truncated Taylor expansion in webbed models.")
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate a program and print its matrix")
    e.add_argument("file")
    t = sub.add_parser("taylor", parents=[common], help="Taylor functor of the program's result")
    t.add_argument("file")
    h = sub.add_parser("homog", parents=[common], help="degree-N homogeneous component")
    h.add_argument("file")
    h.add_argument("n", type=int)
    f = sub.add_parser("fun", parents=[common], help="evaluate the power series at a vector")
    f.add_argument("file")
    f.add_argument("vector", help="JSON file or inline JSON, e.g. '{\"a\": \"1/2\"}'")
    lc = sub.add_parser("lawcheck", parents=[common], help="run law suites")
    lc.add_argument("--suite", default="ALL", help="suite name(s), comma separated, or ALL")
    lc.add_argument("--web-size", help="base web sizes, e.g. 1-3")
    lc.add_argument("--timing", action="store_true", help="include elapsed seconds (not deterministic)")
    sub.add_parser("models", parents=[common], help="list the available models")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command not in ("lawcheck",):
        for attr in ("bang_degree", "s_degree"):
            val = getattr(args, attr)
            if val is not None:
                if not val.isdigit():
                    parser.error(f"--{attr.replace('_', '-')} must be a natural number here")
                setattr(args, attr, int(val))
    try:
        if args.command == "lawcheck":
            text, ok = _cmd_lawcheck(args)
            print(text)
            return EXIT_OK if ok else EXIT_ORACLE
        handler = {"eval": _cmd_eval, "taylor": _cmd_taylor, "homog": _cmd_homog,
                   "fun": _cmd_fun, "models": _cmd_models}[args.command]
        print(handler(args))
        return EXIT_OK
    except (ParseError, TypeCheckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except NotSummable as exc:
        print(f"not summable: {exc}", file=sys.stderr)
        return EXIT_SUM
    except _Invalid as exc:
        print(f"invalid morphism: {exc}", file=sys.stderr)
        return EXIT_SUM
    except _OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX


if __name__ == "__main__":
    sys.exit(main())
