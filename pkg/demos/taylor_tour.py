"""Walk through the Taylor toolkit on a small quadratic series.

Run with ``python3 demos/taylor_tour.py``.
"""

from fractions import Fraction

from cohtaylor.analytic import Vector, deriv, fun_apply, taylor_functional
from cohtaylor.exponential import bang_obj
from cohtaylor.laws import quadratic_taylor_support
from cohtaylor.model import WREL_RAT, Morphism, atoms_obj
from cohtaylor.multiset import atom, bag, show
from cohtaylor.taylor import homogeneous, sdl_explicit, sdl_pipeline, taylor_functor

a, b = atom("a"), atom("b")
A, B = atoms_obj(WREL_RAT, ["a"]), atoms_obj(WREL_RAT, ["b"])

# s(x) = 1/3 x_a^2 + 1/2 x_a, as a matrix !A -> B
s = Morphism(bang_obj(A, 2), B, {(bag([a, a]), b): Fraction(1, 3), (bag([a]), b): Fraction(1, 2)})

print("Taylor functor T(s), degrees up to 2:")
for (p, q), v in taylor_functor(s, 2).items():
    print(f"  {show(p):28} -> {show(q):8} {v}")

print("\nhomogeneous parts:")
for n in range(3):
    part = homogeneous(s, n, 2).items()
    print(f"  degree {n}: " + (", ".join(f"{show(p)} -> {show(q)} {v}" for (p, q), v in part) or "0"))

x = Vector.of(A, {a: Fraction(2)})
u = Vector.of(A, {a: Fraction(1)})
zero = Vector.of(A, {})
print("\nFun s(2) =", fun_apply(s, x)[b])
print("Deriv^1 s(2)(1) =", deriv(s, 1, x, [u])[b])
print("Taylor components along (x, u, 0):", ", ".join(str(c[b]) for c in taylor_functional(s, [x, u, zero])))

closed, composite = sdl_explicit(A, 2, 2), sdl_pipeline(A, 2, 2)
same = all(closed.row(p) == composite.row(p) for p in closed.dom.web if closed.dom.weight(p) <= 2)
print("\nclosed-form ∂ equals the composite ∂ on {a}, d = D = 2:", same)

print("\nsupport of T([a,a] -> b) at D = 2:")
for model in ("coh", "wcs"):
    print(f"  {model}: {sorted(show(p) + ' -> ' + show(q) for p, q in quadratic_taylor_support(model, 2))}")
