"""Walkthrough: building the harmonic polynomial of a lattice walk.

The skewed built-in walk lives on the quadrant, has nonzero third moments,
and maps onto the opening-pi/4 wedge through a fully rational transform, so
everything here is exact arithmetic over the rationals.
"""

from conewalk import (
    build_harmonic_alt,
    construct_harmonic,
    one_step_residual,
    push_moments,
    skewed_walk,
)

w = skewed_walk()
print("walk atoms:", w.atoms)
tr = w.transform
print(f"normalizing transform: [[{tr.t11}, {tr.t12}], [0, {tr.t22}]]")
print(f"image wedge: opening pi/{w.cone.m}, boundary slope b = {w.cone.b}")

mu = push_moments(w, 4)
print("\nnormalized third moments of the transformed step:")
for k, l in ((3, 0), (2, 1), (1, 2), (0, 3)):
    print(f"  E[X1^{k} X2^{l}] = {mu(k, l)}")

res = construct_harmonic(w.cone.m, mu)
print("\nharmonic polynomial h =", res.h)
print("correction (h minus the classical wedge polynomial):", res.correction)
print("symbolic one-step drift of h:", res.residual, "(must be zero)")
print("vanishes on both boundary rays:", res.boundary_ok)

print("\nfinite-sum oracle at a few lattice points (must all be 0):")
for y in ((1, 1), (3, 2), (10, 7)):
    print(f"  sum_atoms p * h(T(y+dy)) - h(Ty) at y={y}:", one_step_residual(res.h, w, y))

h_alt = build_harmonic_alt(w.cone.m, mu)
print("\nindependent trigonometric-series construction agrees exactly:",
      h_alt == res.h)
