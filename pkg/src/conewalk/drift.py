"""The one-step expectation operator f -> E[f(x + X)] - f(x) applied
symbolically to polynomials through the Taylor/moment expansion, plus an
independent finite-sum checker over a walk's actual support."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InsufficientMoments
from .poly import Poly, laplacian
from .walks import MomentTable, WalkSpec


@dataclass(frozen=True)
class DriftExpansion:
    """E[f(x+X)] - f(x) split as (1/2)Laplacian(f) + remainder; the remainder
    collects the order >= 3 moment terms and has degree <= deg(f) - 3."""

    input: Poly
    output: Poly
    laplacian_part: Poly
    remainder: Poly


def drift_expansion(f: Poly, mu: MomentTable) -> DriftExpansion:
    """Apply the operator using normalized moments: first-order terms vanish,
    second-order terms reduce to half the Laplacian, and orders 3..deg(f)
    contribute (1/(k! l!)) * d^(k+l) f / dx1^k dx2^l * E[X1^k X2^l].

    The order-1 and order-2 terms are never computed and cancelled; they are
    omitted analytically, which keeps float backends free of cancellation."""
    n = f.degree()
    if n > mu.order:
        raise InsufficientMoments(f"degree {n} needs moments of order >= {n}, have {mu.order}")
    lap = laplacian(f)
    half = lap.map_coeffs(lambda c: c / 2)
    rem = Poly.zero()
    for total in range(3, n + 1):
        for k in range(total + 1):
            l = total - k
            d = f.diff(1, k).diff(2, l)
            if d.is_zero():
                continue
            wkl = mu(k, l) / (math.factorial(k) * math.factorial(l))
            rem = rem + d.map_coeffs(lambda c: c * wkl)
    return DriftExpansion(input=f, output=half + rem, laplacian_part=half, remainder=rem)


def one_step_residual(h: Poly, w: WalkSpec, y: tuple[int, int]):
    """Exact finite sum  sum_atoms p * h(T(y+dy)) - h(T y)  at a quadrant
    lattice point y; zero iff h is one-step harmonic there.  This is the
    independent oracle for the symbolic expansion."""
    y1, y2 = y
    x1, x2 = w.map_point(y1, y2)
    acc = -h.evaluate(x1, x2)
    for a, b, p in w.atoms:
        z1, z2 = w.map_point(y1 + a, y2 + b)
        acc = acc + p * h.evaluate(z1, z2)
    return acc
