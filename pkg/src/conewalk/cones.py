"""Wedge descriptions: opening angle, boundary slope b = tan(alpha), and the
scalar field the slope lives in."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import AngleNotRepresentable, ValidationError
from .scalars import (
    Backend,
    FloatBackend,
    QuadElement,
    RATIONAL,
    bigfloat,
    quadratic,
    scalar_to_float,
)

#: sentinel slope for alpha = pi/2 (boundary ray is the x2-axis)
VERTICAL = "vertical"

# exact tan(pi/m) values in the supported fields
_EXACT_TAN = {
    1: (RATIONAL, Fraction(0)),
    4: (RATIONAL, Fraction(1)),
    3: (quadratic(3), QuadElement(0, 1, 3)),
    6: (quadratic(3), QuadElement(0, Fraction(1, 3), 3)),
    8: (quadratic(2), QuadElement(-1, 1, 2)),
    12: (quadratic(3), QuadElement(2, -1, 3)),
}


@dataclass(frozen=True)
class ConeSpec:
    """A wedge between the rays x2 = 0 and x2 = b*x1 (b = tan(alpha))."""

    m: int | None  # integer mode: alpha = pi/m; None for a general angle
    b: object  # scalar slope, or VERTICAL for alpha = pi/2
    backend: Backend
    p_alpha: object  # pi/alpha as Fraction (integer mode) or mpf
    half_plane: bool = False  # m = 1: the boundary degenerates to the x1-axis

    @property
    def vertical(self) -> bool:
        return self.b is VERTICAL or (isinstance(self.b, str) and self.b == VERTICAL)

    def alpha_float(self) -> float:
        if self.m is not None:
            return math.pi / self.m
        return math.pi / float(self.p_alpha)

    def b_float(self) -> float:
        if self.vertical:
            raise ValidationError("vertical cone has no finite slope")
        return scalar_to_float(self.b)

    def p_alpha_float(self) -> float:
        return float(self.p_alpha)


def make_cone(m: int, backend: Backend | None = None) -> ConeSpec:
    """Wedge of opening pi/m.  Default field: rationals for m in {1, 4},
    quadratic fields for m in {3, 6, 8, 12}, vertical for m = 2, and 256-bit
    floats otherwise.  An explicit exact backend that cannot represent
    tan(pi/m) raises AngleNotRepresentable."""
    if m < 1:
        raise ValidationError("m must be >= 1")
    if m == 2:
        return ConeSpec(m=2, b=VERTICAL, backend=backend or RATIONAL, p_alpha=Fraction(2))
    exact = _EXACT_TAN.get(m)
    if backend is None:
        if exact is not None:
            backend, b = exact
        else:
            backend = bigfloat()
            b = backend.tan_pi_over(m)
        return ConeSpec(m=m, b=b, backend=backend, p_alpha=Fraction(m), half_plane=(m == 1))
    if isinstance(backend, FloatBackend):
        return ConeSpec(
            m=m, b=backend.tan_pi_over(m), backend=backend, p_alpha=Fraction(m), half_plane=(m == 1)
        )
    if exact is None:
        raise AngleNotRepresentable(f"tan(pi/{m}) is not in a supported exact field")
    try:
        b = backend.convert(exact[1])
    except ValueError as e:
        raise AngleNotRepresentable(f"tan(pi/{m}) not representable in {backend.name}") from e
    return ConeSpec(m=m, b=b, backend=backend, p_alpha=Fraction(m), half_plane=(m == 1))


def cone_from_slope(b, backend: Backend | None = None) -> ConeSpec:
    """General-angle wedge from a slope b = tan(alpha), alpha in (0, pi).
    alpha is the principal angle: atan(b) for b > 0, pi/2 + |atan(b)|-style
    continuation for b < 0."""
    backend = backend or bigfloat()
    bf = scalar_to_float(b)
    alpha = math.atan(bf)
    if alpha <= 0:
        alpha += math.pi
    if not isinstance(backend, FloatBackend):
        backend_f = bigfloat()
    else:
        backend_f = backend
    with backend_f.workprec():
        alpha_mp = mpmath.atan(backend_f.convert(b))
        if alpha_mp <= 0:
            alpha_mp += mpmath.pi
        p_alpha = mpmath.pi / alpha_mp
    # detect an exact pi/m opening
    m = detect_integer_m(alpha)
    return ConeSpec(m=m, b=b, backend=backend, p_alpha=Fraction(m) if m else p_alpha)


def detect_integer_m(alpha: float, tol: float = 1e-12, max_m: int = 64) -> int | None:
    for m in range(1, max_m + 1):
        if abs(alpha - math.pi / m) < tol:
            return m
    return None
