"""Construction of the discrete harmonic polynomial for a wedge of opening
pi/m: the classical degree-m wedge polynomial plus a lower-degree correction
whose coefficients are linear in the walk's mixed moments.

The builder works top-down.  The candidate starts as the degree-m classical
polynomial (whose one-step drift has degree <= m-3); each pass solves one
boundary system to add the homogeneous correction that cancels the current
top of the drift, which only disturbs strictly lower degrees.  After the
degree-2 pass the drift is identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cones import ConeSpec, VERTICAL, make_cone
from .drift import drift_expansion
from .errors import (
    InsufficientMoments,
    InternalError,
    SingularAngle,
    ValidationError,
)
from .linsys import build_matrix, solve_system
from .poly import Poly, im_power
from .scalars import Backend, FloatBackend, scalar_to_float
from .walks import MomentTable


@dataclass(frozen=True)
class HarmonicResult:
    """A built harmonic polynomial and the evidence that it is one."""

    m: int
    cone: ConeSpec
    h: Poly
    correction: Poly  # h minus the classical top part; degree <= m-1
    residual: Poly  # one-step drift of h; zero (exactly or to tolerance)
    boundary_ok: bool


def _cone_for(m: int, backend: Backend) -> ConeSpec:
    if isinstance(backend, FloatBackend):
        return make_cone(m, backend)
    return make_cone(m)


def _poly_vanishes(f: Poly, backend: Backend, scale: float) -> bool:
    if f.is_zero():
        return True
    if not isinstance(backend, FloatBackend):
        return False
    return all(backend.is_zero(c, scale) for c in f.terms.values())


def vanishes_on_boundary(h: Poly, cone: ConeSpec, scale: float = 1.0) -> bool:
    """True when h is identically zero on both rays of the wedge.  Each
    homogeneous part is checked separately (parts of different degree cannot
    cancel along a ray)."""
    backend = cone.backend
    for (i, j), c in h.terms.items():
        if j == 0 and not (backend.is_zero(c, scale) if isinstance(backend, FloatBackend) else c == 0):
            return False
    with backend.workprec():
        for deg in {i + j for i, j in h.terms}:
            part = h.homogeneous_part(deg)
            if cone.vertical:
                v = part.coeff(0, deg)
            else:
                v = part.evaluate(backend.one(), cone.b)
            if isinstance(backend, FloatBackend):
                if not backend.is_zero(v, scale):
                    return False
            elif not (v == 0):
                return False
    return True


def construct_harmonic(m: int, mu: MomentTable) -> HarmonicResult:
    """Build h = (classical degree-m wedge polynomial) + correction with
    identically zero one-step drift and boundary values.

    Moments of order >= m are required.  The interior boundary systems at
    degrees 2..m-1 are provably nonsingular for this slope; if one ever
    reports singular, that is an internal error, not a user error.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    if mu.order < m:
        raise InsufficientMoments(f"need moments of order >= {m}, have {mu.order}")
    cone = _cone_for(m, mu.backend)
    backend = cone.backend
    u = im_power(m)
    if isinstance(backend, FloatBackend):
        u = u.map_coeffs(backend.convert)
    h = u
    scale = max(1.0, u.max_abs_float())
    with backend.workprec():
        for l in range(m - 1, 1, -1):
            g = drift_expansion(h, mu).output
            scale = max(scale, g.max_abs_float())
            part = g.homogeneous_part(l - 2)
            if _poly_vanishes(part, backend, scale):
                continue
            mat = build_matrix(l, cone)
            rhs = [-c for c in part.power_basis_coeffs(l - 2)] + [backend.zero()] * 2
            try:
                a = solve_system(mat, rhs)
            except SingularAngle as e:
                raise InternalError(
                    f"interior degree {l} unexpectedly resonant for m={m}"
                ) from e
            h = h + Poly.from_power_basis(l, a)
            scale = max(scale, h.max_abs_float())
        residual = drift_expansion(h, mu).output
    if not _poly_vanishes(residual, backend, scale):
        raise InternalError(f"nonzero drift after construction: {residual!r}")
    boundary_ok = vanishes_on_boundary(h, cone, scale)
    return HarmonicResult(
        m=m,
        cone=cone,
        h=h,
        correction=h - u,
        residual=residual,
        boundary_ok=boundary_ok,
    )


def check_low_degree_uniqueness(m: int, mu: MomentTable, f: Poly) -> bool:
    """Decide whether a polynomial of degree < m that vanishes on both rays
    of the pi/m wedge and has zero one-step drift is the zero polynomial
    (it always is; the boundary systems below degree m are nonsingular).

    Raises ValidationError when f violates the preconditions, so a caller
    cannot use this to 'bless' a non-harmonic polynomial."""
    if f.degree() >= m:
        raise ValidationError(f"degree {f.degree()} not below {m}")
    cone = _cone_for(m, mu.backend)
    scale = max(1.0, f.max_abs_float())
    if not vanishes_on_boundary(f, cone, scale):
        raise ValidationError("f does not vanish on both boundary rays")
    res = drift_expansion(f, mu).output
    if not _poly_vanishes(res, cone.backend, scale):
        raise ValidationError("f is not one-step harmonic")
    return _poly_vanishes(f, cone.backend, scale)


@dataclass(frozen=True)
class AngleClassification:
    """Outcome of the degree-n resonance test for a boundary slope."""

    n: int
    resonant: bool
    q: int | None  # slope equals tan(q*pi/n) when resonant
    kernel_positive: bool | None  # kernel spans a positive function iff q = 1

    def label(self) -> str:
        return f"resonant q={self.q}" if self.resonant else "nonresonant"


def converse_angle_test(n: int, b) -> AngleClassification:
    """Classify a degree/slope pair: a nonzero degree-n homogeneous
    polynomial vanishing on both rays exists iff the slope is tan(q*pi/n)
    for some integer q, in which case the solution space is spanned by
    Im(x1 + i x2)^n, positive throughout the open wedge exactly when q = 1.
    """
    if n < 2:
        raise ValidationError("degree must be >= 2")
    if b is VERTICAL or (isinstance(b, str) and b == VERTICAL):
        if n % 2 == 0:
            return AngleClassification(n=n, resonant=True, q=n // 2, kernel_positive=(n == 2))
        return AngleClassification(n=n, resonant=False, q=None, kernel_positive=None)
    u_val = im_power(n).evaluate(1, b)
    import mpmath

    if isinstance(u_val, mpmath.mpf):
        resonant = abs(u_val) <= mpmath.mpf(2) ** (-mpmath.mp.prec // 2) * max(
            1, abs(scalar_to_float(b)) ** n
        )
    else:
        resonant = u_val == 0
    if not resonant:
        return AngleClassification(n=n, resonant=False, q=None, kernel_positive=None)
    alpha = math.atan(scalar_to_float(b))
    if alpha <= 0:
        alpha += math.pi
    q = round(n * alpha / math.pi)
    return AngleClassification(n=n, resonant=True, q=q, kernel_positive=(q == 1))
