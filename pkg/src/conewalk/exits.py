"""Exit-time and exit-position moments: the Poisson-type solver
(drift of F prescribed inside the wedge, F zero on the boundary) and the
recursion producing the degree-2k polynomials equal to the k-th moments of
the exit time, plus the closed-form exit-position moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cones import ConeSpec
from .drift import drift_expansion
from .errors import (
    AngleOutOfRange,
    DegreeTooHigh,
    InsufficientMoments,
    InternalError,
    MomentNotFinite,
    SingularAngle,
    ValidationError,
)
from .linsys import build_matrix, solve_system
from .poly import Poly
from .scalars import FloatBackend
from .walks import MomentTable

#: guard band for the float comparison of a degree against pi/alpha
RESONANCE_GUARD = 1e-9


def _degree_allowed(n: int, cone: ConeSpec) -> bool:
    """n < pi/alpha, with a small guard band when pi/alpha is a float."""
    p = cone.p_alpha
    if isinstance(p, Fraction):
        return n < p
    return n < float(p) - RESONANCE_GUARD


def poisson_solve(f: Poly, cone: ConeSpec, mu: MomentTable, n: int) -> Poly:
    """The unique polynomial F of degree n with one-step drift equal to f
    inside the wedge and F identically zero on both boundary rays.

    Exists and is unique when n < pi/alpha (no resonant degree at or below
    n); built top-down, one homogeneous boundary system per degree.
    """
    if n < 2:
        raise ValidationError("target degree must be >= 2")
    if f.degree() > n - 2:
        raise ValidationError(f"rhs degree {f.degree()} exceeds {n - 2}")
    if not _degree_allowed(n, cone):
        raise DegreeTooHigh(f"degree {n} >= pi/alpha = {float(cone.p_alpha):g}")
    if mu.order < n:
        raise InsufficientMoments(f"need moments of order >= {n}, have {mu.order}")
    backend = cone.backend
    if isinstance(backend, FloatBackend):
        f = f.map_coeffs(backend.convert)
    F = Poly.zero()
    with backend.workprec():
        for l in range(n, 1, -1):
            g = drift_expansion(F, mu).output if not F.is_zero() else Poly.zero()
            target = (f - g).homogeneous_part(l - 2)
            if target.is_zero():
                continue
            mat = build_matrix(l, cone)
            rhs = list(target.power_basis_coeffs(l - 2)) + [backend.zero()] * 2
            try:
                a = solve_system(mat, rhs)
            except SingularAngle as e:
                raise InternalError(f"unexpected resonance at degree {l} < pi/alpha") from e
            F = F + Poly.from_power_basis(l, a)
    return F


@dataclass(frozen=True)
class MomentPolyResult:
    """The degree-2k polynomial giving the k-th exit-time moment, with the
    recursion residual retained as evidence."""

    k: int
    cone: ConeSpec
    G: Poly
    residual: Poly  # drift(G) minus the recursion's rhs; must be zero


_MOMENT_CACHE: dict = {}


def first_moment_poly(cone: ConeSpec) -> Poly:
    """x2*(b*x1 - x2): the expected exit time as a function of the start."""
    if cone.vertical or cone.half_plane:
        raise AngleOutOfRange("expected exit time is finite only for opening < pi/2")
    return Poly({(1, 1): cone.b, (0, 2): -cone.backend.one()})


def tau_moment_poly(k: int, cone: ConeSpec, mu: MomentTable) -> MomentPolyResult:
    """The polynomial equal to the k-th moment of the exit time, for
    k < pi/(2*alpha); raises MomentNotFinite at or beyond that threshold
    (the moment is genuinely infinite there, this is not a numeric failure).

    Recursion: G_1 = x2(b x1 - x2); for k >= 2, G_k solves
    drift(G_k) = -1 - sum_{l<k} C(k,l) (G_l + drift(G_l)) at degree 2k.
    """
    if k < 1:
        raise ValidationError("moment order must be >= 1")
    if not _degree_allowed(2 * k, cone):
        raise MomentNotFinite(
            f"moment {k} infinite: k >= pi/(2*alpha) = {float(cone.p_alpha) / 2:g}"
        )
    if mu.order < 2 * k:
        raise InsufficientMoments(f"need moments of order >= {2 * k}, have {mu.order}")
    key = (k, id(cone), id(mu))
    hit = _MOMENT_CACHE.get(key)
    if hit is not None:
        return hit
    backend = cone.backend
    with backend.workprec():
        if k == 1:
            G = Poly({(1, 1): cone.b, (0, 2): -backend.one()})
            rhs = Poly.const(-backend.one())
        else:
            rhs = Poly.const(-backend.one())
            for l in range(1, k):
                Gl = tau_moment_poly(l, cone, mu).G
                dGl = drift_expansion(Gl, mu).output
                rhs = rhs - math.comb(k, l) * (Gl + dGl)
            G = poisson_solve(rhs, cone, mu, 2 * k)
        residual = drift_expansion(G, mu).output - rhs
    scale = max(1.0, G.max_abs_float(), rhs.max_abs_float())
    if not residual.is_zero():
        if not isinstance(backend, FloatBackend) or not all(
            backend.is_zero(c, scale) for c in residual.terms.values()
        ):
            raise InternalError(f"moment recursion residual nonzero: {residual!r}")
    out = MomentPolyResult(k=k, cone=cone, G=G, residual=residual)
    _MOMENT_CACHE[key] = out
    return out


@dataclass(frozen=True)
class ExitPositionMoments:
    """Closed-form moments of the exit position from a given start."""

    mean1: object
    mean2: object
    second1: object
    second2: object


def exit_position_moments(cone: ConeSpec, x: tuple) -> ExitPositionMoments:
    """First and second moments of the walk's position at the exit time,
    started from a point of the closed wedge.

    The coordinate means equal the start coordinates (opening < pi); each
    second moment is the squared coordinate plus the expected exit time
    (opening < pi/2).  Boundary starts use the exit-at-time-zero convention,
    where everything reduces to the start itself.
    """
    if cone.half_plane:
        raise AngleOutOfRange("exit-position means require opening < pi")
    if cone.vertical:
        raise AngleOutOfRange("exit-position second moments require opening < pi/2")
    x1, x2 = x
    backend = cone.backend
    with backend.workprec():
        if isinstance(backend, FloatBackend):
            x1, x2 = backend.convert(x1), backend.convert(x2)
        g1 = x2 * (cone.b * x1 - x2)
    if not _inside_closed(cone, g1, x2):
        raise ValidationError("start must lie in the closed wedge")
    return ExitPositionMoments(
        mean1=x1, mean2=x2, second1=x1 * x1 + g1, second2=x2 * x2 + g1
    )


def _inside_closed(cone: ConeSpec, g1, x2) -> bool:
    # inside the closed wedge iff x2 >= 0 and x2 <= b*x1, i.e. both factors
    # of g1 = x2*(b*x1 - x2) are >= 0
    def nonneg(v):
        if isinstance(cone.backend, FloatBackend):
            return v >= -cone.backend.tolerance
        return v >= 0

    return nonneg(x2) and nonneg(g1)
