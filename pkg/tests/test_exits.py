"""Exit-time moment polynomials and exit-position moments."""

import random
from fractions import Fraction

import pytest

from conewalk import (
    AngleOutOfRange,
    DegreeTooHigh,
    MomentNotFinite,
    Poly,
    QuadElement,
    ValidationError,
    cone_from_slope,
    diagonal_walk,
    drift_expansion,
    exit_position_moments,
    first_moment_poly,
    make_cone,
    poisson_solve,
    push_moments,
    skewed_walk,
    tau_moment_poly,
)
from conewalk.scalars import RATIONAL
from conftest import make_moment_table


def test_first_moment_shape():
    rng = random.Random(9)
    for _ in range(20):
        b = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        cone = cone_from_slope(b, RATIONAL)
        g1 = first_moment_poly(cone)
        assert g1 == Poly({(1, 1): b, (0, 2): Fraction(-1)})


def test_first_moment_drift_is_minus_one():
    rng = random.Random(10)
    cone = make_cone(4)
    g1 = first_moment_poly(cone)
    for _ in range(20):
        mu = make_moment_table(order=4, rng=rng)
        assert drift_expansion(g1, mu).output == Poly.const(Fraction(-1))


def test_first_moment_rejects_wide_opening():
    with pytest.raises(AngleOutOfRange):
        first_moment_poly(make_cone(2))
    with pytest.raises(AngleOutOfRange):
        first_moment_poly(make_cone(1))


def test_tau_moment_diagonal_frozen():
    """E[tau] from (sqrt(3), 1) in the pi/3 wedge is exactly 2."""
    w = diagonal_walk()
    mu = push_moments(w, 2)
    g1 = tau_moment_poly(1, w.cone, mu).G
    x = w.map_point(1, 1)
    assert g1.evaluate(*x) == 2
    # pulled back to quadrant coordinates: 2*y1*y2 at every lattice point
    for y in ((1, 1), (2, 3), (5, 1)):
        assert g1.evaluate(*w.map_point(*y)) == 2 * y[0] * y[1]


def test_moment_finiteness_thresholds():
    cone3 = diagonal_walk().cone  # p_alpha = 3
    mu = push_moments(diagonal_walk(), 4)
    with pytest.raises(MomentNotFinite):
        tau_moment_poly(2, cone3, mu)  # 2k = 4 > 3
    cone4 = make_cone(4)
    mu4 = push_moments(skewed_walk(), 4)
    with pytest.raises(MomentNotFinite):
        tau_moment_poly(2, cone4, mu4)  # 2k = 4 not < 4


def test_poisson_solver_properties():
    cone = make_cone(4)
    mu = push_moments(skewed_walk(), 3)
    f = Poly({(1, 0): Fraction(2), (0, 0): Fraction(-1)})
    F = poisson_solve(f, cone, mu, 3)
    assert drift_expansion(F, mu).output == f
    assert all(j >= 1 for _, j in F.terms)
    for deg, part in F.homogeneous_parts().items():
        assert part.evaluate(Fraction(1), cone.b) == 0


def test_poisson_degree_cap():
    cone = make_cone(4)
    mu = push_moments(skewed_walk(), 4)
    with pytest.raises(DegreeTooHigh):
        poisson_solve(Poly.const(Fraction(1)), cone, mu, 4)


def test_exit_position_frozen():
    """From (sqrt(3), 1) in the pi/3 wedge: means are the start, second
    moments are 3 + 2 = 5 and 1 + 2 = 3."""
    w = diagonal_walk()
    x = w.map_point(1, 1)
    ep = exit_position_moments(w.cone, x)
    assert ep.mean1 == x[0] and ep.mean2 == x[1]
    assert ep.second1 == 5
    assert ep.second2 == 3


def test_exit_position_boundary_start():
    cone = make_cone(4)
    ep = exit_position_moments(cone, (Fraction(3), Fraction(0)))
    assert ep.second1 == 9 and ep.second2 == 0


def test_exit_position_rejects_outside():
    with pytest.raises(ValidationError):
        exit_position_moments(make_cone(4), (Fraction(1), Fraction(2)))


def test_second_moment_at_pi_5():
    """G_2 exists for opening pi/5: degree 4, boundary-vanishing, divisible
    by G_1, recursion residual below 2^-128 relative."""
    from conewalk import bigfloat
    from conewalk.walks import MomentTable

    bk = bigfloat(256)
    cone = make_cone(5, bk)
    mu_exact = push_moments(skewed_walk(), 4)
    mu = MomentTable(order=4, mu={k: bk.convert(v) for k, v in mu_exact.mu.items()}, backend=bk)
    res = tau_moment_poly(2, cone, mu)
    G2 = res.G
    assert G2.degree() == 4
    scale = max(1.0, G2.max_abs_float())
    assert res.residual.max_abs_float() <= 2 ** -128 * scale
    # divisible by x2 up to float roundoff in the stored coefficients
    assert all(abs(float(c)) <= 2 ** -128 * scale for (i, j), c in G2.terms.items() if j == 0)
    with bk.workprec():
        # divisible by (b*x1 - x2): each homogeneous part of G2/x2 vanishes
        # on the sloped ray, checked by evaluation at (1, b)
        q = Poly({(i, j - 1): c for (i, j), c in G2.terms.items() if j >= 1})
        for deg, part in q.homogeneous_parts().items():
            v = part.evaluate(bk.one(), cone.b)
            assert abs(float(v)) <= 2 ** -120 * scale
