"""Polynomial ring, calculus, and the classical wedge polynomials."""

import math
from fractions import Fraction

import pytest

from conewalk import Poly, ValidationError, boundary_ratio, im_power, laplacian, re_power


def test_ring_ops():
    x1, x2 = Poly.x1(), Poly.x2()
    p = (x1 + x2) ** 2
    assert p == x1 * x1 + 2 * x1 * x2 + x2 * x2
    assert (p - p).is_zero()
    assert p.degree() == 2
    assert Poly.zero().degree() == -1


def test_zero_coefficients_dropped():
    p = Poly({(1, 0): Fraction(1)}) - Poly({(1, 0): Fraction(1)})
    assert p.terms == {}


def test_diff_and_laplacian():
    f = Poly({(3, 0): Fraction(1), (1, 2): Fraction(-3)})  # x1^3 - 3 x1 x2^2
    assert laplacian(f).is_zero()  # Re(x1+ix2)^3 is harmonic
    assert f.diff(1) == Poly({(2, 0): Fraction(3), (0, 2): Fraction(-3)})


def test_power_basis_roundtrip():
    f = Poly({(3, 0): Fraction(2), (1, 2): Fraction(5), (0, 3): Fraction(-1)})
    c = f.power_basis_coeffs(3)
    assert c == [Fraction(2), Fraction(0), Fraction(5), Fraction(-1)]
    assert Poly.from_power_basis(3, c) == f


def test_substitute_linear():
    f = Poly({(1, 1): Fraction(1)})  # x1*x2
    g = f.substitute_linear(Fraction(2), Fraction(1), Fraction(0), Fraction(3))
    # (2y1 + y2)(3y2) = 6 y1 y2 + 3 y2^2
    assert g == Poly({(1, 1): Fraction(6), (0, 2): Fraction(3)})


def test_im_power_frozen():
    assert im_power(2) == Poly({(1, 1): Fraction(2)})
    assert im_power(3) == Poly({(2, 1): Fraction(3), (0, 3): Fraction(-1)})
    assert im_power(4) == Poly({(3, 1): Fraction(4), (1, 3): Fraction(-4)})


def test_im_re_harmonic_and_boundary():
    for m in range(1, 9):
        assert laplacian(im_power(m)).is_zero()
        assert laplacian(re_power(m)).is_zero()
        # vanishes on the ray x2 = 0
        assert all(j >= 1 for _, j in im_power(m).terms)
        # vanishes on the sloped ray x2 = tan(pi/m) x1 (finite slope only)
        if m >= 3:
            t = math.tan(math.pi / m)
            assert abs(im_power(m).evaluate(1.0, t)) < 1e-12


def test_boundary_ratio_bounds():
    for m in (2, 3, 4, 6):
        for k in range(1, 10):
            ang = math.pi / m * k / 10
            x1, x2 = math.cos(ang), math.sin(ang)
            r = boundary_ratio(m, x1, x2)
            assert 1 - 1e-9 <= r <= m + 1e-9


def test_boundary_ratio_rejects_outside():
    with pytest.raises(ValidationError):
        boundary_ratio(3, 1.0, -0.5)


def test_negative_exponent_rejected():
    with pytest.raises(ValidationError):
        Poly({(-1, 0): Fraction(1)})
