"""Wedge construction and exact boundary slopes."""

import math
from fractions import Fraction

import pytest

from conewalk import (
    AngleNotRepresentable,
    QuadElement,
    RATIONAL,
    ValidationError,
    cone_from_slope,
    detect_integer_m,
    make_cone,
    quadratic,
)


def test_exact_slopes():
    assert make_cone(4).b == Fraction(1)
    assert make_cone(3).b == QuadElement(0, 1, 3)
    assert make_cone(6).b == QuadElement(0, Fraction(1, 3), 3)
    assert make_cone(8).b == QuadElement(-1, 1, 2)
    assert make_cone(12).b == QuadElement(2, -1, 3)
    for m in (3, 4, 6, 8, 12):
        cone = make_cone(m)
        assert abs(cone.b_float() - math.tan(math.pi / m)) < 1e-14


def test_vertical_and_half_plane():
    c2 = make_cone(2)
    assert c2.vertical and c2.p_alpha == Fraction(2)
    c1 = make_cone(1)
    assert c1.half_plane and c1.b == Fraction(0)


def test_float_fallback():
    cone = make_cone(5)
    assert cone.backend.name.startswith("float")
    assert abs(cone.b_float() - math.tan(math.pi / 5)) < 1e-30


def test_unrepresentable_angle():
    with pytest.raises(AngleNotRepresentable):
        make_cone(5, RATIONAL)
    with pytest.raises(AngleNotRepresentable):
        make_cone(3, quadratic(2))


def test_cone_from_slope():
    cone = cone_from_slope(Fraction(1), RATIONAL)
    assert cone.m == 4
    cone = cone_from_slope(Fraction(2, 3), RATIONAL)
    assert cone.m is None
    assert abs(float(cone.p_alpha) - math.pi / math.atan(2 / 3)) < 1e-12


def test_obtuse_slope():
    # negative slope means an opening beyond pi/2
    cone = cone_from_slope(Fraction(-1), RATIONAL)
    assert abs(cone.alpha_float() - 3 * math.pi / 4) < 1e-12


def test_detect_integer_m():
    assert detect_integer_m(math.pi / 7) == 7
    assert detect_integer_m(1.0) is None


def test_invalid_m():
    with pytest.raises(ValidationError):
        make_cone(0)
