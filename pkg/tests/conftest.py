"""Shared helpers: valid moment tables with chosen or random higher moments."""

import random
from fractions import Fraction

import pytest

from conewalk import MomentTable, RATIONAL


def make_moment_table(order=4, backend=RATIONAL, higher=None, rng=None):
    """A normalized moment table: fixed low-order entries, higher moments
    from `higher` (dict) or drawn at random."""
    mu = {}
    for k in range(order + 1):
        for l in range(order + 1 - k):
            mu[(k, l)] = Fraction(0)
    mu[(0, 0)] = Fraction(1)
    mu[(2, 0)] = Fraction(1)
    mu[(0, 2)] = Fraction(1)
    if higher:
        for key, v in higher.items():
            mu[key] = Fraction(v)
    elif rng is not None:
        for k in range(order + 1):
            for l in range(order + 1 - k):
                if k + l >= 3:
                    mu[(k, l)] = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
    return MomentTable(order=order, mu=mu, backend=backend)


@pytest.fixture
def rng():
    return random.Random(0)
