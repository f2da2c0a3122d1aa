import random

import pytest

from forminv import MapF, MSeries, PolyMap
from forminv.rat import Rat


def mono(n, exp, c=1, trunc=None):
    import math

    return MSeries.monomial(n, exp, c, math.inf if trunc is None else trunc)


def series(n, terms, trunc=None):
    """terms: {exp: coeff}"""
    import math

    t = math.inf if trunc is None else trunc
    out = MSeries.zero(n, t)
    for e, c in terms.items():
        out = out + MSeries.monomial(n, e, c, t)
    return out


@pytest.fixture
def catalan_map():
    """F = z - z^2; its inverse has Catalan coefficients."""
    return MapF(PolyMap([mono(1, (2,))]))


@pytest.fixture
def shear_map():
    """H = (z2^2, 0): JH.H = 0, so the inverse is exactly z + H."""
    return MapF(PolyMap([mono(2, (0, 2)), MSeries.zero(2)]))


@pytest.fixture
def rng():
    return random.Random(987123)


def random_series(rng, n, max_deg=3, max_terms=4, min_deg=0, trunc=None):
    import math

    pool = [Rat(-2), Rat(-1), Rat(1), Rat(2), Rat(1, 2), Rat(-1, 2), Rat(3)]
    t = math.inf if trunc is None else trunc
    out = MSeries.zero(n, t)
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(min_deg, max_deg)
        exp = [0] * n
        for _ in range(deg):
            exp[rng.randrange(n)] += 1
        out = out + MSeries.monomial(n, tuple(exp), rng.choice(pool), t)
    return out
