from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thermoshift.algebra import (
    BetaNumber,
    count_roots,
    poly_divmod,
    poly_gcd,
    rational_roots,
)
from thermoshift.errors import IntegerBeta, ThermoshiftError


def F(*xs):
    return [Fraction(x) for x in xs]


def test_parse_rational():
    b = BetaNumber.parse("rational:5/2")
    assert b.is_rational
    assert b.interval() == (Fraction(5, 2), Fraction(5, 2))
    assert b.b == 3


def test_parse_golden_encloses_phi():
    b = BetaNumber.parse("poly:-1,-1,1@[1,2]")
    lo, hi = b.refine(Fraction(1, 10**12))
    phi = (1 + 5 ** 0.5) / 2
    assert float(lo) <= phi <= float(hi)
    assert abs(float(b) - phi) < 1e-12
    assert b.b == 2


def test_decimal_is_exact_rational():
    b = BetaNumber.parse("decimal:1.5")
    assert b.is_rational and b.interval()[0] == Fraction(3, 2)


@pytest.mark.parametrize(
    "spec",
    [
        "rational:1",
        "rational:1/2",
        "poly:-2,0,1@[0,1]",  # no root inside
        "poly:-1,0,1@[-2,2]",  # two roots
        "nonsense:3",
        "poly:1,x@[1,2]",
        "rational:3",
    ],
)
def test_bad_specs(spec):
    with pytest.raises(ThermoshiftError):
        BetaNumber.parse(spec)


def test_polynomial_with_rational_root_collapses():
    b = BetaNumber.parse("poly:-5,2@[1,3]")
    assert b.is_rational and float(b) == 2.5
    with pytest.raises(IntegerBeta):
        BetaNumber.parse("poly:-2,1@[1,3]")


def test_sturm_counts():
    p = F(-2, 0, 1)  # x^2 - 2
    assert count_roots(p, -2, 2) == 2
    assert count_roots(p, 0, 2) == 1
    assert count_roots(p, 2, 3) == 0


def test_rational_roots():
    assert sorted(rational_roots([-6, 1, 1])) == [Fraction(-3), Fraction(2)]
    assert rational_roots([-2, 0, 1]) == []


@given(
    st.lists(st.integers(-5, 5), min_size=1, max_size=4),
    st.lists(st.integers(-5, 5), min_size=2, max_size=3).filter(lambda c: c[-1] != 0),
)
def test_divmod_reconstructs(a, b):
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    q, r = poly_divmod(a, b)
    assert len(r) < len(b) or not any(r)
    prod = [Fraction(0)] * (len(q) + len(b))
    for i, qi in enumerate(q):
        for j, bj in enumerate(b):
            prod[i + j] += qi * bj
    total = [prod[i] if i < len(prod) else 0 for i in range(max(len(prod), len(a), len(r)))]
    for i, ri in enumerate(r):
        total[i] += ri
    padded = list(a) + [0] * (len(total) - len(a))
    assert [Fraction(t) for t in total] == [Fraction(t) for t in padded]


def test_gcd_of_shared_factor():
    g = poly_gcd(F(-1, 0, 1), F(1, 2, 1))  # (x-1)(x+1), (x+1)^2
    assert len(g) == 2
    assert g[0] / g[1] == 1


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=2))
def test_remainder_arithmetic_matches_floats(coords):
    beta = BetaNumber.parse("poly:-1,-1,1@[1,2]")
    r = beta.element(coords)
    s = r.times_beta()
    assert abs(float(s) - float(beta) * float(r)) < 1e-6 * (1 + abs(float(s)))
    lo, hi = r.enclosure()
    assert float(lo) - 1e-12 <= float(r) <= float(hi) + 1e-12
    assert (r - r).is_zero()
