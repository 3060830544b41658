import math
import random

import pytest
from hypothesis import given, strategies as st

from thermoshift import BetaShift, FinitePoint, Window
from thermoshift.errors import SpecError
from thermoshift.potential import (
    Constant,
    Coordinate,
    GeometricDecay,
    Scaled,
    Table,
    Zero,
    bowen_bound,
    bowen_defect,
    delta_bound,
    delta_estimate,
    parse_potential,
    variation,
)
from thermoshift.shift_space import random_point, shift

GOLDEN = BetaShift("poly:-1,-1,1@[1,2]")
FIVE = BetaShift("rational:5/2")


def test_parse_kinds():
    assert isinstance(parse_potential("zero"), Zero)
    assert isinstance(parse_potential("const:1.5"), Constant)
    assert isinstance(parse_potential("coord:-2"), Coordinate)
    assert isinstance(parse_potential("decay:geom:1,0.5"), GeometricDecay)
    assert isinstance(parse_potential("scale:-1:coord:0"), Scaled)
    t = parse_potential("table:p=1:000=1;010=2")
    assert isinstance(t, Table)
    assert parse_potential("table:p=1:000=1,010=2").at(FinitePoint.unit(0), 0) == 2.0


@pytest.mark.parametrize("spec", ["decay:exp:1,2", "coord:x", "table:q=1:00=1", "blah", "decay:geom:1,1.5"])
def test_parse_rejects(spec):
    with pytest.raises(SpecError):
        parse_potential(spec)


def test_coordinate_reads_shifted_letter():
    f = Coordinate(2)
    x = FinitePoint(0, (1, 0, 1))
    assert f.at(x, 0) == 1 and f.at(x, -1) == 0 and f.at(x, -2) == 1


def test_geometric_decay_value():
    f = GeometricDecay(1.0, 0.5)
    x = FinitePoint(0, (1, 0, 1))
    assert f(x) == pytest.approx(1 + 0.25)


point = st.builds(FinitePoint, st.integers(-5, 5), st.lists(st.integers(0, 1), max_size=8))


@pytest.mark.parametrize("spec", ["coord:1", "decay:geom:1,0.5", "table:p=1:010=1;001=-2", "scale:2:coord:0"])
@given(x=point, y=point)
def test_delta_sum_matches_direct(spec, x, y):
    f = parse_potential(spec)
    lo, hi = -4, 6
    direct = math.fsum(f.at(y, g) - f.at(x, g) for g in range(lo, hi + 1))
    assert f.delta_sum(x, y, lo, hi) == pytest.approx(direct, abs=1e-12)


@given(x=point, k=st.integers(-4, 4), m=st.integers(0, 4), n=st.integers(0, 4))
def test_birkhoff_additive(x, k, m, n):
    f = parse_potential("decay:geom:1,0.5")
    whole = f.birkhoff(x, Window(k, k + m + n + 1))
    parts = f.birkhoff(x, Window(k, k + m)) + f.birkhoff(x, Window(k + m + 1, k + m + n + 1))
    assert whole == pytest.approx(parts, abs=1e-12)
    assert f.birkhoff(x, Window(k, k)) == pytest.approx(f(shift(x, k)))


def test_variation_local_exact():
    f = Coordinate(0)
    # var_1 compares points agreeing on [0, 0]
    assert variation(GOLDEN, f, 1) == 0.0
    assert variation(GOLDEN, Coordinate(1), 1) == 1.0
    assert variation(GOLDEN, Coordinate(1), 2) == 0.0


def test_variation_below_envelope():
    f = GeometricDecay(1.0, 0.5)
    for n in range(1, 5):
        assert variation(GOLDEN, f, n) <= f.variation_bound(n, GOLDEN.b) + 1e-12


def test_bowen_defect_below_bound():
    f = GeometricDecay(1.0, 0.5)
    bound = bowen_bound(f, 2)
    assert math.isfinite(bound)
    for m in (1, 3):
        assert bowen_defect(GOLDEN, f, Window(0, m), 4) <= bound + 1e-12
    assert bowen_bound(Coordinate(0), 2) == 0.0


def test_delta_estimate_below_envelope():
    f = GeometricDecay(1.0, 0.5)
    L = Window(0, 1)
    est = delta_estimate(FIVE, f, L, depth=30)
    assert 0 < est <= delta_bound(f, L, FIVE.b) + 1e-12


def test_outside_bound_is_certified():
    # the tail of a decaying potential over random pairs stays below its bound
    f = GeometricDecay(1.0, 0.5)
    rng = random.Random(2)
    for _ in range(100):
        x = random_point(GOLDEN, Window(-8, 8), rng)
        y = x.replace(Window(0, 0), (1 - x[0],))
        glo, ghi = -3, 3
        tail = math.fsum(abs(f.at(y, g) - f.at(x, g)) for g in range(-40, 41) if not glo <= g <= ghi)
        assert tail <= f.outside_bound(0, 0, glo, ghi, GOLDEN.b) + 1e-12
