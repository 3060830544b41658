import random

import pytest
from hypothesis import given, strategies as st

from thermoshift import BetaShift, FinitePoint, Window
from thermoshift.shift_space import (
    class_blocks,
    conjugacy_set,
    distance,
    in_shift,
    points_on,
    random_point,
    shift,
    zero_pad,
)

GOLDEN = BetaShift("poly:-1,-1,1@[1,2]")


def points():
    return st.builds(
        lambda s, w: FinitePoint(s, w),
        st.integers(-6, 6),
        st.lists(st.integers(0, 1), max_size=8),
    )


def test_window_basics():
    w = Window.parse("[-2,3]")
    assert len(w) == 6 and -2 in w and 4 not in w
    assert w.extend(1) == Window(-3, 4)
    with pytest.raises(ValueError):
        Window(3, 1)


def test_point_normalises_padding():
    assert FinitePoint(0, (0, 1, 0)) == FinitePoint(1, (1,))
    assert FinitePoint(5, ()) == FinitePoint.zero()
    x = FinitePoint(-1, (1, 0, 1))
    assert FinitePoint.from_json(x.to_json()) == x


def test_zero_pad_rejects_inadmissible():
    with pytest.raises(Exception):
        zero_pad(GOLDEN, (1, 1), Window(0, 1))
    assert zero_pad(GOLDEN, (1, 0), Window(3, 4)) == FinitePoint.unit(3)


@given(points(), points(), points())
def test_ultrametric(x, y, z):
    assert distance(x, z) <= max(distance(x, y), distance(y, z))
    assert distance(x, y) == distance(y, x)
    assert (distance(x, y) == 0) == (x == y)


@given(points(), st.integers(-5, 5), st.integers(-5, 5))
def test_shift_is_action(x, i, j):
    assert shift(shift(x, i), j) == shift(x, i + j)
    assert shift(x, i)[0] == x[i]


def test_conjugacy_set_agrees_outside():
    rng = random.Random(1)
    L = Window(0, 2)
    for _ in range(50):
        x = random_point(GOLDEN, Window(-4, 5), rng)
        cls = conjugacy_set(GOLDEN, x, L)
        assert x in cls
        for y in cls:
            assert in_shift(GOLDEN, y)
            for j in range(-8, 9):
                if j not in L:
                    assert x[j] == y[j]
        # the class is a function of the data outside L
        for y in cls:
            assert conjugacy_set(GOLDEN, y, L) == cls
            assert class_blocks(GOLDEN, y, L) == class_blocks(GOLDEN, x, L)


def test_points_on_counts():
    assert len(points_on(GOLDEN, Window(0, 4))) == GOLDEN.count(5)
