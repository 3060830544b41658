import math
import random

import pytest

from thermoshift import BetaShift, FinitePoint, Window
from thermoshift.conformal import cocycle
from thermoshift.errors import BudgetExceeded
from thermoshift.gibbs import Averager, consistency_check, kernel_row, logsumexp, weak_dependence_probe
from thermoshift.potential import parse_potential
from thermoshift.shift_space import conjugacy_set, random_point

GOLDEN = BetaShift("poly:-1,-1,1@[1,2]")
FIVE = BetaShift("rational:5/2")
POTENTIALS = ["zero", "coord:0", "decay:geom:1,0.5", "table:p=1:010=0.3;020=-1;201=0.5"]


def phi(y):
    return y[0] + 2 * y[1] - y[-1]


def test_logsumexp():
    assert logsumexp([0.0, 0.0]) == pytest.approx(math.log(2))
    assert logsumexp([-math.inf]) == -math.inf
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000 + math.log(2))


CASES = [(GOLDEN, p) for p in POTENTIALS[:3]] + [(FIVE, p) for p in POTENTIALS]


@pytest.mark.parametrize("sh,f_spec", CASES)
def test_rows_are_probabilities_and_class_invariant(sh, f_spec):
    f = parse_potential(f_spec)
    rng = random.Random(5)
    L = Window(0, 1)
    for _ in range(20):
        x = random_point(sh, Window(-4, 5), rng)
        row = kernel_row(sh, f, x, L)
        assert math.fsum(row.weights) == pytest.approx(1.0, abs=1e-12)
        assert all(w > 0 for w in row.weights)
        for y in row.support:
            assert kernel_row(sh, f, y, L).weights == row.weights


def test_zero_potential_is_uniform():
    x = FinitePoint(-2, (1, 0, 0, 0, 1))
    row = kernel_row(GOLDEN, parse_potential("zero"), x, Window(-1, 1))
    n = len(row.support)
    assert all(w == pytest.approx(1 / n) for w in row.weights)


@pytest.mark.parametrize("f_spec", ["coord:0", "decay:geom:1,0.5"])
def test_weight_ratio_is_cocycle(f_spec):
    f = parse_potential(f_spec)
    rng = random.Random(8)
    for _ in range(30):
        x = random_point(FIVE, Window(-4, 5), rng)
        row = kernel_row(FIVE, f, x, Window(0, 1))
        for y in row.support:
            psi = cocycle(FIVE, f, x, y, tail_depth=row.tail_depth).value
            assert math.log(row.weight(y) / row.weight(x)) == pytest.approx(psi, abs=1e-9)


@pytest.mark.parametrize("f_spec", ["coord:0", "decay:geom:1,0.5"])
def test_consistency(f_spec):
    f = parse_potential(f_spec)
    rng = random.Random(11)
    pts = [random_point(GOLDEN, Window(-5, 6), rng) for _ in range(15)]
    err = consistency_check(GOLDEN, f, phi, Window(0, 1), Window(-1, 2), pts)
    assert err < 1e-9


def test_averager_idempotent():
    f = parse_potential("coord:1")
    m = Averager(FIVE, f, Window(0, 1))
    mphi = m.apply(phi)
    mmphi = m.apply(mphi)
    rng = random.Random(4)
    for _ in range(10):
        x = random_point(FIVE, Window(-3, 4), rng)
        assert mmphi(x) == pytest.approx(mphi(x), abs=1e-12)


def test_support_is_conjugacy_set():
    x = FinitePoint(0, (1, 0, 1, 0))
    row = kernel_row(GOLDEN, parse_potential("zero"), x, Window(1, 2))
    assert list(row.support) == conjugacy_set(GOLDEN, x, Window(1, 2))


def test_probe_finds_witness():
    v = weak_dependence_probe(GOLDEN, Window(0, 0), 2, 3)
    assert v.witness is not None
    assert v.to_json()["verdict"] == "witness"


def test_probe_budget():
    with pytest.raises(BudgetExceeded):
        weak_dependence_probe(FIVE, Window(0, 2), 3, 6, budget=50)
