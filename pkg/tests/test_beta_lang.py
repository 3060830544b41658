import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from thermoshift import BetaShift, expand
from thermoshift.beta_lang import format_word, parse_word
from thermoshift.errors import AlphabetError, BudgetExceeded, IntegerBeta
from thermoshift.oracles import admissible_by_suffixes, digits_exact, longest_prefix_suffix


def test_golden_digits():
    assert expand("poly:-1,-1,1@[1,2]", 10) == (1, 0) * 5


def test_five_halves_digits_match_fraction_oracle():
    assert list(expand("rational:5/2", 40)) == digits_exact(None, 0, 0, 40, rational="5/2")


def test_integer_beta_rejected():
    with pytest.raises(IntegerBeta):
        BetaShift("rational:3")


def test_sympy_oracle_on_cubic():
    spec_coeffs = [-1, -1, 0, 1]  # plastic number
    sh = BetaShift("poly:-1,-1,0,1@[1,2]")
    assert list(sh.digits(30)) == digits_exact(spec_coeffs, 1, 2, 30)


def test_lexicographic_self_bound(shift):
    # every shift of the digit sequence is at most the sequence itself
    c = shift.digits(60)
    for k in range(1, 30):
        assert c[k:k + 30] <= c[:30]


def test_counts_fibonacci(golden):
    fib = [2, 3]
    while len(fib) < 15:
        fib.append(fib[-1] + fib[-2])
    assert [golden.count(n) for n in range(1, 16)] == fib


@pytest.mark.parametrize("n", range(1, 9))
def test_language_matches_suffix_oracle(shift, n):
    c = shift.digits(n)
    expected = {w for w in product(range(shift.b), repeat=n) if admissible_by_suffixes(w, c)}
    assert set(shift.enumerate(n)) == expected
    assert shift.count(n) == len(expected)


def test_enumeration_is_sorted(five_halves):
    words = five_halves.enumerate(5)
    assert words == sorted(words)


def test_budget(golden):
    with pytest.raises(BudgetExceeded):
        golden.enumerate(20, budget=100)


def test_letter_range(golden):
    with pytest.raises(AlphabetError):
        golden.is_admissible((2,))


words3 = st.lists(st.integers(0, 2), min_size=1, max_size=10).map(tuple)


@given(words3)
def test_state_is_longest_prefix_suffix(w):
    sh = BetaShift("rational:5/2")
    state = sh.run(w)
    c = sh.digits(len(w) + 2)
    if state is None:
        assert not admissible_by_suffixes(w, c)
    else:
        assert admissible_by_suffixes(w, c)
        assert state == longest_prefix_suffix(w, c)


@given(words3, words3)
def test_factorial_and_extendable(u, v):
    sh = BetaShift("rational:5/2")
    w = u + v
    if sh.is_admissible(w):
        assert sh.is_admissible(u) and sh.is_admissible(v)
        assert sh.is_admissible(w + (0,))
        assert sh.is_admissible((0,) + w)


@given(words3)
def test_suffix_decomposition(w):
    sh = BetaShift("rational:5/2")
    if not sh.is_admissible(w):
        return
    head, tail = sh.suffix_decompose(w)
    assert head + tail == w
    assert sh.is_prefix(tail)
    assert len(tail) == sh.run(w)


def test_concatenation_rule(golden):
    rng = random.Random(3)
    for _ in range(300):
        n, m = rng.randint(1, 6), rng.randint(1, 6)
        u = tuple(rng.randint(0, 1) for _ in range(n))
        v = tuple(rng.randint(0, 1) for _ in range(m))
        if golden.is_admissible(u) and golden.is_admissible(v):
            assert golden.concatenable(u, v) == golden.is_admissible(u + v)


def test_word_format_roundtrip():
    assert parse_word(format_word((1, 0, 2), 3)) == (1, 0, 2)
    assert parse_word("1,0,11") == (1, 0, 11)
    assert format_word((1, 11), 12) == "1,11"
