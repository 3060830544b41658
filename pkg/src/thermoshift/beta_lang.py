"""The digit stream of 1 in base beta and the language of the beta-shift.

Automaton states are prefix lengths: state ``m`` means the longest suffix of
the word read so far that is also a prefix of ``c = c(1) c(2) ...`` has length
``m``.  From state ``m`` a letter ``a`` moves to ``0`` if ``a < c(m+1)``, to
``m + 1`` if ``a == c(m+1)`` and is rejected otherwise.
"""
from __future__ import annotations

import threading
import warnings
from itertools import product
from typing import Iterator, Sequence, Union

from .algebra import BetaNumber, ExactRemainder, certified_ceil
from .errors import AlphabetError, BudgetExceeded, Inadmissible, NotAPrefix, ZeroRunWarning

Word = tuple  # tuple[int, ...]

ZERO_RUN_WINDOW = 64
DEFAULT_BUDGET = 2_000_000


class DigitStream:
    """Lazily extended digits ``c(1), c(2), ...`` with their exact remainders.

    The remainder ``r_i`` determines every later digit, so an exact repeat
    ``r_i == r_j`` certifies eventual periodicity; :meth:`canonical_state`
    uses it to merge automaton states with identical futures.
    """

    def __init__(self, beta: BetaNumber, zero_window: int = ZERO_RUN_WINDOW):
        self.beta = beta
        self.zero_window = zero_window
        self._digits: list[int] = []
        self._remainders: list[ExactRemainder] = [beta.one()]
        self._first_seen: dict[tuple, int] = {beta.one().coords: 0}
        self._canon: list[int] = [0]
        self.period: tuple[int, int] | None = None  # (preperiod, period)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._digits)

    def _extend_one(self) -> None:
        i = len(self._digits)
        if self.period is not None:
            pre, per = self.period
            j = pre + (i - pre) % per
            self._digits.append(self._digits[j])
            self._canon.append(self._canon[j + 1])
            return
        r = self._remainders[i]
        d = certified_ceil(self.beta, r) - 1
        nxt = r.times_beta() - d
        self._digits.append(d)
        self._remainders.append(nxt)
        seen = self._first_seen.get(nxt.coords)
        if seen is None:
            self._first_seen[nxt.coords] = i + 1
            self._canon.append(i + 1)
        else:
            self._canon.append(seen)
            self.period = (seen, i + 1 - seen)
        w = self.zero_window
        if len(self._digits) >= w and not any(self._digits[-w:]):
            warnings.warn(
                f"digits {len(self._digits) - w + 1}..{len(self._digits)} of the expansion are all 0",
                ZeroRunWarning,
                stacklevel=3,
            )

    def ensure(self, n: int) -> list[int]:
        """Make at least ``n`` digits available and return the digit list."""
        if len(self._digits) < n:
            with self._lock:
                while len(self._digits) < n:
                    self._extend_one()
        return self._digits

    def digits(self, n: int) -> tuple[int, ...]:
        return tuple(self.ensure(n)[:n])

    def digit(self, i: int) -> int:
        """The 1-based digit ``c(i)``."""
        if i < 1:
            raise IndexError("digits are indexed from 1")
        return self.ensure(i)[i - 1]

    def remainder(self, i: int) -> ExactRemainder:
        """The exact remainder ``r_i`` (``r_0 = 1``); only before periodic shortcutting."""
        self.ensure(i)
        if i >= len(self._remainders):
            pre, per = self.period
            i = pre + (i - pre) % per
        return self._remainders[i]

    def canonical_state(self, m: int) -> int:
        """Smallest state whose future (remainder) equals that of state ``m``."""
        self.ensure(m)
        return self._canon[m]


def expand(beta: Union[BetaNumber, str], n: int) -> tuple[int, ...]:
    """First ``n`` digits of the quasi-greedy expansion of 1 in base beta."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(beta, str):
        beta = BetaNumber.parse(beta)
    return DigitStream(beta).digits(n)


class BetaShift:
    """Word-level machinery of the one-sided beta-shift.

    Parameters
    ----------
    beta : BetaNumber or str
        The base, or a spec string accepted by :meth:`BetaNumber.parse`.
    """

    def __init__(self, beta: Union[BetaNumber, str], zero_window: int = ZERO_RUN_WINDOW):
        if isinstance(beta, str):
            beta = BetaNumber.parse(beta)
        self.beta = beta
        self.stream = DigitStream(beta, zero_window)
        self.b = self.stream.digit(1) + 1
        self.alphabet = tuple(range(self.b))

    def __repr__(self) -> str:
        return f"BetaShift({self.beta.spec!r})"

    # -- digits -------------------------------------------------------------

    def digits(self, n: int) -> tuple[int, ...]:
        return self.stream.digits(n)

    def c(self, i: int) -> int:
        return self.stream.digit(i)

    def is_prefix(self, u: Sequence[int]) -> bool:
        return tuple(u) == self.stream.digits(len(u)) if u else True

    # -- automaton ------------------------------------------------------------

    def check_letters(self, w: Sequence[int]) -> None:
        for a in w:
            if not (isinstance(a, int) and 0 <= a < self.b):
                raise AlphabetError(f"letter {a!r} not in alphabet 0..{self.b - 1}")

    def step(self, state: int, a: int) -> int | None:
        d = self.stream.ensure(state + 1)[state]
        if a < d:
            return 0
        if a == d:
            return state + 1
        return None

    def run(self, w: Sequence[int], state: int = 0) -> int | None:
        """Final automaton state after reading ``w`` from ``state``; None on rejection."""
        c = self.stream.ensure(state + len(w) + 1)
        m = state
        for a in w:
            d = c[m]
            if a < d:
                m = 0
            elif a == d:
                m += 1
            else:
                return None
        return m

    def is_admissible(self, w: Sequence[int]) -> bool:
        self.check_letters(w)
        return self.run(w) is not None

    def _state_or_raise(self, w: Sequence[int]) -> int:
        self.check_letters(w)
        m = self.run(w)
        if m is None:
            raise Inadmissible(f"word {format_word(w, self.b)} is not in the language")
        return m

    def state_of(self, w: Sequence[int]) -> int:
        """Length of the longest suffix of ``w`` that is a prefix of the digit stream."""
        return self._state_or_raise(w)

    def suffix_decompose(self, w: Sequence[int]) -> tuple[Word, Word]:
        w = tuple(w)
        m = self._state_or_raise(w)
        return w[: len(w) - m], w[len(w) - m:]

    def hat(self, w: Sequence[int]) -> Word:
        """Decrement the last nonzero letter of the maximal prefix-suffix of ``w``."""
        v, s = self.suffix_decompose(w)
        if not s:
            return v
        j = max(i for i, a in enumerate(s) if a)
        return v + s[:j] + (s[j] - 1,) + s[j + 1:]

    def z_value(self, w: Sequence[int]) -> int:
        """Number of zeros of the digit stream right after the prefix ``s(w)``."""
        m = self._state_or_raise(w)
        if m == 0:
            return 0
        p = 0
        while self.c(m + p + 1) == 0:
            p += 1
        return p

    def concatenable(self, w: Sequence[int], w2: Sequence[int]) -> bool:
        m = self._state_or_raise(w)
        self._state_or_raise(w2)
        return self.run(w2, m) is not None

    def extend_by_zero(self, u: Sequence[int]) -> Word:
        u = tuple(u)
        self.check_letters(u)
        if not self.is_prefix(u):
            raise NotAPrefix(f"{format_word(u, self.b)} is not a prefix of the expansion of 1")
        return u + (0,)

    # -- enumeration --------------------------------------------------------

    def count(self, n: int) -> int:
        """Number of admissible words of length ``n``, by dynamic programming."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.stream.ensure(n + 1)
        canon = self.stream.canonical_state
        layer = {0: 1}
        for _ in range(n):
            nxt: dict[int, int] = {}
            for m, k in layer.items():
                d = self.c(m + 1)
                if d:
                    nxt[0] = nxt.get(0, 0) + d * k
                s = canon(m + 1)
                nxt[s] = nxt.get(s, 0) + k
            layer = nxt
        return sum(layer.values())

    def iter_words(self, n: int, state: int = 0) -> Iterator[tuple[Word, int]]:
        """Lexicographic (word, final state) pairs of length ``n`` readable from ``state``."""
        c = self.stream.ensure(state + n + 1)
        prefix: list[int] = []

        def rec(m: int, left: int):
            if left == 0:
                yield tuple(prefix), m
                return
            d = c[m]
            for a in range(d + 1):
                prefix.append(a)
                yield from rec(0 if a < d else m + 1, left - 1)
                prefix.pop()

        yield from rec(state, n)

    def enumerate(self, n: int, budget: int = DEFAULT_BUDGET) -> list[Word]:
        """All admissible words of length ``n`` in lexicographic order."""
        total = self.count(n)
        if total > budget:
            raise BudgetExceeded(f"{total} words of length {n} exceed the budget {budget}")
        return [w for w, _ in self.iter_words(n)]

    def hat_multiplicity(self, n: int, budget: int = DEFAULT_BUDGET) -> int:
        """Largest number of words of length ``n`` sharing the same image under :meth:`hat`."""
        images: dict[Word, int] = {}
        for w in self.enumerate(n, budget):
            h = self.hat(w)
            images[h] = images.get(h, 0) + 1
        return max(images.values())


def format_word(w: Sequence[int], b: int) -> str:
    """Comma-free digit string when ``b <= 10``, comma separated otherwise."""
    if b <= 10:
        return "".join(str(a) for a in w)
    return ",".join(str(a) for a in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "e", "eps"):
        return ()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    if not text.isdigit():
        raise ValueError(f"not a word: {text!r}")
    return tuple(int(ch) for ch in text)


def all_words(b: int, n: int) -> Iterator[Word]:
    """Every word of length ``n`` over ``{0, ..., b-1}``, admissible or not."""
    return product(range(b), repeat=n)
