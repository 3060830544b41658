"""Finitely supported points of the two-sided beta-shift.

Every point handled here is zero outside a finite window.  Such a point lies
in the natural extension iff its letters on the support form an admissible
word: zeros on the left keep the automaton in state 0 (``c(1) > 0``) and any
state can be continued by zeros on the right.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .beta_lang import BetaShift, Word
from .errors import Inadmissible, SpecError

EXPANSIVE_CONSTANT = 0.5


@dataclass(frozen=True, order=True)
class Window:
    """The integer interval ``[k, l]``."""

    k: int
    l: int

    def __post_init__(self):
        if self.k > self.l:
            raise ValueError(f"empty window [{self.k}, {self.l}]")

    def __len__(self) -> int:
        return self.l - self.k + 1

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.k, self.l + 1))

    def __contains__(self, j) -> bool:
        return self.k <= j <= self.l

    def extend(self, left: int, right: int | None = None) -> "Window":
        return Window(self.k - left, self.l + (left if right is None else right))

    def contains_window(self, other: "Window") -> bool:
        return self.k <= other.k and other.l <= self.l

    def shifted(self, j: int) -> "Window":
        return Window(self.k + j, self.l + j)

    @classmethod
    def parse(cls, text: str) -> "Window":
        try:
            k, l = (int(t) for t in text.strip().strip("[]").split(","))
        except ValueError as exc:
            raise SpecError(f"bad window {text!r}; expected k,l") from exc
        return cls(k, l)

    def __str__(self) -> str:
        return f"[{self.k},{self.l}]"


class FinitePoint:
    """A point that is 0 outside a finite set of coordinates.

    Stored canonically with leading and trailing zeros trimmed, so equality
    and hashing are equality of sequences on all of Z.
    """

    __slots__ = ("start", "letters")

    def __init__(self, start: int, letters: Sequence[int]):
        letters = tuple(letters)
        lo, hi = 0, len(letters)
        while lo < hi and letters[lo] == 0:
            lo += 1
        while hi > lo and letters[hi - 1] == 0:
            hi -= 1
        self.start = start + lo if lo < hi else 0
        self.letters = letters[lo:hi]

    @classmethod
    def zero(cls) -> "FinitePoint":
        return cls(0, ())

    @classmethod
    def from_word(cls, w: Sequence[int], window: Window) -> "FinitePoint":
        if len(w) != len(window):
            raise ValueError(f"word of length {len(w)} does not fit window {window}")
        return cls(window.k, w)

    @classmethod
    def unit(cls, j: int, a: int = 1) -> "FinitePoint":
        """The point with letter ``a`` at coordinate ``j`` and 0 elsewhere."""
        return cls(j, (a,))

    @property
    def end(self) -> int:
        """One past the last nonzero coordinate."""
        return self.start + len(self.letters)

    @property
    def support(self) -> Window:
        if not self.letters:
            return Window(0, 0)
        return Window(self.start, self.end - 1)

    def __getitem__(self, j: int) -> int:
        i = j - self.start
        if 0 <= i < len(self.letters):
            return self.letters[i]
        return 0

    def word(self, window: Window) -> Word:
        return tuple(self[j] for j in range(window.k, window.l + 1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePoint)
            and self.start == other.start
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.start, self.letters))

    def sort_key(self) -> tuple:
        return (self.start, self.letters)

    def __repr__(self) -> str:
        if not self.letters:
            return "FinitePoint.zero()"
        return f"FinitePoint({self.start}, {self.letters})"

    def to_json(self) -> dict:
        s = self.support
        return {"window": [s.k, s.l], "letters": list(self.word(s))}

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePoint":
        k, l = obj["window"]
        return cls.from_word(tuple(obj["letters"]), Window(k, l))

    def replace(self, window: Window, w: Sequence[int]) -> "FinitePoint":
        """The point equal to ``self`` off ``window`` and to ``w`` on it."""
        lo = min(self.start, window.k)
        hi = max(self.end - 1, window.l)
        letters = [self[j] for j in range(lo, hi + 1)]
        letters[window.k - lo: window.l - lo + 1] = w
        return FinitePoint(lo, letters)


def project(x: FinitePoint, window: Window) -> Word:
    return x.word(window)


def in_shift(shift: BetaShift, x: FinitePoint) -> bool:
    return shift.run(x.letters) is not None


def zero_pad(shift: BetaShift, w: Sequence[int], window: Window) -> FinitePoint:
    """The point equal to ``w`` on ``window`` and 0 elsewhere."""
    shift.check_letters(w)
    x = FinitePoint.from_word(tuple(w), window)
    if not in_shift(shift, x):
        raise Inadmissible(f"zero padding of {tuple(w)} on {window} is not in the shift")
    return x


def epsilon(m: int) -> float:
    """The metric scale, 2^-m."""
    return 2.0 ** -m


def distance(x: FinitePoint, y: FinitePoint) -> float:
    """``epsilon(m)`` for the least m with x, y differing at m or -m; 0 if equal."""
    if x == y:
        return 0.0
    coords = set(range(x.start, x.end)) | set(range(y.start, y.end))
    m = min(abs(j) for j in coords if x[j] != y[j])
    return epsilon(m)


def shift(x: FinitePoint, j: int) -> FinitePoint:
    """``(T^j x)(k) = x(k + j)``."""
    return FinitePoint(x.start - j, x.letters)


def conjugacy_set(sh: BetaShift, x: FinitePoint, window: Window) -> list[FinitePoint]:
    """All points of the shift that agree with ``x`` off ``window``.

    Sorted by the block on ``window``; the same list comes back for every
    member of the class.
    """
    lo = min(x.start, window.k)
    hi = max(x.end - 1, window.l)
    left = tuple(x[j] for j in range(lo, window.k))
    right = tuple(x[j] for j in range(window.l + 1, hi + 1))
    state = sh.run(left)
    if state is None:
        return []
    out = []
    for w, m in sh.iter_words(len(window), state):
        if sh.run(right, m) is not None:
            out.append(FinitePoint(lo, left + w + right))
    return out


def class_blocks(sh: BetaShift, x: FinitePoint, window: Window) -> frozenset:
    """The words ``v`` with ``[v] meeting W_window^x``, i.e. the fillings of ``window``."""
    return frozenset(y.word(window) for y in conjugacy_set(sh, x, window))


def points_on(sh: BetaShift, window: Window) -> list[FinitePoint]:
    """Zero paddings of every admissible word on ``window``."""
    return [FinitePoint(window.k, w) for w, _ in sh.iter_words(len(window))]


def sorted_points(points: Iterable[FinitePoint]) -> list[FinitePoint]:
    return sorted(points, key=FinitePoint.sort_key)


def random_point(sh: BetaShift, window: Window, rng) -> FinitePoint:
    """Zero padding of a random admissible word on ``window``, drawn letter by
    letter along the automaton (not uniform over words)."""
    m = 0
    letters = []
    for _ in range(len(window)):
        a = rng.randint(0, sh.c(m + 1))
        letters.append(a)
        m = sh.step(m, a)
    return FinitePoint(window.k, letters)
