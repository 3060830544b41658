"""Cocycles, cylinder-swap involutions, tail trees and the conformality residual."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .beta_lang import BetaShift, Word
from .errors import BudgetExceeded, NotConjugate, SpecError, TailTruncationError
from .potential import Potential
from .shift_space import FinitePoint, Window, class_blocks, in_shift

TAIL_TOLERANCE = 1e-9
MAX_TAIL_DEPTH = 100_000


class Truncated(NamedTuple):
    """A truncated infinite sum with its certified remainder bound."""

    value: float
    slack: float
    depth: int

    def __float__(self) -> float:
        return self.value


def difference_window(x: FinitePoint, y: FinitePoint) -> Window | None:
    lo = min(x.start, y.start)
    hi = max(x.end, y.end)
    diff = [j for j in range(lo, hi) if x[j] != y[j]]
    if not diff:
        return None
    return Window(diff[0], diff[-1])


def choose_tail_depth(f: Potential, dlo: int, dhi: int, b: int, tol: float = TAIL_TOLERANCE) -> int:
    """Smallest symmetric cut ``|g| <= T`` whose certified remainder is at most ``tol``."""
    ilo, ihi = f.influence(dlo, dhi)
    if ilo > ihi:
        return 0
    if f.is_local:
        return int(max(abs(ilo), abs(ihi)))
    t = max(abs(dlo), abs(dhi))
    while f.outside_bound(dlo, dhi, -t, t, b) > tol:
        t = 2 * t + 1
        if t > MAX_TAIL_DEPTH:
            raise TailTruncationError("no admissible tail depth below the search limit")
    lo, hi = t // 2, t
    while lo < hi:
        mid = (lo + hi) // 2
        if f.outside_bound(dlo, dhi, -mid, mid, b) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return hi


def truncated_sum(
    f: Potential, x: FinitePoint, y: FinitePoint, dlo: int, dhi: int, depth: int, b: int
) -> Truncated:
    """``sum_{|g| <= depth} f(T^g y) - f(T^g x)`` for x, y agreeing off ``[dlo, dhi]``."""
    ilo, ihi = f.influence(dlo, dhi)
    lo = int(max(-depth, ilo))
    hi = int(min(depth, ihi))
    value = f.delta_sum(x, y, lo, hi) if lo <= hi else 0.0
    return Truncated(value, f.outside_bound(dlo, dhi, -depth, depth, b), depth)


def cocycle(
    sh: BetaShift,
    f: Potential,
    x: FinitePoint,
    y: FinitePoint,
    tail_depth: int | None = None,
    tol: float = TAIL_TOLERANCE,
) -> Truncated:
    """``psi_f(x, y) = sum_g f(T^g y) - f(T^g x)``, cut at ``|g| <= tail_depth``.

    With ``tail_depth=None`` the smallest cut certified below ``tol`` is used.
    """
    if not isinstance(x, FinitePoint) or not isinstance(y, FinitePoint):
        raise NotConjugate("cocycle needs two finitely supported points")
    d = difference_window(x, y)
    if d is None:
        return Truncated(0.0, 0.0, tail_depth or 0)
    if tail_depth is None:
        tail_depth = choose_tail_depth(f, d.k, d.l, sh.b, tol)
    out = truncated_sum(f, x, y, d.k, d.l, tail_depth, sh.b)
    if out.slack > tol:
        raise TailTruncationError(
            f"tail beyond |g| <= {tail_depth} is only bounded by {out.slack:.3g} > {tol:g}"
        )
    return out


# -- involutions --------------------------------------------------------------

@dataclass(frozen=True)
class Involution:
    window: Window
    u: Word
    v: Word

    def __post_init__(self):
        n = len(self.window)
        if len(self.u) != n or len(self.v) != n:
            raise SpecError(f"u and v must have length {n}")

    def check(self, sh: BetaShift) -> "Involution":
        for w in (self.u, self.v):
            if not sh.is_admissible(w):
                raise SpecError(f"{w} is not admissible")
        return self


def apply_involution(sh: BetaShift, invol: Involution, x: FinitePoint) -> FinitePoint:
    """Swap the ``u``/``v`` block on the window when the swapped point stays in the shift."""
    block = x.word(invol.window)
    if block == invol.u:
        target = invol.v
    elif block == invol.v:
        target = invol.u
    else:
        return x
    y = x.replace(invol.window, target)
    return y if in_shift(sh, y) else x


def truncated_cocycle(
    sh: BetaShift,
    f: Potential,
    x: FinitePoint,
    invol: Involution,
    r: int,
    t: int,
) -> float:
    """``psi_{f,r}(x)``: Birkhoff difference over the window grown by ``r``, between
    the zero padding of ``x`` on the window grown by ``t`` and its image."""
    if t < r:
        raise ValueError("t must be at least r")
    L = invol.window
    outer = L.extend(t)
    xbar = FinitePoint.from_word(x.word(outer), outer)
    ybar = apply_involution(sh, invol, xbar)
    if ybar == xbar:
        return 0.0
    inner = L.extend(r)
    return f.delta_sum(xbar, ybar, inner.k, inner.l)


def tail_classes(sh: BetaShift, window: Window, points: Sequence[FinitePoint]) -> dict[frozenset, list]:
    """Group points by the set of cylinders on ``window`` met by their class."""
    groups: dict[frozenset, list] = {}
    for x in points:
        groups.setdefault(class_blocks(sh, x, window), []).append(x)
    return groups


# -- trees --------------------------------------------------------------------

@dataclass
class TailTree:
    """Levels of ``T(u)`` (``v is None``) or of the joint tree ``T(u, v)``."""

    window: Window
    u: Word
    v: Word | None
    levels: list[list[tuple[Word, Word]]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def outer(self, n: int | None = None) -> Window:
        return self.window.extend(self.depth if n is None else n)

    def a2(self, n: int | None = None) -> list[Word]:
        """Cylinder words of ``A_2(n)`` on the window grown by ``n``."""
        n = self.depth if n is None else n
        return [wm + self.u + wp for wm, wp in self.levels[n]]

    def b2(self, n: int | None = None) -> list[Word]:
        n = self.depth if n is None else n
        if self.v is None:
            raise ValueError("B_2 needs a joint tree")
        return [wm + self.v + wp for wm, wp in self.levels[n]]


def grow_tree(
    sh: BetaShift,
    u: Sequence[int],
    v: Sequence[int] | None,
    window: Window,
    n: int,
    budget: int = 2_000_000,
) -> TailTree:
    u = tuple(u)
    roots = [u] if v is None else [u, tuple(v)]
    for w in roots:
        if len(w) != len(window):
            raise SpecError(f"root {w} does not fit the window {window}")
        if not sh.is_admissible(w):
            raise SpecError(f"root {w} is not admissible")
    tree = TailTree(window, u, None if v is None else tuple(v), [[((), ())]])
    size = 1
    for _ in range(n):
        nxt = []
        for wm, wp in tree.levels[-1]:
            for a in sh.alphabet:
                left = (a,) + wm
                for c in sh.alphabet:
                    right = wp + (c,)
                    if all(sh.run(left + w + right) is not None for w in roots):
                        nxt.append((left, right))
        size += len(nxt)
        if size > budget:
            raise BudgetExceeded(f"tree exceeds {budget} vertices")
        nxt.sort()
        tree.levels.append(nxt)
    return tree


class Sufficiency(NamedTuple):
    left_ok: bool
    right_ok: bool

    @property
    def sufficient(self) -> bool:
        return self.left_ok and self.right_ok


def sufficiency_filter(
    sh: BetaShift, tree: TailTree, a: Sequence[int], b: Sequence[int], n: int | None = None
) -> dict[tuple[Word, Word], Sufficiency]:
    """For each depth-``n`` vertex, whether ``|s(a w-)| <= n`` and ``|s(a w- v w+)| <= n``.

    When both hold, ``a w- v w+ b`` is admissible as soon as ``a w- u w+ b`` is.
    Vertices where ``a w-`` is not even admissible report ``left_ok=False``.
    The right boundary ``b`` does not enter the conditions themselves.
    """
    n = tree.depth if n is None else n
    v = tree.v if tree.v is not None else tree.u
    a = tuple(a)
    out = {}
    for wm, wp in tree.levels[n]:
        m1 = sh.run(a + wm)
        m2 = sh.run(a + wm + v + wp)
        out[(wm, wp)] = Sufficiency(m1 is not None and m1 <= n, m2 is not None and m2 <= n)
    return out


# -- conformality --------------------------------------------------------------

class Residual(NamedTuple):
    residual: float
    slack: float
    a2_count: int
    b2_count: int
    mass_b2: float
    weighted_a2: float

    def to_json(self) -> dict:
        return self._asdict()


def conformality_residual(
    sh: BetaShift,
    f: Potential,
    mu: Mapping[Word, float],
    invol: Involution,
    n: int,
    r: int | None = None,
    tree: TailTree | None = None,
) -> Residual:
    """``|mu(B_2(n)) - sum_{c in A_2(n)} mu(c) exp psi_{f,r}(x_c)|``.

    ``mu`` maps words on the window grown by ``n`` to masses.  The slack
    bounds the effect of cutting the cocycle to the window grown by ``r``.
    """
    r = n if r is None else r
    if r > n:
        raise ValueError("r must not exceed n")
    if tree is None:
        tree = grow_tree(sh, invol.u, invol.v, invol.window, n)
    outer = invol.window.extend(n)
    inner = invol.window.extend(r)
    L = invol.window
    terms = []
    for (wm, wp) in tree.levels[n]:
        x = FinitePoint.from_word(wm + invol.u + wp, outer)
        y = FinitePoint.from_word(wm + invol.v + wp, outer)
        psi = f.delta_sum(x, y, inner.k, inner.l)
        terms.append(mu.get(wm + invol.u + wp, 0.0) * math.exp(psi))
    weighted = math.fsum(terms)
    mass_b = math.fsum(mu.get(w, 0.0) for w in tree.b2(n))
    cut = f.outside_bound(L.k, L.l, inner.k, inner.l, sh.b)
    slack = math.expm1(cut) * weighted
    count = len(tree.levels[n])
    return Residual(abs(mass_b - weighted), slack, count, count, mass_b, weighted)
