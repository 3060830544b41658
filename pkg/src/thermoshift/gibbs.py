"""Finite-volume Gibbs kernels, the averaging operators M_L and the weak-dependence probe."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .beta_lang import BetaShift, Word
from .conformal import TAIL_TOLERANCE, choose_tail_depth, truncated_sum
from .errors import BudgetExceeded, TailTruncationError
from .potential import Potential
from .shift_space import FinitePoint, Window, class_blocks, conjugacy_set

Observable = Callable[[FinitePoint], float]


def logsumexp(values: Sequence[float]) -> float:
    top = max(values)
    if top == -math.inf:
        return top
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


@dataclass(frozen=True)
class KernelRow:
    """The probability ``pi_L^f(. | x)`` on the class of ``x``."""

    base: FinitePoint
    window: Window
    support: tuple[FinitePoint, ...]
    log_weights: tuple[float, ...]
    weights: tuple[float, ...]
    tail_depth: int
    slack: float

    def weight(self, y: FinitePoint) -> float:
        for z, w in zip(self.support, self.weights):
            if z == y:
                return w
        return 0.0

    def expect(self, phi: Observable) -> float:
        return math.fsum(w * phi(y) for y, w in zip(self.support, self.weights))

    def to_json(self) -> dict:
        return {
            "window": [self.window.k, self.window.l],
            "base": self.base.to_json(),
            "support": [y.to_json() for y in self.support],
            "weights": list(self.weights),
            "tail_depth": self.tail_depth,
            "slack": self.slack,
        }


def kernel_row(
    sh: BetaShift,
    f: Potential,
    x: FinitePoint,
    window: Window,
    tail_depth: int | None = None,
    tol: float = TAIL_TOLERANCE,
) -> KernelRow:
    """Weights proportional to ``exp psi_f(x, y)`` over the class of ``x``.

    Exponents are taken relative to the first member of the (sorted) class,
    so the row is computed from the same numbers for every base point in it.
    """
    support = tuple(conjugacy_set(sh, x, window))
    if tail_depth is None:
        tail_depth = choose_tail_depth(f, window.k, window.l, sh.b, tol)
    ref = support[0]
    logs = []
    slack = 0.0
    for y in support:
        t = truncated_sum(f, ref, y, window.k, window.l, tail_depth, sh.b)
        slack = t.slack
        logs.append(t.value)
    if slack > tol:
        raise TailTruncationError(f"kernel tail bound {slack:.3g} exceeds {tol:g}")
    z = logsumexp(logs)
    weights = tuple(math.exp(v - z) for v in logs)
    return KernelRow(x, window, support, tuple(logs), weights, tail_depth, slack)


def _class_key(x: FinitePoint, window: Window) -> FinitePoint:
    return x.replace(window, (0,) * len(window))


class Averager:
    """``M_L`` with rows memoized per class."""

    def __init__(self, sh: BetaShift, f: Potential, window: Window, tail_depth: int | None = None):
        self.sh, self.f, self.window = sh, f, window
        self.tail_depth = tail_depth
        self._rows: dict[FinitePoint, KernelRow] = {}

    def row(self, x: FinitePoint) -> KernelRow:
        key = _class_key(x, self.window)
        row = self._rows.get(key)
        if row is None:
            row = kernel_row(self.sh, self.f, x, self.window, self.tail_depth)
            self._rows[key] = row
        return row

    def apply(self, phi: Observable) -> Observable:
        cache: dict[FinitePoint, float] = {}

        def m_phi(x: FinitePoint) -> float:
            key = _class_key(x, self.window)
            if key not in cache:
                cache[key] = self.row(x).expect(phi)
            return cache[key]

        return m_phi


def apply_M(sh: BetaShift, f: Potential, phi: Observable, window: Window, x: FinitePoint) -> float:
    """``sum_{y in W_L^x} phi(y) pi_L^f(y | x)``."""
    return kernel_row(sh, f, x, window).expect(phi)


def consistency_check(
    sh: BetaShift,
    f: Potential,
    phi: Observable,
    inner: Window,
    outer: Window,
    points: Iterable[FinitePoint],
) -> float:
    """Largest ``|M_outer(phi)(x) - M_outer(M_inner(phi))(x)|`` over ``points``."""
    if not outer.contains_window(inner):
        raise ValueError(f"{inner} is not contained in {outer}")
    m_in = Averager(sh, f, inner).apply(phi)
    m_out = Averager(sh, f, outer)
    lhs = m_out.apply(phi)
    rhs = m_out.apply(m_in)
    return max((abs(lhs(x) - rhs(x)) for x in points), default=0.0)


@dataclass
class ProbeVerdict:
    window: Window
    depth: int
    witness: Window | None
    radius: int | None
    counterexample: tuple[FinitePoint, FinitePoint, Word] | None
    checked: list[dict]

    def to_json(self) -> dict:
        cx = None
        if self.counterexample is not None:
            x, y, v = self.counterexample
            cx = {"x": x.to_json(), "x_prime": y.to_json(), "v": list(v)}
        return {
            "window": [self.window.k, self.window.l],
            "depth": self.depth,
            "witness": None if self.witness is None else [self.witness.k, self.witness.l],
            "radius": self.radius,
            "counterexample": cx,
            "checked": self.checked,
            "verdict": "witness" if self.witness is not None else "violation",
        }


def weak_dependence_probe(
    sh: BetaShift,
    window: Window,
    search_radius: int,
    depth: int,
    budget: int = 1_000_000,
) -> ProbeVerdict:
    """Look for ``Lbar = window`` grown by ``1..search_radius`` such that the cylinders
    met by ``W_window^x`` depend only on ``x`` on ``Lbar`` minus ``window``.

    Points are all zero paddings of admissible words on ``Lbar`` grown by
    ``depth``.  A witness means no violation among them, not a proof.
    """
    if search_radius < 1:
        raise ValueError("search_radius must be at least 1")
    checked = []
    last = None
    for r in range(1, search_radius + 1):
        lbar = window.extend(r)
        region = lbar.extend(depth)
        total = sh.count(len(region))
        if total > budget:
            raise BudgetExceeded(f"{total} configurations on {region} exceed the budget {budget}")
        seen: dict[Word, tuple[FinitePoint, frozenset]] = {}
        violation = None
        for w, _ in sh.iter_words(len(region)):
            x = FinitePoint(region.k, w)
            collar = tuple(x[j] for j in lbar if j not in window)
            blocks = class_blocks(sh, x, window)
            prev = seen.get(collar)
            if prev is None:
                seen[collar] = (x, blocks)
            elif prev[1] != blocks:
                v = min(prev[1] ^ blocks)
                violation = (prev[0], x, v)
                break
        checked.append({"radius": r, "configurations": total, "violation": violation is not None})
        if violation is None:
            return ProbeVerdict(window, depth, lbar, r, None, checked)
        last = violation
    return ProbeVerdict(window, depth, None, None, last, checked)
