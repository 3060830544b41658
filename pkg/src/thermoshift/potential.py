"""Potentials on the two-sided beta-shift.

Only two families are representable: window-local functions (a coordinate,
a constant or a lookup table on ``x[-p..p]``) and the geometric decay
``f(x) = sum_{k>=0} a * lam**k * x(k)``, together with scalar multiples.
Each kind knows which coordinates it reads, so infinite sums of differences
``sum_g f(T^g y) - f(T^g x)`` can be cut with a certified remainder.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Mapping

from .beta_lang import BetaShift, parse_word
from .errors import BudgetExceeded, SpecError
from .shift_space import FinitePoint, Window

INF = math.inf


@dataclass(frozen=True)
class SiteTerms:
    """Birkhoff sum over a volume ``[A, B]`` of a zero-padded word, written as
    ``sum_i term(i, w[i-left .. i+right])`` over ``i`` in ``[A, B]``."""

    left: int
    right: int
    term: Callable[[int, tuple], float]


class Potential:
    """Base class; ``at(x, j)`` is ``f(T^j x)``."""

    spec = "?"
    # coordinates read by f relative to the origin; hi may be INF
    reach: tuple[float, float] = (0, -1)

    @property
    def is_local(self) -> bool:
        return self.reach[1] != INF

    def at(self, x: FinitePoint, j: int) -> float:
        raise NotImplementedError

    def __call__(self, x: FinitePoint) -> float:
        return self.at(x, 0)

    def birkhoff(self, x: FinitePoint, window: Window) -> float:
        return math.fsum(self.at(x, j) for j in range(window.k, window.l + 1))

    def influence(self, dlo: int, dhi: int) -> tuple[float, float]:
        """Range of g for which ``f(T^g .)`` reads a coordinate in [dlo, dhi]."""
        rlo, rhi = self.reach
        if rlo > rhi:
            return (1, 0)
        return (dlo - rhi, dhi - rlo)

    def delta_sum(self, x: FinitePoint, y: FinitePoint, glo: int, ghi: int) -> float:
        """``sum_{g=glo}^{ghi} f(T^g y) - f(T^g x)``."""
        return math.fsum(self.at(y, g) - self.at(x, g) for g in range(glo, ghi + 1))

    def oscillation(self, b: int) -> float:
        """sup f - inf f over the shift (upper bound)."""
        raise NotImplementedError

    def sup_norm(self, b: int) -> float:
        raise NotImplementedError

    def outside_bound(self, dlo: int, dhi: int, glo: int, ghi: int, b: int) -> float:
        """Bound on ``sum_{g not in [glo, ghi]} |f(T^g y) - f(T^g x)|`` for x, y
        agreeing off ``[dlo, dhi]``."""
        ilo, ihi = self.influence(dlo, dhi)
        if ilo > ihi:
            return 0.0
        outside = max(0, min(ihi, glo - 1) - ilo + 1) + max(0, ihi - max(ilo, ghi + 1) + 1)
        return outside * self.oscillation(b)

    def variation_bound(self, n: int, b: int) -> float:
        """Declared envelope V(n) >= var_n(f) (agreement on [0, n-1])."""
        rlo, rhi = self.reach
        if rlo > rhi or (rlo >= 0 and rhi <= n - 1):
            return 0.0
        return self.oscillation(b)

    def site_terms(self, A: int, B: int) -> SiteTerms:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"Potential({self.spec!r})"


class Zero(Potential):
    spec = "zero"

    def at(self, x, j):
        return 0.0

    def delta_sum(self, x, y, glo, ghi):
        return 0.0

    def oscillation(self, b):
        return 0.0

    def sup_norm(self, b):
        return 0.0

    def site_terms(self, A, B):
        return SiteTerms(0, 0, lambda i, blk: 0.0)


class Constant(Potential):
    def __init__(self, value: float):
        self.value = float(value)
        self.spec = f"const:{value}"

    def at(self, x, j):
        return self.value

    def delta_sum(self, x, y, glo, ghi):
        return 0.0

    def oscillation(self, b):
        return 0.0

    def sup_norm(self, b):
        return abs(self.value)

    def site_terms(self, A, B):
        v = self.value
        return SiteTerms(0, 0, lambda i, blk: v)


class Coordinate(Potential):
    """``f(x) = x(j)``."""

    def __init__(self, j: int):
        self.j = int(j)
        self.reach = (self.j, self.j)
        self.spec = f"coord:{self.j}"

    def at(self, x, g):
        return float(x[g + self.j])

    def oscillation(self, b):
        return float(b - 1)

    def sup_norm(self, b):
        return float(b - 1)

    def site_terms(self, A, B):
        lo, hi = A + self.j, B + self.j
        return SiteTerms(0, 0, lambda m, blk: float(blk[0]) if lo <= m <= hi else 0.0)


class Table(Potential):
    """``f(x) = table[x(-p) ... x(p)]``, 0 for words not listed."""

    def __init__(self, radius: int, table: Mapping[tuple, float], spec: str | None = None):
        self.p = int(radius)
        for w in table:
            if len(w) != 2 * self.p + 1:
                raise SpecError(f"table word {w} has length != {2 * self.p + 1}")
        self.table = {tuple(w): float(v) for w, v in table.items()}
        self.reach = (-self.p, self.p)
        self.spec = spec or "table:p={}:{}".format(
            self.p, ";".join(f"{''.join(map(str, w))}={v}" for w, v in sorted(self.table.items()))
        )
        vals = list(self.table.values()) + [0.0]
        self._osc = max(vals) - min(vals)
        self._sup = max(abs(v) for v in vals)

    def at(self, x, j):
        p = self.p
        return self.table.get(tuple(x[i] for i in range(j - p, j + p + 1)), 0.0)

    def oscillation(self, b):
        return self._osc

    def sup_norm(self, b):
        return self._sup

    def site_terms(self, A, B):
        t = self.table
        return SiteTerms(self.p, self.p, lambda i, blk: t.get(blk, 0.0))


class GeometricDecay(Potential):
    """``f(x) = sum_{k>=0} a * lam**k * x(k)`` with ``0 < lam < 1``."""

    reach = (0, INF)

    def __init__(self, a: float, lam: float):
        if not 0 < lam < 1:
            raise SpecError(f"decay rate must lie in (0, 1), got {lam}")
        self.a = float(a)
        self.lam = float(lam)
        self.spec = f"decay:geom:{a},{lam}"

    def at(self, x, j):
        a, lam = self.a, self.lam
        return math.fsum(
            a * lam ** (i - j) * x[i] for i in range(max(j, x.start), x.end) if x[i]
        )

    def influence(self, dlo, dhi):
        return (-INF, dhi)

    def delta_sum(self, x, y, glo, ghi):
        a, lam = self.a, self.lam
        lo = min(x.start, y.start)
        hi = max(x.end, y.end)
        acc = []
        for i in range(max(lo, glo), hi):
            d = y[i] - x[i]
            if d:
                top = min(i, ghi)
                if top >= glo:
                    acc.append(d * a * (lam ** (i - top) - lam ** (i - glo + 1)) / (1 - lam))
        return math.fsum(acc)

    def _scale(self, b: int) -> float:
        return abs(self.a) * (b - 1) / (1 - self.lam)

    def oscillation(self, b):
        return self._scale(b)

    def sup_norm(self, b):
        return self._scale(b)

    def outside_bound(self, dlo, dhi, glo, ghi, b):
        lam = self.lam
        c = self._scale(b)
        if glo <= dlo:
            below = lam ** (dlo - glo + 1) / (1 - lam)
        else:
            below = lam / (1 - lam) + (glo - dlo)
        above = max(0, dhi - ghi)
        return c * (below + above)

    def variation_bound(self, n, b):
        return self._scale(b) * self.lam ** n

    def site_terms(self, A, B):
        a, lam = self.a, self.lam
        return SiteTerms(
            0, 0, lambda m, blk: blk[0] * a * (1 - lam ** (m - A + 1)) / (1 - lam) if blk[0] else 0.0
        )


class Scaled(Potential):
    def __init__(self, factor: float, inner: Potential):
        self.factor = float(factor)
        self.inner = inner
        self.reach = inner.reach
        self.spec = f"scale:{factor}:{inner.spec}"

    def at(self, x, j):
        return self.factor * self.inner.at(x, j)

    def influence(self, dlo, dhi):
        return self.inner.influence(dlo, dhi)

    def delta_sum(self, x, y, glo, ghi):
        return self.factor * self.inner.delta_sum(x, y, glo, ghi)

    def oscillation(self, b):
        return abs(self.factor) * self.inner.oscillation(b)

    def sup_norm(self, b):
        return abs(self.factor) * self.inner.sup_norm(b)

    def outside_bound(self, dlo, dhi, glo, ghi, b):
        return abs(self.factor) * self.inner.outside_bound(dlo, dhi, glo, ghi, b)

    def variation_bound(self, n, b):
        return abs(self.factor) * self.inner.variation_bound(n, b)

    def site_terms(self, A, B):
        st = self.inner.site_terms(A, B)
        s, term = self.factor, st.term
        return SiteTerms(st.left, st.right, lambda i, blk: s * term(i, blk))


def parse_potential(spec: str) -> Potential:
    """Parse ``zero``, ``const:K``, ``coord:j``, ``table:p=R:w=v;...``,
    ``decay:geom:a,lam`` or ``scale:s:<spec>``."""
    spec = spec.strip()
    try:
        if spec == "zero":
            return Zero()
        kind, _, body = spec.partition(":")
        if kind == "const":
            return Constant(float(body))
        if kind == "coord":
            return Coordinate(int(body))
        if kind == "decay":
            family, _, params = body.partition(":")
            if family != "geom":
                raise SpecError(f"unknown decay family {family!r}")
            a, lam = (float(t) for t in params.split(","))
            p = GeometricDecay(a, lam)
            p.spec = spec
            return p
        if kind == "scale":
            factor, _, inner = body.partition(":")
            return Scaled(float(factor), parse_potential(inner))
        if kind == "table":
            head, _, entries = body.partition(":")
            if not head.startswith("p="):
                raise SpecError("table spec must start with p=<radius>")
            table = {}
            for item in entries.replace(",", ";").split(";"):
                if item.strip():
                    w, _, v = item.partition("=")
                    table[parse_word(w)] = float(v)
            return Table(int(head[2:]), table, spec=spec)
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(f"bad potential spec {spec!r}: {exc}") from exc
    raise SpecError(f"unknown potential spec {spec!r}")


# ----------------------------------------------------------------------------
# finite-depth estimators
# ----------------------------------------------------------------------------

def birkhoff(f: Potential, x: FinitePoint, window: Window) -> float:
    return f.birkhoff(x, window)


def _enumerate_window(sh: BetaShift, window: Window, budget: int) -> list[FinitePoint]:
    total = sh.count(len(window))
    if total > budget:
        raise BudgetExceeded(f"{total} configurations on {window} exceed the budget {budget}")
    return [FinitePoint(window.k, w) for w, _ in sh.iter_words(len(window))]


def _spread(groups: Mapping) -> float:
    return max((max(v) - min(v) for v in groups.values()), default=0.0)


def variation(sh: BetaShift, f: Potential, n: int, sample_budget: int = 200_000) -> float:
    """Lower bound on ``var_n(f)``; exact for local potentials.

    Configurations are all admissible words on a window covering ``[0, n-1]``
    and every coordinate read by ``f``; for non-local ``f`` the window is
    grown to the right while the enumeration fits ``sample_budget``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rlo, rhi = f.reach
    if rlo > rhi:
        return 0.0
    lo = min(int(rlo), 0)
    if f.is_local:
        hi = max(int(rhi), n - 1)
    else:
        hi = n - 1
        while sh.count(hi + 2 - lo) <= sample_budget and hi - (n - 1) < 64:
            hi += 1
    window = Window(lo, hi)
    agree = Window(0, n - 1)
    groups = defaultdict(list)
    for x in _enumerate_window(sh, window, sample_budget):
        groups[x.word(agree)].append(f(x))
    return _spread(groups)


def bowen_defect(sh: BetaShift, f: Potential, window: Window, depth: int, budget: int = 500_000) -> float:
    """Largest ``|sum_{k in window} f(T^k x) - f(T^k y)|`` over enumerated pairs with
    ``J_window(x) == J_window(y)`` whose tails vary up to ``depth`` beyond the window."""
    groups = defaultdict(list)
    for x in _enumerate_window(sh, window.extend(depth), budget):
        groups[x.word(window)].append(f.birkhoff(x, window))
    return _spread(groups)


def bowen_bound(f: Potential, b: int, terms: int = 10_000) -> float:
    """Envelope bound ``2 * sum_n V(n)`` on the Bowen constant (inf if not summable)."""
    vals = [f.variation_bound(n, b) for n in range(1, terms + 1)]
    if vals and vals[-1] > 0 and f.is_local:
        return INF
    return 2 * math.fsum(vals)


def delta_estimate(
    sh: BetaShift,
    f: Potential,
    window: Window,
    depth: int,
    collar: int = 2,
    budget: int = 200_000,
) -> float:
    """Finite-depth lower estimate of ``sup sum_{g not in window} |f(T^g x) - f(T^g y)|``.

    Pairs agree off ``window``; their common exterior ranges over admissible
    fillings of ``collar`` sites on each side (zero beyond).  The sum is cut
    to ``|g| <= depth``.  Only finitely supported pairs are examined, so the
    value is a lower estimate of the supremum over the whole shift.
    """
    classes = defaultdict(list)
    for x in _enumerate_window(sh, window.extend(collar), budget):
        outside = tuple(
            x[j] for j in range(window.k - collar, window.l + collar + 1) if j not in window
        )
        classes[outside].append(x)
    gs = [g for g in range(-depth, depth + 1) if g not in window]
    best = 0.0
    for members in classes.values():
        vals = [[f.at(x, g) for g in gs] for x in members]
        for i in range(len(members)):
            for k in range(i + 1, len(members)):
                s = math.fsum(abs(a - c) for a, c in zip(vals[i], vals[k]))
                best = max(best, s)
    return best


def delta_bound(f: Potential, window: Window, b: int) -> float:
    """Envelope upper bound on the same supremum."""
    return f.outside_bound(window.k, window.l, window.k, window.l, b)
