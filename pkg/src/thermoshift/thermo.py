"""Partition functions, pressure, finite-volume and Cesaro measures, prefix decay, margins.

Sums over all admissible words in a volume are done by a transfer pass over
(automaton state, recent letters) rather than by listing words.  Every
built-in potential splits into site terms reading a bounded block of
letters, so the Birkhoff weight of a word factorizes along the pass.
"""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .beta_lang import BetaShift, Word, format_word, parse_word
from .errors import BudgetExceeded, MarginViolated, WindowTooLarge
from .gibbs import logsumexp
from .potential import Potential
from .shift_space import FinitePoint, Window

DEFAULT_BUDGET = 2_000_000

# a DP key: (canonical automaton state, buffer of recent letters, raw state is 0)
Key = tuple


class VolumeDP:
    """Forward/backward transfer pass over the volume ``[A, B]``, zero outside."""

    def __init__(self, sh: BetaShift, f: Potential, volume: Window, restricted: bool = False):
        self.sh, self.f, self.volume = sh, f, volume
        self.restricted = restricted
        A, B = volume.k, volume.l
        st = f.site_terms(A, B)
        self.K = st.left + st.right
        self.right = st.right
        self.term = st.term
        self.last = B + st.right  # last position carrying a DP step
        self.N = self.last - A + 1
        sh.stream.ensure(len(volume) + 2)
        self._canon = sh.stream.canonical_state
        self._forward()
        self._backward()

    def letters(self, key: Key, t: int) -> range | tuple:
        if t > self.volume.l:
            return (0,)
        return range(self.sh.c(key[0] + 1) + 1)

    def step(self, key: Key, t: int, a: int) -> tuple[Key, float] | None:
        m, buf, fresh = key
        d = self.sh.c(m + 1)
        if a > d or (a and t > self.volume.l):
            return None
        block = buf + (a,)
        i = t - self.right
        w = self.term(i, block) if self.volume.k <= i <= self.volume.l else 0.0
        nm = self._canon(m + 1) if a == d else 0
        if t <= self.volume.l:
            fresh = a < d
        return (nm, block[1:], fresh), w

    def advance(self, msg: Mapping[Key, float], t: int, pinned: int | None = None) -> dict[Key, float]:
        out: dict[Key, float] = {}
        for key, val in msg.items():
            for a in (self.letters(key, t) if pinned is None else (pinned,)):
                s = self.step(key, t, a)
                if s is not None:
                    nk, w = s
                    out[nk] = out.get(nk, 0.0) + val * math.exp(w)
        return out

    def _final_ok(self, key: Key) -> bool:
        return key[2] or not self.restricted

    def _forward(self) -> None:
        msg = {(0, (0,) * self.K, True): 1.0}
        self.alpha = [msg]
        self.alpha_log = [0.0]
        acc = 0.0
        for i in range(self.N):
            msg = self.advance(msg, self.volume.k + i)
            s = math.fsum(msg.values())
            msg = {k: v / s for k, v in msg.items()}
            acc += math.log(s)
            self.alpha.append(msg)
            self.alpha_log.append(acc)
        final = math.fsum(v for k, v in msg.items() if self._final_ok(k))
        self.log_z = acc + math.log(final) if final > 0 else -math.inf

    def _backward(self) -> None:
        beta = {k: (1.0 if self._final_ok(k) else 0.0) for k in self.alpha[self.N]}
        self.beta = [None] * (self.N + 1)
        self.beta_log = [0.0] * (self.N + 1)
        self.beta[self.N] = beta
        acc = 0.0
        for i in range(self.N - 1, -1, -1):
            t = self.volume.k + i
            nxt = {}
            for key in self.alpha[i]:
                tot = 0.0
                for a in self.letters(key, t):
                    s = self.step(key, t, a)
                    if s is not None:
                        tot += beta.get(s[0], 0.0) * math.exp(s[1])
                nxt[key] = tot
            s = max(nxt.values())
            if s > 0:
                nxt = {k: v / s for k, v in nxt.items()}
                acc += math.log(s)
            beta = nxt
            self.beta[i] = beta
            self.beta_log[i] = acc

    def log_pinned(self, start: int, word: Sequence[int]) -> float:
        """``log mu([word] at start)`` for the finite-volume measure of this pass."""
        out = -math.inf
        for lw, _ in self._pinned_walk(start, list(word), None):
            out = lw
        return out

    def _pinned_walk(self, start: int, word: Sequence[int] | None, length: int | None, prefixes=None):
        """DFS over target words at ``start``; yields (log mass, word).

        With ``word`` given only that word is followed.
        """
        n = len(word) if word is not None else length
        A = self.volume.k
        lo = max(start, A)
        hi = min(start + n - 1, self.last)
        if lo > hi:
            if word is None or not any(word):
                yield 0.0, (0,) * n
            return
        i0, i1 = lo - A, hi - A + 1
        base = self.alpha_log[i0] + self.beta_log[i1] - self.log_z
        beta = self.beta[i1]
        prefix: list[int] = []

        def rec(idx: int, msg: dict):
            if idx == n:
                val = math.fsum(v * beta.get(k, 0.0) for k, v in msg.items())
                if val > 0:
                    yield base + math.log(val), tuple(prefix)
                return
            t = start + idx
            inside = A <= t <= self.last
            if word is not None:
                choices = (word[idx],)
            elif not inside or t > self.volume.l:
                choices = (0,)
            else:
                choices = range(self.sh.b)
            for a in choices:
                if (not inside or t > self.volume.l) and a:
                    continue
                prefix.append(a)
                if prefixes is None or tuple(prefix) in prefixes:
                    nmsg = self.advance(msg, t, a) if inside else msg
                    if nmsg:
                        yield from rec(idx + 1, nmsg)
                prefix.pop()

        yield from rec(0, self.alpha[i0])


def partition_function(sh: BetaShift, f: Potential, window: Window) -> float:
    """``log Xi_window(f)`` by the transfer pass."""
    return VolumeDP(sh, f, window).log_z


def restricted_partition(sh: BetaShift, f: Potential, window: Window) -> float:
    """``log`` of the same sum over words whose automaton state is 0."""
    return VolumeDP(sh, f, window, restricted=True).log_z


def partition_by_enumeration(
    sh: BetaShift, f: Potential, window: Window, restricted: bool = False, budget: int = DEFAULT_BUDGET
) -> float:
    """Direct log-sum-exp over listed words; independent of :class:`VolumeDP`."""
    words = sh.enumerate(len(window), budget)
    logs = [
        f.birkhoff(FinitePoint(window.k, w), window)
        for w in words
        if not restricted or sh.run(w) == 0
    ]
    return logsumexp(logs) if logs else -math.inf


@dataclass
class PressureReport:
    n: list[int]
    values: list[float]
    gaps: list[float]

    def to_json(self) -> dict:
        return {"n": self.n, "pressure": self.values, "cauchy_gap": self.gaps}

    def to_csv(self) -> str:
        rows = ["n,pressure,cauchy_gap"]
        for n, v, g in zip(self.n, self.values, self.gaps):
            rows.append(f"{n},{v!r},{g!r}")
        return "\n".join(rows) + "\n"


def pressure_at(sh: BetaShift, f: Potential, n: int) -> float:
    return partition_function(sh, f, Window(-n, n)) / (2 * n + 1)


def pressure_estimate(sh: BetaShift, f: Potential, n_max: int) -> PressureReport:
    """``P_{[-n,n]}(f)`` for ``n = 1..n_max`` with consecutive gaps."""
    ns = list(range(1, n_max + 1))
    vals = [pressure_at(sh, f, n) for n in ns]
    gaps = [math.nan] + [abs(b - a) for a, b in zip(vals, vals[1:])]
    return PressureReport(ns, vals, gaps)


@dataclass
class CylinderMeasure:
    window: Window
    weights: dict[Word, float]
    beta: str = ""
    f: str = ""
    meta: dict = field(default_factory=dict)

    def __getitem__(self, w: Sequence[int]) -> float:
        return self.weights.get(tuple(w), 0.0)

    def get(self, w, default=0.0) -> float:
        return self.weights.get(tuple(w), default)

    def total(self) -> float:
        return math.fsum(self.weights.values())

    def marginal(self, sub: Window) -> "CylinderMeasure":
        if not self.window.contains_window(sub):
            raise WindowTooLarge(f"{sub} is not inside {self.window}")
        lo = sub.k - self.window.k
        out: dict[Word, float] = {}
        for w, p in self.weights.items():
            key = w[lo: lo + len(sub)]
            out[key] = out.get(key, 0.0) + p
        return CylinderMeasure(sub, dict(sorted(out.items())), self.beta, self.f)

    def to_json(self, b: int = 10) -> dict:
        return {
            "window": [self.window.k, self.window.l],
            "beta": self.beta,
            "f": self.f,
            "weights": {format_word(w, b): p for w, p in sorted(self.weights.items())},
            **({"meta": self.meta} if self.meta else {}),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CylinderMeasure":
        k, l = obj["window"]
        weights = {parse_word(w): float(p) for w, p in obj["weights"].items()}
        return cls(Window(k, l), weights, obj.get("beta", ""), obj.get("f", ""))

    def dumps(self, b: int = 10) -> str:
        return json.dumps(self.to_json(b), sort_keys=True, indent=1)


def finite_volume_measure(
    sh: BetaShift, f: Potential, window: Window, budget: int = DEFAULT_BUDGET
) -> CylinderMeasure:
    """``mu_window``: mass ``exp(birkhoff(f, w_bar, window)) / Xi`` on each listed word."""
    words = sh.enumerate(len(window), budget)
    logs = [f.birkhoff(FinitePoint(window.k, w), window) for w in words]
    z = logsumexp(logs)
    return CylinderMeasure(
        window, {w: math.exp(v - z) for w, v in zip(words, logs)}, sh.beta.spec, f.spec
    )


def _prefix_set(words: Iterable[Word]) -> set:
    out = set()
    for w in words:
        for i in range(1, len(w) + 1):
            out.add(w[:i])
    return out


def cesaro_equilibrium(
    sh: BetaShift,
    f: Potential,
    n: int,
    target: Window,
    words: Iterable[Word] | None = None,
    budget: int = DEFAULT_BUDGET,
    shifts: str = "all",
) -> CylinderMeasure:
    """``nu_n = (1/(2n+1)) sum_{j=-n}^{n} mu_{[-n,n]} o T^{-j}`` on cylinders of ``target``.

    Shifted copies of ``target`` that stick out of the volume see the zero
    padding, so the result is a probability on target words for every ``n``.
    With ``shifts="interior"`` only shifts keeping ``target`` inside the
    volume are averaged.  ``words`` restricts the output to the listed cylinders.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    volume = Window(-n, n)
    if shifts == "all":
        js = list(range(-n, n + 1))
        if len(target) > 4 * len(volume) + 64:
            raise WindowTooLarge(f"target {target} is far larger than the volume {volume}")
    elif shifts == "interior":
        js = [j for j in range(-n, n + 1) if volume.contains_window(target.shifted(j))]
        if not js:
            raise WindowTooLarge(f"no shift of {target} fits inside {volume}")
    else:
        raise ValueError(f"unknown shifts mode {shifts!r}")
    prefixes = None
    if words is not None:
        prefixes = _prefix_set(tuple(w) for w in words)
    elif sh.count(len(target)) > budget:
        raise BudgetExceeded(f"{sh.count(len(target))} target words exceed the budget {budget}")
    dp = VolumeDP(sh, f, volume)
    acc: dict[Word, list[float]] = {}
    for j in js:
        start = target.k + j
        for lw, w in dp._pinned_walk(start, None, len(target), prefixes):
            acc.setdefault(w, []).append(math.exp(lw))
    scale = 1.0 / len(js)
    weights = {w: math.fsum(v) * scale for w, v in sorted(acc.items())}
    return CylinderMeasure(target, weights, sh.beta.spec, f.spec, {"n": n, "shifts": shifts})


def cylinder_probability(sh: BetaShift, f: Potential, volume: Window, start: int, word: Sequence[int]) -> float:
    """``mu_volume([word] at start)``."""
    return math.exp(VolumeDP(sh, f, volume).log_pinned(start, word))


@dataclass
class MarginReport:
    n: int
    margin: float
    pressure: float
    orbit_average: float
    depths: dict[int, float]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "margin": self.margin,
            "pressure": self.pressure,
            "orbit_average": self.orbit_average,
            "margin_by_depth": {str(k): v for k, v in self.depths.items()},
        }


ORBIT_PADDING = 64


def orbit_average(sh: BetaShift, f: Potential, n: int) -> float:
    """``(1/n) sum_{k<n} f(T^k c_bar)`` with ``c(1)`` at coordinate 0 and zeros to the left.

    The digit point is cut ``ORBIT_PADDING`` digits past ``n``; for the
    geometric family the cut changes each term by at most ``lam**64`` times
    its sup norm.
    """
    c = sh.digits(n + ORBIT_PADDING)
    x = FinitePoint(0, c)
    return math.fsum(f.at(x, k) for k in range(n)) / n


def margin_check(sh: BetaShift, f: Potential, n: int) -> MarginReport:
    """``P_{[-n,n]}(f)`` minus the orbit average along the digits of 1, at depths n, 2n, 4n."""
    depths = {}
    for d in (n, 2 * n, 4 * n):
        depths[d] = pressure_at(sh, f, d) - orbit_average(sh, f, d)
    p = pressure_at(sh, f, n)
    avg = orbit_average(sh, f, n)
    return MarginReport(n, p - avg, p, avg, depths)


@dataclass
class DecayReport:
    kappa: float
    intercept: float
    j: list[int]
    neg_log_mass: list[float]
    residuals: list[float]
    margin: float

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "intercept": self.intercept,
            "j": self.j,
            "neg_log_mass": self.neg_log_mass,
            "residuals": self.residuals,
            "margin": self.margin,
        }

    def to_csv(self) -> str:
        rows = ["j,neg_log_mass"]
        rows += [f"{j},{v!r}" for j, v in zip(self.j, self.neg_log_mass)]
        return "\n".join(rows) + "\n"


def prefix_decay(sh: BetaShift, f: Potential, n_max: int) -> DecayReport:
    """Slope of ``-log mu_{[1,j]}([c_j])`` in ``j``, fitted over ``j >= n_max / 2``."""
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    margin = margin_check(sh, f, n_max).margin
    if margin <= 0:
        raise MarginViolated(f"pressure margin {margin:.6g} is not positive at depth {n_max}")
    js = list(range(1, n_max + 1))
    vals = []
    for j in js:
        L = Window(1, j)
        cj = sh.digits(j)
        vals.append(partition_function(sh, f, L) - f.birkhoff(FinitePoint(1, cj), L))
    fit_j = [j for j in js if j >= n_max / 2]
    fit_v = vals[len(js) - len(fit_j):]
    slope, intercept = statistics.linear_regression(fit_j, fit_v)
    residuals = [v - (slope * j + intercept) for j, v in zip(fit_j, fit_v)]
    return DecayReport(slope, intercept, js, vals, residuals, margin)
