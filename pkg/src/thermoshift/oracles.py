"""Reference computations that share no code path with the automaton or the DP engine.

* language membership by comparing every suffix with the digits of 1;
* the Perron eigenvector measure of a subshift of finite type given by
  forbidden words, for a window-local potential (numpy eigen-solver).
"""
from __future__ import annotations

import math
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .beta_lang import Word
from .potential import Potential
from .shift_space import FinitePoint, Window


def admissible_by_suffixes(w: Sequence[int], c: Sequence[int]) -> bool:
    """Every suffix of ``w`` is lexicographically at most the same-length prefix of ``c``."""
    n = len(w)
    if len(c) < n:
        raise ValueError("need at least len(w) digits")
    for k in range(n):
        for a, d in zip(w[k:], c):
            if a < d:
                break
            if a > d:
                return False
    return True


def longest_prefix_suffix(w: Sequence[int], c: Sequence[int]) -> int:
    """Length of the longest suffix of ``w`` that is a prefix of ``c``."""
    w = tuple(w)
    for m in range(len(w), 0, -1):
        if w[len(w) - m:] == tuple(c[:m]):
            return m
    return 0


def language_by_suffixes(b: int, n: int, c: Sequence[int]) -> list[Word]:
    return [w for w in product(range(b), repeat=n) if admissible_by_suffixes(w, c)]


class MarkovOracle:
    """Equilibrium measure of a window-local potential on the subshift with the given
    forbidden words, from the Perron eigenvectors of the weighted block matrix."""

    def __init__(self, b: int, forbidden: Iterable[Sequence[int]], f: Potential):
        if not f.is_local:
            raise ValueError("the Markov oracle needs a window-local potential")
        self.b = b
        self.forbidden = [tuple(w) for w in forbidden]
        self.f = f
        rlo, rhi = f.reach
        if rlo > rhi:
            rlo, rhi = 0, 0
        self.rlo, self.rhi = int(rlo), int(rhi)
        longest = max((len(w) for w in self.forbidden), default=1)
        self.K = max(self.rhi - self.rlo, longest - 1, 1)
        self.states = [s for s in product(range(b), repeat=self.K) if self.allowed(s)]
        self.index = {s: i for i, s in enumerate(self.states)}
        n = len(self.states)
        M = np.zeros((n, n))
        for s in self.states:
            for a in range(b):
                z = s + (a,)
                if self.allowed(z):
                    M[self.index[s], self.index[z[1:]]] = math.exp(self._edge(z))
        self.M = M
        vals, right = np.linalg.eig(M)
        k = int(np.argmax(vals.real))
        self.lam = float(vals[k].real)
        r = np.abs(right[:, k].real)
        vals_t, left = np.linalg.eig(M.T)
        k2 = int(np.argmax(vals_t.real))
        l = np.abs(left[:, k2].real)
        self.r = r / r.sum()
        self.l = l / (l @ self.r)

    def allowed(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        for bad in self.forbidden:
            m = len(bad)
            for i in range(len(w) - m + 1):
                if w[i:i + m] == bad:
                    return False
        return True

    def _edge(self, z: Word) -> float:
        # f read with its window on the last letters of z
        origin = len(z) - 1 - self.rhi
        return self.f.at(FinitePoint(-origin, z), 0)

    @property
    def pressure(self) -> float:
        return math.log(self.lam)

    def mass(self, w: Sequence[int]) -> float:
        """Stationary measure of the cylinder ``[w]``."""
        w = tuple(w)
        if not self.allowed(w):
            return 0.0
        K = self.K
        if len(w) < K:
            return math.fsum(
                self.mass(w + tail) for tail in product(range(self.b), repeat=K - len(w))
            )
        i = self.index[w[:K]]
        acc = self.l[i]
        for t in range(K, len(w)):
            j = self.index[w[t - K + 1: t + 1]]
            acc *= self.M[i, j] / self.lam
            i = j
        return float(acc * self.r[i])

    def words(self, n: int) -> list[Word]:
        out: list[Word] = [()]
        for _ in range(n):
            out = [w + (a,) for w in out for a in range(self.b) if self.allowed(w[-self.K:] + (a,))]
        return sorted(out)

    def measure(self, window: Window) -> dict[Word, float]:
        return {w: self.mass(w) for w in self.words(len(window))}


def digits_exact(coefficients: Sequence[int] | None, lo, hi, n: int, rational=None) -> list[int]:
    """Digits of 1 in base beta computed in sympy's algebraic field (or with Fractions).

    ``coefficients`` are low-to-high integer coefficients of a polynomial whose
    only root in ``[lo, hi]`` is beta.  Only used as a test oracle.
    """
    from fractions import Fraction

    if rational is not None:
        beta = Fraction(rational)
        r, out = Fraction(1), []
        for _ in range(n):
            t = beta * r
            c = math.ceil(t) - 1
            out.append(c)
            r = t - c
        return out

    import sympy as sp

    x = sp.Symbol("x")
    poly = sp.Poly(list(reversed(list(coefficients))), x)
    roots = [z for z in poly.real_roots() if sp.Rational(lo) <= z <= sp.Rational(hi)]
    if len(set(roots)) != 1:
        raise ValueError("interval does not isolate one root")
    field = sp.QQ.algebraic_field(roots[0])
    beta = field.from_sympy(roots[0])
    r, out = field.one, []
    for _ in range(n):
        t = beta * r
        for prec in (60, 200, 1000):
            v = sp.N(field.to_sympy(t), prec)
            k = int(sp.floor(v))
            if min(v - k, k + 1 - v) > sp.Float(10, prec) ** (20 - prec):
                break
        # floor is k unless t sits exactly on an integer, which the field decides
        c = k - 1 if t == field.convert(k) else k
        out.append(c)
        r = t - field.convert(c)
    return out
