"""Certified arithmetic for the base beta.

A :class:`BetaNumber` is either an exact rational or a real algebraic number
given by an integer polynomial and an isolating rational interval.  Elements
of ``Q[beta]`` are stored in the power basis ``1, beta, ..., beta^(d-1)``
(:class:`ExactRemainder`), so the greedy digit recursion never needs a
floating point decision: every sign query is answered either exactly (zero
test by a polynomial gcd) or by refining the enclosure of beta until the
interval image excludes zero.
"""
from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    DegreeTooLarge,
    IntegerBeta,
    InvalidIsolation,
    NonPositiveRemainder,
    SpecError,
)

MAX_DEGREE = 16

Rational = Union[int, Fraction]
Poly = list  # ascending Fraction coefficients, no trailing zeros


# ----------------------------------------------------------------------------
# dense univariate polynomials over Q
# ----------------------------------------------------------------------------

def _trim(p: Iterable[Rational]) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x: Rational) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Poly, Poly]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = list(a)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        coef = rem[shift + len(b) - 1] / lead
        quot[shift] = coef
        if coef:
            for i, c in enumerate(b):
                rem[shift + i] -= coef * c
    return _trim(quot), _trim(rem[: len(b) - 1])


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    """Monic gcd; the gcd of two zero polynomials is the zero polynomial."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]


def poly_deriv(p: Sequence[Fraction]) -> Poly:
    return _trim([i * c for i, c in enumerate(p)][1:])


def squarefree_part(p: Sequence[Fraction]) -> Poly:
    p = _trim(p)
    g = poly_gcd(p, poly_deriv(p))
    q = poly_divmod(p, g)[0] if len(g) > 1 else p
    return [c / q[-1] for c in q]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coefficients: Sequence[int]) -> list[Fraction]:
    """Rational roots of an integer polynomial (rational root theorem)."""
    coeffs = list(coefficients)
    roots = set()
    while coeffs and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) < 2:
        return sorted(roots)
    for p in _divisors(coeffs[0]):
        for q in _divisors(coeffs[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if poly_eval(coeffs, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def sturm_chain(p: Sequence[Fraction]) -> list[Poly]:
    chain = [_trim(p), poly_deriv(p)]
    while chain[-1]:
        rem = poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [q for q in chain if q]


def _sign_variations(chain: list[Poly], x: Rational) -> int:
    signs = [s for s in (_sign(poly_eval(q, x)) for q in chain) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(p: Sequence[Fraction], lo: Rational, hi: Rational) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    chain = sturm_chain(p)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


# ----------------------------------------------------------------------------
# beta
# ----------------------------------------------------------------------------

class BetaNumber:
    """A certified real number beta > 1 with beta not an integer.

    Use :meth:`rational`, :meth:`decimal`, :meth:`algebraic` or :meth:`parse`
    rather than the constructor.
    """

    def __init__(self, modulus: Sequence[Fraction], lo: Fraction, hi: Fraction, spec: str):
        self.modulus: tuple[Fraction, ...] = tuple(modulus)  # monic, squarefree
        self.degree = len(self.modulus) - 1
        self.spec = spec
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        self._lock = threading.Lock()
        # beta^d = -(m_0 + m_1 beta + ... + m_{d-1} beta^{d-1})
        self._reduction = tuple(-c for c in self.modulus[:-1])

    # -- construction --------------------------------------------------------

    @classmethod
    def rational(cls, value: Union[str, Rational], spec: str | None = None) -> "BetaNumber":
        try:
            q = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"not a rational number: {value!r}") from exc
        if q <= 1:
            raise SpecError(f"beta must exceed 1, got {q}")
        if q.denominator == 1:
            raise IntegerBeta(f"beta = {q} is an integer")
        return cls([-q, Fraction(1)], q, q, spec or f"rational:{q.numerator}/{q.denominator}")

    @classmethod
    def decimal(cls, text: str) -> "BetaNumber":
        """Exact rational value of a decimal literal such as ``"1.6180339887"``."""
        if not re.fullmatch(r"\s*\d+(\.\d*)?\s*", text):
            raise SpecError(f"not a decimal literal: {text!r}")
        return cls.rational(Fraction(text.strip()), spec=f"decimal:{text.strip()}")

    @classmethod
    def algebraic(
        cls,
        coefficients: Sequence[int],
        lo: Rational,
        hi: Rational,
    ) -> "BetaNumber":
        """The unique root of ``sum c_i x^i`` in ``[lo, hi]``; it must exceed 1."""
        coeffs = [int(c) for c in coefficients]
        spec = "poly:{}@[{},{}]".format(",".join(map(str, coeffs)), lo, hi)
        p = _trim(coeffs)
        lo, hi = Fraction(lo), Fraction(hi)
        if len(p) < 2:
            raise SpecError("polynomial must have degree at least 1")
        if len(p) - 1 > MAX_DEGREE:
            raise DegreeTooLarge(f"degree {len(p) - 1} exceeds the cap of {MAX_DEGREE}")
        if not lo < hi:
            raise SpecError(f"empty isolating interval [{lo}, {hi}]")
        m = squarefree_part(p)
        roots_in = count_roots(m, lo, hi) + (poly_eval(m, lo) == 0)
        if roots_in != 1:
            raise InvalidIsolation(f"[{lo}, {hi}] contains {roots_in} roots of {coeffs}")
        if hi <= 1 or count_roots(m, max(lo, Fraction(1)), hi) != 1:
            raise InvalidIsolation(f"the root in [{lo}, {hi}] is not greater than 1")
        lo = max(lo, Fraction(1))
        for q in rational_roots(coeffs):
            if lo <= q <= hi:
                return cls._from_rational_root(q, spec)
        # beta is irrational from here on, so bisection never hits a root
        s_lo = _sign(poly_eval(m, lo))
        while lo <= 1:
            mid = (lo + hi) / 2
            if _sign(poly_eval(m, mid)) == s_lo:
                lo = mid
            else:
                hi = mid
        return cls(m, lo, hi, spec)

    @classmethod
    def _from_rational_root(cls, q: Fraction, spec: str) -> "BetaNumber":
        if q.denominator == 1:
            raise IntegerBeta(f"beta = {q} is an integer")
        return cls.rational(q, spec=spec)

    @classmethod
    def parse(cls, spec: str) -> "BetaNumber":
        """Parse ``rational:p/q``, ``decimal:<digits>`` or ``poly:c0,...,cd@[lo,hi]``."""
        spec = spec.strip()
        kind, _, body = spec.partition(":")
        if kind == "rational":
            return cls.rational(body, spec=spec)
        if kind == "decimal":
            return cls.decimal(body)
        if kind == "poly":
            m = re.fullmatch(r"\s*([-+\d,\s]+)@\[\s*([^,\]]+)\s*,\s*([^\]]+)\]\s*", body)
            if not m:
                raise SpecError(f"bad polynomial beta spec: {spec!r}")
            try:
                coeffs = [int(c) for c in m.group(1).split(",") if c.strip()]
                lo, hi = Fraction(m.group(2).strip()), Fraction(m.group(3).strip())
            except ValueError as exc:
                raise SpecError(f"bad polynomial beta spec: {spec!r}") from exc
            beta = cls.algebraic(coeffs, lo, hi)
            beta.spec = spec
            return beta
        raise SpecError(f"unknown beta spec kind {kind!r} (expected rational, decimal or poly)")

    # -- enclosure -----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def interval(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self._lo, self._hi

    def refine(self, width: Rational) -> tuple[Fraction, Fraction]:
        """Return a cached enclosure of width at most ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        with self._lock:
            lo, hi = self._lo, self._hi
            if hi - lo > width:
                s_lo = _sign(poly_eval(self.modulus, lo))
                while hi - lo > width:
                    mid = (lo + hi) / 2
                    # mid is never a root: rational roots were detected at construction
                    if _sign(poly_eval(self.modulus, mid)) == s_lo:
                        lo = mid
                    else:
                        hi = mid
                self._lo, self._hi = lo, hi
            return lo, hi

    def _halve(self) -> None:
        lo, hi = self.interval()
        self.refine((hi - lo) / 2)

    def __float__(self) -> float:
        lo, hi = self.refine(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    @property
    def b(self) -> int:
        """Alphabet size, the ceiling of beta."""
        return certified_ceil(self, self.one())

    def log(self) -> tuple[float, float]:
        """Outward-rounded enclosure of log(beta)."""
        lo, hi = self.refine(Fraction(1, 2**60))
        return math.nextafter(math.log(lo), -math.inf), math.nextafter(math.log(hi), math.inf)

    # -- field elements ------------------------------------------------------

    def element(self, coords: Sequence[Rational]) -> "ExactRemainder":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            raise ValueError("too many coordinates for the power basis")
        coords += [Fraction(0)] * (self.degree - len(coords))
        return ExactRemainder(self, tuple(coords))

    def one(self) -> "ExactRemainder":
        return self.element([1])

    def gen(self) -> "ExactRemainder":
        """beta itself as a field element."""
        if self.degree == 1:
            return self.element([self._lo])
        return self.element([0, 1])

    def __repr__(self) -> str:
        return f"BetaNumber({self.spec!r})"


class ExactRemainder:
    """An element of Q[beta] in the power basis."""

    __slots__ = ("beta", "coords")

    def __init__(self, beta: BetaNumber, coords: tuple[Fraction, ...]):
        self.beta = beta
        self.coords = coords

    def _coerce(self, other) -> "ExactRemainder":
        if isinstance(other, ExactRemainder):
            if other.beta is not self.beta:
                raise ValueError("elements belong to different betas")
            return other
        if isinstance(other, (int, Fraction)):
            return self.beta.element([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactRemainder(self.beta, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return ExactRemainder(self.beta, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def times_beta(self) -> "ExactRemainder":
        beta = self.beta
        if beta.degree == 1:
            return ExactRemainder(beta, (self.coords[0] * beta._lo,))
        top = self.coords[-1]
        shifted = (Fraction(0),) + self.coords[:-1]
        return ExactRemainder(
            beta, tuple(s + top * r for s, r in zip(shifted, beta._reduction))
        )

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = self.beta.element([])
        power = self
        for c in other.coords:
            if c:
                acc = acc + ExactRemainder(self.beta, tuple(c * a for a in power.coords))
            power = power.times_beta()
        return acc

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        return hash(self.coords)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """Interval image of the element under the current enclosure of beta."""
        if self.is_rational:
            return self.coords[0], self.coords[0]
        blo, bhi = self.beta.interval()
        lo = hi = Fraction(0)
        plo = phi = Fraction(1)
        for c in self.coords:
            if c > 0:
                lo += c * plo
                hi += c * phi
            elif c < 0:
                lo += c * phi
                hi += c * plo
            plo *= blo
            phi *= bhi
        return lo, hi

    def is_zero(self) -> bool:
        if self.is_rational:
            return self.coords[0] == 0
        g = poly_gcd(list(self.coords), list(self.beta.modulus))
        if len(g) < 2:
            return False
        # g divides the squarefree modulus, so it vanishes at beta iff it changes sign
        lo, hi = self.beta.interval()
        return _sign(poly_eval(g, lo)) * _sign(poly_eval(g, hi)) < 0

    def sign(self) -> int:
        if self.is_rational:
            return _sign(self.coords[0])
        if self.is_zero():
            return 0
        while True:
            lo, hi = self.enclosure()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.beta._halve()

    def __float__(self) -> float:
        lo, hi = self.enclosure()
        while hi - lo > Fraction(1, 2**60) * max(1, abs(lo)):
            self.beta._halve()
            lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*b^{i}" for i, c in enumerate(self.coords) if c) or "0"
        return f"ExactRemainder({terms})"


def refine(beta: BetaNumber, width: Rational) -> tuple[Fraction, Fraction]:
    return beta.refine(width)


def certified_ceil(beta: BetaNumber, r: ExactRemainder) -> int:
    """Exact ceiling of ``beta * r`` for a certified positive ``r``."""
    if r.sign() <= 0:
        raise NonPositiveRemainder(f"remainder {r!r} is not positive")
    t = r.times_beta()
    return ceil_of(t)


def ceil_of(t: ExactRemainder) -> int:
    """Exact ceiling, the least integer k with k >= t."""
    if t.is_rational:
        return math.ceil(t.coords[0])
    lo, _ = t.enclosure()
    k = math.ceil(lo)
    while True:
        if (t - k).sign() > 0:
            k += 1
        elif (t - (k - 1)).sign() <= 0:
            k -= 1
        else:
            return k
