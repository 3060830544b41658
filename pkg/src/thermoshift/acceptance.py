"""The acceptance criteria as callable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult`; the test
module and ``thermoshift verify`` both run them.  Thresholds live here and
nowhere else.
"""
from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .beta_lang import BetaShift
from .conformal import (
    Involution,
    apply_involution,
    cocycle,
    conformality_residual,
    grow_tree,
)
from .gibbs import consistency_check, kernel_row, weak_dependence_probe
from .oracles import MarkovOracle, admissible_by_suffixes, digits_exact, longest_prefix_suffix
from .potential import parse_potential
from .shift_space import FinitePoint, Window, conjugacy_set, points_on, random_point
from .thermo import cesaro_equilibrium, margin_check, prefix_decay, pressure_estimate

GOLDEN = "poly:-1,-1,1@[1,2]"
FIVE_HALVES = "rational:5/2"
TEST_BETAS = (GOLDEN, FIVE_HALVES)
SEED = 20240611

KERNEL_POTENTIALS = ("zero", "coord:0", "decay:geom:1,0.5")
MARKOV_TABLE = "table:p=1:000=-0.3;001=0.4;010=0.7;100=0.25;101=-0.6"


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s) {json.dumps(self.details, sort_keys=True, default=str)}"


def _timed(number: int, title: str, body: Callable[[], tuple[bool, dict]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, details = body()
    return CriterionResult(number, title, bool(ok), details, time.perf_counter() - t0)


_SHIFTS: dict[str, BetaShift] = {}


def shift_for(spec: str) -> BetaShift:
    if spec not in _SHIFTS:
        _SHIFTS[spec] = BetaShift(spec)
    return _SHIFTS[spec]


def _oracle_digits(spec: str, n: int) -> list[int]:
    sh = shift_for(spec)
    beta = sh.beta
    if beta.is_rational:
        return digits_exact(None, 0, 0, n, rational=beta.spec.partition(":")[2])
    coeffs = [int(c) for c in beta.spec.partition(":")[2].split("@")[0].split(",")]
    lo, hi = beta.spec.split("@")[1].strip("[] ").split(",")
    return digits_exact(coeffs, lo.strip(), hi.strip(), n)


# -- 1 ------------------------------------------------------------------------

def criterion_1() -> CriterionResult:
    def body():
        t0 = time.perf_counter()
        g = BetaShift(GOLDEN).digits(20)
        h = BetaShift(FIVE_HALVES).digits(6)
        elapsed = time.perf_counter() - t0
        og = _oracle_digits(GOLDEN, 20)
        oh = _oracle_digits(FIVE_HALVES, 6)
        ok = (
            list(g) == [1, 0] * 10
            and list(h) == [2, 1, 0, 1, 1, 1]
            and list(g) == og
            and list(h) == oh
            and elapsed < 1.0
        )
        return ok, {"golden": "".join(map(str, g)), "five_halves": "".join(map(str, h)), "seconds": round(elapsed, 4)}

    return _timed(1, "digit expansion matches the exact oracle", body)


# -- 2 ------------------------------------------------------------------------

def language_mismatches(spec: str, n_max: int) -> tuple[int, int]:
    sh = shift_for(spec)
    c = sh.digits(n_max + 1)
    checked = bad = 0
    for n in range(n_max + 1):
        for w in product(range(sh.b), repeat=n):
            checked += 1
            if (sh.run(w) is not None) != admissible_by_suffixes(w, c):
                bad += 1
    return checked, bad


def criterion_2(n_max: int = 12) -> CriterionResult:
    def body():
        t0 = time.perf_counter()
        details = {}
        ok = True
        for spec in TEST_BETAS:
            checked, bad = language_mismatches(spec, n_max)
            details[spec] = {"words": checked, "mismatches": bad}
            ok &= bad == 0
        elapsed = time.perf_counter() - t0
        details["seconds"] = round(elapsed, 2)
        return ok and elapsed < 60, details

    return _timed(2, f"automaton equals suffix oracle on all words of length <= {n_max}", body)


# -- 3 ------------------------------------------------------------------------

def word_properties(spec: str, n_max: int = 12, hat_base: int = 8) -> dict:
    sh = shift_for(spec)
    c = sh.digits(2 * n_max + 2)
    prefixes = [tuple(c[:k]) for k in range(n_max + 1)]
    failures = {"i": 0, "ii": 0, "iii": 0, "iv": 0, "v": 0, "vi": 0}
    # i
    for a in prefixes:
        for b in prefixes:
            if len(a) + len(b) <= n_max and sh.concatenable(a, b) and not sh.is_prefix(a + b):
                failures["i"] += 1
    # ii, iii
    for n in range(n_max + 1):
        for w in sh.enumerate(n):
            m = sh.state_of(w)
            v, s = sh.suffix_decompose(w)
            if (m != 0) != (len(s) != 0) or m != longest_prefix_suffix(w, c):
                failures["iii"] += 1
            h = sh.hat(w)
            if sh.run(v) != 0 or sh.state_of(h) != 0 or sh.hat(h) != h:
                failures["ii"] += 1
    # iv
    q = sh.hat_multiplicity(hat_base)
    mult = {n: sh.hat_multiplicity(n) for n in range(1, n_max + 1)}
    failures["iv"] = sum(1 for v in mult.values() if v > q)
    # v
    for u in prefixes:
        for n in range(n_max - len(u) + 1):
            for w, _ in sh.iter_words(n):
                if sh.run(u + w) is not None and sh.z_value(u + w) < sh.z_value(w):
                    failures["v"] += 1
    # vi
    for u in prefixes:
        if not sh.is_admissible(sh.extend_by_zero(u)):
            failures["vi"] += 1
    return {"failures": failures, "q": q, "multiplicity": mult}


def criterion_3(n_max: int = 12) -> CriterionResult:
    def body():
        details = {}
        ok = True
        for spec in TEST_BETAS:
            res = word_properties(spec, n_max)
            details[spec] = {"failures": res["failures"], "q": res["q"]}
            ok &= not any(res["failures"].values())
        return ok, details

    return _timed(3, f"word-combinatorics properties hold exhaustively up to length {n_max}", body)


# -- 4 ------------------------------------------------------------------------

def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def criterion_4(n: int = 12, tol: float = 0.02) -> CriterionResult:
    def body():
        zero = parse_potential("zero")
        details = {}
        ok = True
        for spec in TEST_BETAS:
            sh = shift_for(spec)
            p = pressure_estimate(sh, zero, n).values[-1]
            lo, hi = sh.beta.log()
            dist = max(0.0, lo - p, p - hi)
            details[spec] = {"pressure": p, "log_beta": [lo, hi], "distance": dist}
            ok &= dist <= tol
        g = shift_for(GOLDEN)
        fib_ok = all(g.count(k) == _fib(k + 2) for k in range(15))
        details["fibonacci_counts_to_14"] = fib_ok
        return ok and fib_ok, details

    return _timed(4, f"pressure of zero at n={n} within {tol} of log beta; Fibonacci counts", body)


# -- 5 ------------------------------------------------------------------------

KERNEL_PAIRS = (
    (Window(0, 0), Window(0, 1)),
    (Window(0, 1), Window(-1, 2)),
    (Window(-1, 1), Window(-2, 3)),
    (Window(1, 2), Window(0, 3)),
    (Window(0, 0), Window(0, 0)),
)
KERNEL_REGION = Window(-2, 3)


def _phi(y: FinitePoint) -> float:
    return y[0] + 0.5 * y[1] * y[-1] - 0.25 * y[2] + 0.125 * y[-2]


def kernel_laws(spec: str, f_spec: str) -> dict:
    sh = shift_for(spec)
    f = parse_potential(f_spec)
    points = points_on(sh, KERNEL_REGION)
    norm = invariance = 0.0
    for L in {p for pair in KERNEL_PAIRS for p in pair}:
        seen = set()
        for x in points:
            key = x.replace(L, (0,) * len(L))
            if key in seen:
                continue
            seen.add(key)
            row = kernel_row(sh, f, x, L)
            norm = max(norm, abs(math.fsum(row.weights) - 1.0))
            for y in row.support:
                other = kernel_row(sh, f, y, L)
                if other.support != row.support:
                    invariance = math.inf
                else:
                    invariance = max(
                        invariance, max(abs(a - b) for a, b in zip(row.weights, other.weights))
                    )
    consistency = max(
        consistency_check(sh, f, _phi, L, L2, points) for L, L2 in KERNEL_PAIRS
    )
    return {"normalization": norm, "invariance": invariance, "consistency": consistency}


def criterion_5() -> CriterionResult:
    def body():
        t0 = time.perf_counter()
        details = {}
        ok = True
        for spec in TEST_BETAS:
            for f_spec in KERNEL_POTENTIALS:
                r = kernel_laws(spec, f_spec)
                details[f"{spec} {f_spec}"] = r
                ok &= r["normalization"] <= 1e-12 and r["invariance"] <= 1e-12 and r["consistency"] <= 1e-9
        elapsed = time.perf_counter() - t0
        details["seconds"] = round(elapsed, 2)
        return ok and elapsed < 120, details

    return _timed(5, "kernel normalization, class invariance and consistency", body)


# -- 6 ------------------------------------------------------------------------

def random_involution(sh: BetaShift, rng: random.Random, max_len: int = 3, spread: int = 3) -> Involution:
    n = rng.randint(1, max_len)
    k = rng.randint(-spread, spread)
    words = sh.enumerate(n)
    u, v = rng.sample(words, 2)
    return Involution(Window(k, k + n - 1), u, v)


def involution_laws(spec: str, samples: int = 10_000, seed: int = SEED) -> dict:
    sh = shift_for(spec)
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        inv = random_involution(sh, rng, max_len=2, spread=2)
        k = rng.randint(-4, 0)
        x = random_point(sh, Window(k, k + rng.randint(0, 8)), rng)
        if apply_involution(sh, inv, apply_involution(sh, inv, x)) != x:
            bad += 1
    return {"points": samples, "failures": bad}


def cocycle_laws(spec: str, f_spec: str, triples: int = 200, seed: int = SEED) -> dict:
    sh = shift_for(spec)
    f = parse_potential(f_spec)
    rng = random.Random(seed)
    worst_add = worst_ratio = 0.0
    add_ok = True
    for _ in range(triples):
        k = rng.randint(-3, 2)
        L = Window(k, k + rng.randint(0, 2))
        x = random_point(sh, L.extend(3), rng)
        cls = conjugacy_set(sh, x, L)
        y = rng.choice(cls)
        z = rng.choice(cls)
        a, b, c = cocycle(sh, f, x, y), cocycle(sh, f, y, z), cocycle(sh, f, x, z)
        err = abs(a.value + b.value - c.value)
        worst_add = max(worst_add, err)
        add_ok &= err <= 2 * max(a.slack, b.slack, c.slack) + 1e-12
        row = kernel_row(sh, f, x, L)
        wy, wz = row.weight(y), row.weight(z)
        psi = cocycle(sh, f, y, z, tail_depth=row.tail_depth).value
        worst_ratio = max(worst_ratio, abs(math.log(wz / wy) - psi))
    return {"additivity": worst_add, "additivity_within_slack": add_ok, "kernel_log_ratio": worst_ratio}


def criterion_6() -> CriterionResult:
    def body():
        details = {}
        ok = True
        for spec in TEST_BETAS:
            inv = involution_laws(spec)
            details[spec] = {"involution": inv}
            ok &= inv["failures"] == 0
            for f_spec in KERNEL_POTENTIALS:
                r = cocycle_laws(spec, f_spec)
                details[spec][f_spec] = r
                ok &= r["additivity_within_slack"] and r["kernel_log_ratio"] <= 1e-9
        return ok, details

    return _timed(6, "involution, cocycle additivity and kernel/cocycle agreement", body)


# -- 7 ------------------------------------------------------------------------

def criterion_7(n: int = 8, count: int = 20, seed: int = SEED) -> CriterionResult:
    def body():
        sh = shift_for(GOLDEN)
        f = parse_potential(MARKOV_TABLE)
        oracle = MarkovOracle(sh.b, [(1, 1)], f)
        rng = random.Random(seed)
        worst = 0.0
        ok = True
        runs = []
        for _ in range(count):
            inv = random_involution(sh, rng)
            tree = grow_tree(sh, inv.u, inv.v, inv.window, n)
            mu = oracle.measure(inv.window.extend(n))
            res = conformality_residual(sh, f, mu, inv, n, tree=tree)
            worst = max(worst, res.residual)
            ok &= res.residual <= 1e-6 + res.slack
            runs.append([str(inv.window), inv.u, inv.v, res.residual])
        return ok, {"worst": worst, "involutions": len(runs)}

    return _timed(7, f"Markov oracle measure is conformal at depth {n}", body)


# -- 8 ------------------------------------------------------------------------

def cesaro_residuals(
    ns=(6, 9, 12), depth: int = 8, count: int = 10, seed: int = SEED, shifts: str = "all"
) -> dict:
    sh = shift_for(GOLDEN)
    f = parse_potential("coord:0")
    rng = random.Random(seed)
    invols = [random_involution(sh, rng) for _ in range(count)]
    trees = [grow_tree(sh, i.u, i.v, i.window, depth) for i in invols]
    table = {}
    for n in ns:
        row = []
        for inv, tree in zip(invols, trees):
            mu = cesaro_equilibrium(
                sh, f, n, inv.window.extend(depth), words=tree.a2() + tree.b2(), shifts=shifts
            )
            row.append(conformality_residual(sh, f, mu.weights, inv, depth, tree=tree).residual)
        table[n] = row
    return {"involutions": [[str(i.window), i.u, i.v] for i in invols], "residuals": table}


def criterion_8(tol: float = 0.02) -> CriterionResult:
    def body():
        data = cesaro_residuals()
        res = data["residuals"]
        worst = {n: max(v) for n, v in res.items()}
        ns = sorted(res)
        trend = all(worst[a] > worst[b] for a, b in zip(ns, ns[1:]))
        per_inv = all(
            all(res[a][i] >= res[b][i] for a, b in zip(ns, ns[1:])) for i in range(len(res[ns[0]]))
        )
        below = worst[ns[-1]] <= tol
        details = {
            "max_residual": worst,
            "below_tolerance_at_largest_n": below,
            "decreasing_max": trend,
            "nonincreasing_each": per_inv,
        }
        return below and trend, details

    return _timed(8, f"Cesaro approximant conformality residual <= {tol} and decreasing", body)


# -- 9 ------------------------------------------------------------------------

def criterion_9(n_max: int = 14, tol: float = 0.05) -> CriterionResult:
    def body():
        zero = parse_potential("zero")
        details = {}
        ok = True
        for spec in TEST_BETAS:
            rep = prefix_decay(shift_for(spec), zero, n_max)
            details[spec] = rep.kappa
            ok &= rep.kappa > 0
        lo, hi = shift_for(GOLDEN).beta.log()
        gap = max(0.0, lo - details[GOLDEN], details[GOLDEN] - hi)
        details["golden_distance_to_log_beta"] = gap
        return ok and gap <= tol, details

    return _timed(9, "prefix decay rate positive; golden rate near log beta", body)


# -- 10 -----------------------------------------------------------------------

MARGIN_POTENTIALS = ("zero", "scale:-1:coord:0", "decay:geom:1,0.5")


def criterion_10(n: int = 12) -> CriterionResult:
    def body():
        details = {}
        ok = True
        for spec in TEST_BETAS:
            for f_spec in MARGIN_POTENTIALS:
                m = margin_check(shift_for(spec), parse_potential(f_spec), n)
                details[f"{spec} {f_spec}"] = m.margin
                ok &= m.margin > 0
        return ok, details

    return _timed(10, f"equilibrium margin positive at n={n}", body)


# -- 11 -----------------------------------------------------------------------

def criterion_11() -> CriterionResult:
    def body():
        sh = shift_for(GOLDEN)
        first = weak_dependence_probe(sh, Window(0, 0), 2, 3).to_json()
        again = weak_dependence_probe(BetaShift(GOLDEN), Window(0, 0), 2, 3).to_json()
        ok = first["witness"] == [-1, 1] and json.dumps(first, sort_keys=True) == json.dumps(again, sort_keys=True)
        return ok, {"witness": first["witness"], "reproducible": first == again}

    return _timed(11, "weak-dependence probe finds [-1,1] for golden at depth 3", body)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


# -- per-beta core suite ---------------------------------------------------------

def core_suite(spec: str, n: int = 10) -> list[CriterionResult]:
    """Quick checks for an arbitrary beta (used by ``verify --suite core``)."""
    sh = BetaShift(spec)
    out = []

    def lang():
        checked, bad = language_mismatches(spec, min(n, 8 if sh.b > 3 else n))
        return bad == 0, {"words": checked, "mismatches": bad}

    def words():
        res = word_properties(spec, min(n, 9), hat_base=min(n, 8))
        return not any(res["failures"].values()), {"failures": res["failures"], "q": res["q"]}

    def pressure():
        p = pressure_estimate(sh, parse_potential("zero"), 2 * n).values[-1]
        lo, hi = sh.beta.log()
        dist = max(0.0, lo - p, p - hi)
        return dist <= 0.05, {"pressure": p, "distance": dist}

    def kernel():
        worst = {}
        ok = True
        for f_spec in KERNEL_POTENTIALS:
            f = parse_potential(f_spec)
            pts = points_on(sh, Window(-1, 2))
            r = consistency_check(sh, f, _phi, Window(0, 0), Window(-1, 1), pts)
            worst[f_spec] = r
            ok &= r <= 1e-9
        return ok, worst

    def margin():
        vals = {f: margin_check(sh, parse_potential(f), n).margin for f in MARGIN_POTENTIALS}
        return all(v > 0 for v in vals.values()), vals

    def decay():
        rep = prefix_decay(sh, parse_potential("zero"), n + 4)
        return rep.kappa > 0, {"kappa": rep.kappa}

    for i, (title, fn) in enumerate(
        [
            ("automaton equals suffix oracle", lang),
            ("word-combinatorics properties", words),
            ("pressure of zero near log beta", pressure),
            ("kernel consistency", kernel),
            ("equilibrium margin positive", margin),
            ("prefix decay rate positive", decay),
        ],
        start=1,
    ):
        out.append(_timed(i, title, fn))
    return out
