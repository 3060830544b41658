"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 enumeration budget exceeded,
3 a tolerance or margin check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .beta_lang import BetaShift, format_word, parse_word
from .cache import DiskCache
from .errors import BudgetExceeded, MarginViolated, ThermoshiftError

REPORT_SCHEMA = "thermoshift.report/1"

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_TOLERANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _window(text: str):
    from .shift_space import Window

    return Window.parse(text)


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys may use dashes."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _common(p: argparse.ArgumentParser, beta=True, f=False) -> None:
    if beta:
        p.add_argument("--beta", help="beta spec: rational:p/q, decimal:x or poly:c0,..,cd@[lo,hi]")
    if f:
        p.add_argument("--f", dest="f", default="zero", help="potential spec (default zero)")
    p.add_argument("--config", help="key=value file; explicit flags win")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--no-cache", dest="no_cache", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="thermoshift", description="beta-shift thermodynamic formalism toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    lang = sub.add_parser("lang", help="digits and language of the beta-shift")
    lsub = lang.add_subparsers(dest="action", parser_class=_Parser)
    for name in ("expand", "count", "enum"):
        q = lsub.add_parser(name)
        _common(q)
        q.add_argument("-n", type=int, default=None)
        if name == "enum":
            q.add_argument("--limit", type=int, default=None)
    q = lsub.add_parser("check")
    _common(q)
    q.add_argument("word")

    q = sub.add_parser("kernel", help="finite-volume Gibbs kernel row")
    _common(q, f=True)
    q.add_argument("--window", default=None)
    q.add_argument("--point", default='{"window":[0,0],"letters":[0]}', help="JSON point")
    q.add_argument("--tail-depth", dest="tail_depth", type=int)

    q = sub.add_parser("probe-markov", help="weak-dependence probe")
    _common(q)
    q.add_argument("--window", default=None)
    q.add_argument("--radius", type=int, default=2)
    q.add_argument("--depth", type=int, default=3)

    q = sub.add_parser("conformal-check", help="conformality residual of a Cesaro approximant")
    _common(q, f=True)
    q.add_argument("--window", default=None)
    q.add_argument("--u", default=None)
    q.add_argument("--v", default=None)
    q.add_argument("-n", type=int, default=8, help="tree depth")
    q.add_argument("-m", type=int, help="Cesaro volume half-width (default 2n)")
    q.add_argument("-r", type=int, help="cocycle cut (default n)")
    q.add_argument("--measure", help="CylinderMeasure JSON to test instead of the Cesaro approximant")

    q = sub.add_parser("pressure", help="finite-volume pressure sequence")
    _common(q, f=True)
    q.add_argument("-n", type=int, default=None)
    q.add_argument("--csv")

    q = sub.add_parser("equilibrium", help="Cesaro equilibrium approximant on a target window")
    _common(q, f=True)
    q.add_argument("--target", default=None)
    q.add_argument("-n", type=int, default=None)
    q.add_argument("--shifts", choices=("all", "interior"), default="all")

    q = sub.add_parser("decay", help="decay rate of the digit-prefix cylinders")
    _common(q, f=True)
    q.add_argument("-n", type=int, default=None)
    q.add_argument("--csv")

    q = sub.add_parser("margin", help="pressure minus the orbit average along the digits of 1")
    _common(q, f=True)
    q.add_argument("-n", type=int, default=None)

    q = sub.add_parser("verify", help="run a verification suite")
    _common(q)
    q.add_argument("--suite", choices=("core", "acceptance"), default="core")
    q.add_argument("-n", type=int, default=10)
    return ap


def parse(argv: Sequence[str]) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        known = vars(args)
        defaults = {}
        for key, value in cfg.items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
            defaults[key] = value
        # re-parse so explicit flags override the file and types are applied
        sub = _subparser(ap, args)
        sub.set_defaults(**defaults)
        args = ap.parse_args(argv)
    if args.command is None or (args.command == "lang" and args.action is None):
        ap.print_usage(sys.stderr)
        raise UsageError("a command is required")
    # required values may come from --config, so they are checked after the merge
    needed = () if getattr(args, "action", None) == "check" else _REQUIRED.get(args.command, ())
    for dest in needed:
        if getattr(args, dest, None) is None:
            raise UsageError(f"{_flag(dest)} is required (on the command line or in --config)")
    return args


_REQUIRED = {
    "lang": ("n",),
    "kernel": ("window",),
    "probe-markov": ("window",),
    "conformal-check": ("window", "u", "v"),
    "pressure": ("n",),
    "equilibrium": ("target", "n"),
    "decay": ("n",),
    "margin": ("n",),
}


def _flag(dest: str) -> str:
    return "-n" if dest == "n" else "--" + dest.replace("_", "-")


def _subparser(ap: argparse.ArgumentParser, args) -> argparse.ArgumentParser:
    for action in ap._subparsers._group_actions:
        p = action.choices[args.command]
        if args.command == "lang":
            for a in p._subparsers._group_actions:
                return a.choices[args.action]
        return p
    raise UsageError("no command")


def _require_beta(args) -> BetaShift:
    if not getattr(args, "beta", None):
        raise UsageError("missing --beta (or beta=... in --config)")
    return BetaShift(args.beta)


def _report(args, sh: BetaShift | None, result) -> dict:
    config = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("out", "config", "cache_dir", "no_cache")
    }
    rep = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": args.command,
        "config": config,
        "seed": args.seed,
        "result": result,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if sh is not None:
        lo, hi = sh.beta.refine(Fraction(1, 2**60))
        rep["beta"] = {"spec": sh.beta.spec, "enclosure": [str(lo), str(hi)], "float": float(sh.beta)}
    return rep


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=1, default=_json_default)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)


def _cache(args) -> DiskCache:
    return DiskCache(args.cache_dir, enabled=not args.no_cache)


# -- commands --------------------------------------------------------------------

def cmd_lang(args) -> int:
    sh = _require_beta(args)
    if args.action == "expand":
        if args.n < 1:
            raise UsageError("-n must be at least 1")
        cache = _cache(args)
        digits = cache.fetch("digits", {"beta": args.beta, "n": args.n}, lambda: list(sh.digits(args.n)))
        print(format_word(digits, sh.b))
    elif args.action == "count":
        if args.n < 0:
            raise UsageError("-n must be nonnegative")
        print(sh.count(args.n))
    elif args.action == "check":
        w = parse_word(args.word)
        print("true" if sh.is_admissible(w) else "false")
    elif args.action == "enum":
        words = sh.enumerate(args.n, args.budget)
        if args.limit is not None:
            words = words[: args.limit]
        for w in words:
            print(format_word(w, sh.b))
    return EXIT_OK


def cmd_kernel(args) -> int:
    from .gibbs import kernel_row
    from .potential import parse_potential
    from .shift_space import FinitePoint, in_shift

    sh = _require_beta(args)
    f = parse_potential(args.f)
    try:
        x = FinitePoint.from_json(json.loads(args.point))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad --point: {exc}") from exc
    if not in_shift(sh, x):
        raise UsageError("--point is not in the shift")
    row = kernel_row(sh, f, x, _window(args.window), args.tail_depth)
    _emit(args, _report(args, sh, row.to_json()))
    return EXIT_OK


def cmd_probe(args) -> int:
    from .gibbs import weak_dependence_probe

    sh = _require_beta(args)
    verdict = weak_dependence_probe(sh, _window(args.window), args.radius, args.depth, args.budget)
    _emit(args, _report(args, sh, verdict.to_json()))
    return EXIT_OK


def cmd_conformal(args) -> int:
    from .conformal import Involution, conformality_residual, grow_tree
    from .potential import parse_potential
    from .thermo import CylinderMeasure, cesaro_equilibrium

    sh = _require_beta(args)
    f = parse_potential(args.f)
    L = _window(args.window)
    inv = Involution(L, parse_word(args.u), parse_word(args.v)).check(sh)
    n = args.n
    m = 2 * n if args.m is None else args.m
    if m < n:
        raise UsageError("-m must be at least -n")
    r = n if args.r is None else args.r
    tree = grow_tree(sh, inv.u, inv.v, L, n, args.budget)
    outer = L.extend(n)
    if args.measure:
        mu = CylinderMeasure.from_json(json.loads(Path(args.measure).read_text()))
        if mu.window != outer:
            mu = mu.marginal(outer)
        source = args.measure
    else:
        mu = cesaro_equilibrium(sh, f, m, outer, words=tree.a2() + tree.b2(), budget=args.budget)
        source = f"cesaro:{m}"
    res = conformality_residual(sh, f, mu.weights, inv, n, r=r, tree=tree)
    _emit(args, _report(args, sh, {**res.to_json(), "measure": source, "n": n, "m": m, "r": r}))
    return EXIT_OK


def cmd_pressure(args) -> int:
    from .potential import parse_potential
    from .thermo import pressure_at

    sh = _require_beta(args)
    f = parse_potential(args.f)
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    cache = _cache(args)
    vals = [
        cache.fetch("pressure", {"beta": args.beta, "f": args.f, "n": k}, lambda k=k: pressure_at(sh, f, k))
        for k in range(1, args.n + 1)
    ]
    gaps = [None] + [abs(b - a) for a, b in zip(vals, vals[1:])]
    lo, hi = sh.beta.log()
    result = {"n": list(range(1, args.n + 1)), "pressure": vals, "cauchy_gap": gaps, "log_beta": [lo, hi]}
    if args.csv:
        rows = ["n,pressure,cauchy_gap"] + [
            f"{k},{v!r},{'' if g is None else repr(g)}" for k, v, g in zip(result["n"], vals, gaps)
        ]
        Path(args.csv).write_text("\n".join(rows) + "\n")
    _emit(args, _report(args, sh, result))
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    from .potential import parse_potential
    from .thermo import cesaro_equilibrium

    sh = _require_beta(args)
    mu = cesaro_equilibrium(
        sh, parse_potential(args.f), args.n, _window(args.target), budget=args.budget, shifts=args.shifts
    )
    if args.out:
        Path(args.out).write_text(mu.dumps(sh.b) + "\n")
    else:
        print(mu.dumps(sh.b))
    return EXIT_OK


def cmd_decay(args) -> int:
    from .potential import parse_potential
    from .thermo import prefix_decay

    sh = _require_beta(args)
    rep = prefix_decay(sh, parse_potential(args.f), args.n)
    if args.csv:
        Path(args.csv).write_text(rep.to_csv())
    _emit(args, _report(args, sh, rep.to_json()))
    return EXIT_OK


def cmd_margin(args) -> int:
    from .potential import parse_potential
    from .thermo import margin_check

    sh = _require_beta(args)
    rep = margin_check(sh, parse_potential(args.f), args.n)
    _emit(args, _report(args, sh, rep.to_json()))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import acceptance

    if args.suite == "core":
        sh = _require_beta(args)
        results = acceptance.core_suite(args.beta, args.n)
    else:
        sh = BetaShift(args.beta) if args.beta else None
        results = [fn() for fn in acceptance.CRITERIA.values()]
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = [
        {"number": r.number, "title": r.title, "passed": r.passed, "details": r.details} for r in results
    ]
    _emit(args, _report(args, sh, {"suite": args.suite, "criteria": payload}))
    return EXIT_OK if all(r.passed for r in results) else EXIT_TOLERANCE


COMMANDS = {
    "lang": cmd_lang,
    "kernel": cmd_kernel,
    "probe-markov": cmd_probe,
    "conformal-check": cmd_conformal,
    "pressure": cmd_pressure,
    "equilibrium": cmd_equilibrium,
    "decay": cmd_decay,
    "margin": cmd_margin,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except MarginViolated as exc:
        print(f"margin check failed: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (ThermoshiftError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
