"""Command-line front end.

Exit codes: 0 success (``decide``: the variety has a rational point),
10 ``decide`` found a counterexample to the Hasse principle, 1 a ``verify``
check failed, 2 invalid input, 3 checkpoint mismatch or corruption.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .arith import factorize
from .census import CSV_HEADER, CheckpointError, count
from .constants import (
    DEFAULT_TRUNCATION,
    MIN_TRUNCATION,
    PrecisionError,
    all_constants,
    predict,
    predict_N1,
    predict_S,
    predict_T,
)
from .identities import SUITES, run_suite
from .local import Triple, decide, h_contributions

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_CHECKPOINT = 3
EXIT_COUNTEREXAMPLE = 10

OUT_FORMATS = ("human", "csv", "json")
COMPARE_HEADER = "NBr_pred,NBr_ratio,S_pred,S_ratio,N1_pred,N1_ratio,T_pred,T_ratio"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    pmin: int | None = None
    pmax: int | None = None
    step: int | None = None
    shards: int = 1
    threads: int = 1
    prime_bound: int = DEFAULT_TRUNCATION
    out: str = "human"
    checkpoint: str | None = None
    compare: bool = False
    suite: str = "identities"
    bound: int | None = None

    def validate(self) -> RunConfig:
        if self.shards < 1 or self.threads < 1:
            raise UsageError("--shards and --threads must be positive")
        if self.prime_bound < MIN_TRUNCATION:
            raise UsageError(f"--prime-bound must be at least {MIN_TRUNCATION}")
        if self.out not in OUT_FORMATS:
            raise UsageError(f"--out must be one of {', '.join(OUT_FORMATS)}")
        if self.subcommand in ("count", "predict"):
            if self.pmax is None or self.pmax < 1:
                raise UsageError("--pmax must be a positive integer")
            if self.pmin is not None and not 1 <= self.pmin <= self.pmax:
                raise UsageError("--pmin must lie in [1, pmax]")
            if self.step is not None and self.step < 1:
                raise UsageError("--step must be positive")
        if self.bound is not None and self.bound < 1:
            raise UsageError("--bound must be positive")
        return self

    def p_values(self) -> list[int]:
        if self.pmin is None:
            return [self.pmax]
        step = self.step or self.pmin
        ps = list(range(self.pmin, self.pmax + 1, step))
        if ps[-1] != self.pmax:
            ps.append(self.pmax)
        return ps


def _emit(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _err(msg: str) -> None:
    sys.stderr.write(f"error: {msg}\n")


# -- decide ------------------------------------------------------------------


def _square_message(name: str, x: int) -> str | None:
    fac = factorize(x)
    bad = [p for p, e in sorted(fac.items()) if e >= 2]
    if not bad:
        return None
    sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
    parts = [f"{p}{str(e).translate(sup)}" if e > 1 else str(p) for p, e in sorted(fac.items())]
    sign = "-" if x < 0 else ""
    return f"{name} not squarefree ({x} = {sign}{'·'.join(parts)})"


def _validate_triple(a: int, b: int, c: int) -> Triple:
    for name, x in (("a", a), ("b", b), ("c", c)):
        if x == 0:
            raise UsageError(f"{name} must be nonzero")
        msg = _square_message(name, x)
        if msg:
            raise UsageError(msg)
    if c < 0:
        raise UsageError("c must be positive")
    return Triple(a, b, c)


def run_decide(a: int, b: int, c: int, out: str = "human") -> int:
    try:
        t = _validate_triple(a, b, c)
    except UsageError as e:
        _err(str(e))
        return EXIT_INVALID
    v = decide(t)
    contrib = h_contributions(t) if v.f_value else {}
    negative = {p: s for p, s in contrib.items() if s == -1}
    if out == "json":
        _emit(json.dumps({
            "a": a, "b": b, "c": c,
            "has_rational_points": v.has_rational_points,
            "f": v.f_value, "h": v.h_value,
            "contributions": {str(p): s for p, s in contrib.items()},
            "contributing_primes": {str(p): s for p, s in negative.items()},
        }, sort_keys=True))
    elif out == "csv":
        _emit("a,b,c,f,h,has_points,contributing")
        neg = " ".join(f"{p}:{s}" for p, s in negative.items())
        hv = "" if v.h_value is None else v.h_value
        _emit(f"{a},{b},{c},{v.f_value},{hv},{int(v.has_rational_points)},{neg}")
    else:
        _emit(f"triple        ({a}, {b}, {c})")
        _emit(f"f(a, b)       {v.f_value}")
        if v.f_value:
            _emit(f"h(a, b, c)    {v.h_value:+d}")
            listed = ", ".join(f"{p}: {s:+d}" for p, s in contrib.items()) or "none"
            _emit(f"(c, b)_p      {listed}   (p | 2bc, a not a square in Q_p)")
            _emit("contributing  {" + ", ".join(f"{p}: {s}" for p, s in negative.items()) + "}")
        else:
            _emit("h(a, b, c)    not evaluated (some local condition fails)")
        if v.has_rational_points:
            _emit("verdict       has a rational point")
        else:
            _emit("verdict       counterexample to the Hasse principle")
    return EXIT_OK if v.has_rational_points else EXIT_COUNTEREXAMPLE


# -- count -------------------------------------------------------------------


def _ratio(x: float, y: float) -> str:
    return f"{x / y:.6f}" if y else ""


def _compare_fields(r, truncation: int) -> list[str]:
    if r.P < 3:
        return [""] * 8
    pr = predict(r.P, truncation).two_term_total
    ps, pn, pt = predict_S(r.P), predict_N1(r.P, truncation), predict_T(r.P, truncation)
    return [f"{pr:.3f}", _ratio(r.n_br, pr), f"{ps:.3f}", _ratio(r.s_size, ps),
            f"{pn:.3f}", _ratio(r.n1, pn), f"{pt:.3f}", _ratio(r.t_sum, pt)]


def _checkpoint_for(cfg: RunConfig, P: int, many: bool) -> str | None:
    if cfg.checkpoint is None:
        return None
    return f"{cfg.checkpoint}.P{P}" if many else cfg.checkpoint


def run_count(cfg: RunConfig) -> int:
    ps = cfg.p_values()
    rows = []
    for P in ps:
        try:
            r = count(P, shards=cfg.shards, threads=cfg.threads,
                      checkpoint=_checkpoint_for(cfg, P, len(ps) > 1))
        except CheckpointError as e:
            _err(f"checkpoint: {e}")
            return EXIT_CHECKPOINT
        except ValueError as e:
            _err(str(e))
            return EXIT_INVALID
        rows.append((r, _compare_fields(r, cfg.prime_bound) if cfg.compare else []))
    names = COMPARE_HEADER.split(",")
    if cfg.out == "json":
        for r, extra in rows:
            d = {"P": r.P, "S": r.s_size, "N1": r.n1, "N2": r.n2, "NBr": r.n_br,
                 "Nglob": r.n_glob, "T": r.t_sum, "seconds": round(r.wall_time, 3)}
            d.update({k: (float(v) if v else None) for k, v in zip(names, extra)})
            _emit(json.dumps(d))
    elif cfg.out == "csv":
        _emit(CSV_HEADER + ("," + COMPARE_HEADER if cfg.compare else ""))
        for r, extra in rows:
            _emit(r.csv_row() + ("," + ",".join(extra) if cfg.compare else ""))
    else:
        cols = CSV_HEADER.split(",") + (["NBr_pred", "NBr_ratio"] if cfg.compare else [])
        _emit("  ".join(f"{c:>12}" for c in cols))
        for r, extra in rows:
            vals = [str(x) for x in r.counters()] + [f"{r.wall_time:.3f}"] + extra[:2]
            _emit("  ".join(f"{v:>12}" for v in vals))
    return EXIT_OK


# -- constants, predict, verify ----------------------------------------------


def run_constants(cfg: RunConfig) -> int:
    try:
        consts = all_constants(cfg.prime_bound)
    except PrecisionError as e:
        _err(str(e))
        return EXIT_INVALID
    if cfg.out == "json":
        _emit(json.dumps([c.as_dict() for c in consts], indent=1))
    elif cfg.out == "csv":
        _emit("name,value,tail_low,tail_high,width,truncation_prime,partial_product")
        for c in consts:
            _emit(f"{c.name},{c.value!r},{c.tail_low!r},{c.tail_high!r},{c.width:.3e},"
                  f"{c.truncation_prime},{c.partial_product!r}")
    else:
        _emit(f"truncation prime {cfg.prime_bound}")
        for c in consts:
            _emit(f"{c.name:<9} {c.value:.15f}  in [{c.tail_low:.15f}, {c.tail_high:.15f}]"
                  f"  width {c.width:.2e}  partial {c.partial_product:.15f}")
    return EXIT_OK


def run_predict(cfg: RunConfig) -> int:
    rows = []
    for P in cfg.p_values():
        if P < 3:
            _err("predictions need P >= 3")
            return EXIT_INVALID
        pr = predict(P, cfg.prime_bound)
        rows.append({**pr.as_dict(), "S": predict_S(P), "N1": predict_N1(P, cfg.prime_bound),
                     "T": predict_T(P, cfg.prime_bound)})
    keys = ["P", "main_term", "second_term", "two_term_total", "S", "N1", "T"]
    if cfg.out == "json":
        for d in rows:
            _emit(json.dumps(d))
    elif cfg.out == "csv":
        _emit(",".join(keys))
        for d in rows:
            _emit(",".join(str(d["P"]) if k == "P" else f"{d[k]:.6f}" for k in keys))
    else:
        for d in rows:
            _emit(f"P = {d['P']}")
            for k in keys[1:]:
                _emit(f"  {k:<15} {d[k]:.6f}")
    return EXIT_OK


def run_verify(cfg: RunConfig) -> int:
    try:
        checks = run_suite(cfg.suite, cfg.bound)
    except ValueError as e:
        _err(str(e))
        return EXIT_INVALID
    if cfg.out == "json":
        _emit(json.dumps([c.as_dict() for c in checks], indent=1))
    elif cfg.out == "csv":
        _emit("identity,status,cases,counterexample")
        for c in checks:
            d = c.as_dict()
            ce = d["counterexamples"][0] if d["counterexamples"] else ""
            _emit(f"\"{c.name}\",{d['status']},{c.cases},\"{ce}\"")
    else:
        for c in checks:
            d = c.as_dict()
            tail = f"  first counterexample: {d['counterexamples'][0]}" if not c.passed else ""
            _emit(f"{d['status']:<4}  {c.name}  ({c.cases} cases){tail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hasse-census",
        description="Decide and count Hasse principle counterexamples for "
                    "(x^2-ay^2)(z^2-bt^2)(u^2-abw^2) = c.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, formats=OUT_FORMATS, default="human"):
        p.add_argument("--out", choices=formats, default=default)

    p = sub.add_parser("decide", help="decide one triple (exit 0 points, 10 counterexample)")
    for name in ("a", "b", "c"):
        p.add_argument(name, type=int)
    common(p)

    p = sub.add_parser("count", help="census of S(P)")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--pmin", type=int, help="emit rows for pmin, pmin + step, ..., pmax")
    p.add_argument("--step", type=int, help="spacing of P values (default: pmin)")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint", help="resume file (suffixed .P<n> when several P)")
    p.add_argument("--compare", action="store_true", help="append predictions and ratios")
    p.add_argument("--prime-bound", type=int, default=DEFAULT_TRUNCATION)
    common(p, default="csv")

    p = sub.add_parser("constants", help="Euler-product constants with enclosures")
    p.add_argument("--prime-bound", type=int, default=DEFAULT_TRUNCATION)
    common(p)

    p = sub.add_parser("predict", help="asymptotic predictions")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--pmin", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--prime-bound", type=int, default=DEFAULT_TRUNCATION)
    common(p)

    p = sub.add_parser("verify", help="exhaustive identity checks (exit 1 on failure)")
    p.add_argument("--suite", choices=list(SUITES), default="identities")
    p.add_argument("--bound", type=int)
    common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items()
              if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**fields).validate()


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.subcommand == "decide":
        return run_decide(ns.a, ns.b, ns.c, ns.out)
    try:
        cfg = config_from_args(ns)
    except UsageError as e:
        _err(str(e))
        return EXIT_INVALID
    handler = {"count": run_count, "constants": run_constants,
               "predict": run_predict, "verify": run_verify}[cfg.subcommand]
    try:
        return handler(cfg)
    except KeyboardInterrupt:
        _err("interrupted (finished shards are kept in the checkpoint)")
        return 130


if __name__ == "__main__":
    sys.exit(main())
