"""Command-line harness: bounds tables, certificates, recovery and Monte Carlo runs.

Every command is a pure function of its arguments.  Rationals are given as
``num/den`` (or integers); decimals are rejected.  Exit status: 0 all checks
pass, 1 a verification failed, 2 bad usage or parameters, 3 an enumeration
budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from ._kernels import default_workers, run_parallel
from ._util import fraction_str, parse_rational
from .algebra import GF
from .bounds import bounds_table, prop_lb_count, tamo_list_bound
from .certify import (CertificateCapacityError, ConstructionError, IndependentSubsetCertificate,
                      LowerBoundCertificate,
                      build_independent_subset_certificate, build_lower_bound_certificate,
                      loads_certificate, verify_certificate,
                      verify_independent_subset_certificate, verify_lower_bound_certificate)
from .codes import (ENUMERATION_BUDGET, CapacityError, LinearCode, dumps_code, loads_code,
                    min_distance, rng_for, sample_random_rs, sample_rlc)
from .lcl import consistency_check
from .listrec import (RecoveryBall, dumps_ball, independent_in_ball, loads_ball,
                      max_list_size_search, random_lists, recover_list)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# flags that do not change results and so stay out of the config echo
_NON_RESULT_FLAGS = {"workers", "out", "timing", "func"}


class UsageError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _config(args) -> dict:
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in _NON_RESULT_FLAGS}


def _record(args, **body) -> dict:
    return {"tool": "listrecovery", "tool_version": __version__, "command": args.command,
            "seed": args.seed, "config": _config(args), **body}


# -- rendering ----------------------------------------------------------------

def _render(doc: dict, rows: list[dict], fmt: str, text_lines: list[str]) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            fields = list(rows[0])
            w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _cell(r.get(k)) for k in fields})
        return buf.getvalue()
    return "\n".join(text_lines) + "\n"


def _cell(v):
    v = _jsonable(v)
    return json.dumps(v, separators=(",", ":")) if isinstance(v, (list, dict)) else v


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- shared argument handling -------------------------------------------------

def _field(args):
    return GF(args.p, args.m)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _resolve_k(args) -> None:
    if args.k is None and args.rate is not None and args.n is not None:
        k = args.rate * args.n
        if k.denominator != 1:
            raise UsageError(f"rate * n = {k} is not an integer")
        args.k = int(k)


def _code(args, trial: int = 0) -> LinearCode:
    if getattr(args, "code", None):
        with open(args.code, encoding="utf-8") as fh:
            return loads_code(fh.read())
    _resolve_k(args)
    _need(args, "n", "k")
    if not 1 <= args.k <= args.n:
        raise UsageError(f"need 1 <= k <= n, got k = {args.k}, n = {args.n}")
    F = _field(args)
    if getattr(args, "family", "rlc") == "rs":
        return sample_random_rs(F, args.n, args.k, args.seed, trial,
                                distinct=getattr(args, "distinct", False))[0]
    return sample_rlc(F, args.n, args.k, args.seed, trial)


# -- commands -----------------------------------------------------------------

def cmd_bounds(args):
    _need(args, "rate", "eps", "ell")
    q = args.p ** args.m if args.q_given else None
    rows = bounds_table(args.rate, args.eps, args.ell, n=args.n, q=q)
    table = [{"name": n, "value": v, "note": note} for n, v, note in rows]
    doc = _record(args, rows=table)
    lines = [f"{r['name']:<26} {r['value']!s:<24} {r['note']}".rstrip() for r in table]
    return doc, table, lines, EXIT_OK


def _report_lines(report) -> list[str]:
    return report.lines() + [f"verification: {'PASS' if report.passed else 'FAIL'}"]


def _verify_only(args, kind):
    with open(args.verify, encoding="utf-8") as fh:
        cert = loads_certificate(fh.read())
    if not isinstance(cert, kind):
        raise UsageError(f"{args.verify} holds a different certificate type")
    report = verify_certificate(cert, brute_force=args.verify_brute_force,
                                budget=args.budget, workers=args.workers)
    doc = _record(args, report=report.to_dict())
    rows = [dict(name=c.name, passed=c.passed, detail=c.detail) for c in report.checks]
    return doc, rows, _report_lines(report), EXIT_OK if report.passed else EXIT_FAIL


def cmd_certify_lower_bound(args):
    if args.verify:
        return _verify_only(args, LowerBoundCertificate)
    _need(args, "ell", "eps")
    code = _code(args)
    cert = build_lower_bound_certificate(code, args.ell, args.eps)
    report = verify_lower_bound_certificate(code, cert, brute_force=args.verify_brute_force,
                                            budget=args.budget, workers=args.workers)
    doc = _record(args, **cert.to_dict(), report=report.to_dict())
    lines = [f"k' = {cert.family.k_prime}, m = {cert.m}, trapped = {len(cert.trapped)}, "
             f"rho = {fraction_str(cert.rho)}, claimed bound = {cert.claimed_bound}, "
             f"floor exponent condition met = {cert.floor_exponent_met}"]
    rows = [dict(name=c.name, passed=c.passed, detail=c.detail) for c in report.checks]
    return doc, rows, lines + _report_lines(report), EXIT_OK if report.passed else EXIT_FAIL


def cmd_certify_independent(args):
    if args.verify:
        return _verify_only(args, IndependentSubsetCertificate)
    _need(args, "ell", "eps")
    code = _code(args)
    cert = build_independent_subset_certificate(code, args.ell, args.eps)
    report = verify_independent_subset_certificate(code, cert, brute_force=args.verify_brute_force,
                                                   budget=args.budget, workers=args.workers)
    doc = _record(args, **cert.to_dict(), report=report.to_dict())
    lines = [f"m = {cert.m}, rho = {fraction_str(cert.ball.rho)}, "
             f"agreement counts = {list(cert.agreement_counts)} (threshold {cert.ball.threshold})"]
    rows = [dict(name=c.name, passed=c.passed, detail=c.detail) for c in report.checks]
    return doc, rows, lines + _report_lines(report), EXIT_OK if report.passed else EXIT_FAIL


def cmd_recover(args):
    code = _code(args)
    if args.ball:
        with open(args.ball, encoding="utf-8") as fh:
            ball = loads_ball(fh.read())
    else:
        _need(args, "rho", "ell")
        if args.strategy == "none":
            ball = RecoveryBall(args.rho, random_lists(code.field, code.n, args.ell, rng_for(args.seed, 0, 2)))
        else:
            ball, _ = max_list_size_search(code, args.ell, args.rho, strategy=args.strategy,
                                           budget=args.search_budget, seed=args.seed,
                                           workers=args.workers, enum_budget=args.budget)
    res = recover_list(code, ball, workers=args.workers, budget=args.budget)
    doc = _record(args, code=dumps_code(code), ball=dumps_ball(ball), list_size=len(res),
                  span_dim=res.span_dim, codewords=res.codewords, messages=res.messages)
    rows = [{"message": m, "codeword": c} for m, c in zip(res.messages.tolist(), res.codewords.tolist())]
    lines = [f"list size {len(res)}, span dimension {res.span_dim}, "
             f"radius {fraction_str(ball.rho)} (agreement >= {ball.threshold} of {ball.n})"]
    lines += [" ".join(map(str, c)) for c in res.codewords.tolist()]
    return doc, rows, lines, EXIT_OK


def _mc_trial(args, t: int) -> dict:
    rec: dict = {"trial": t}
    try:
        code = _code(args, t)
        rec["resamples"] = code.resamples
        d, _ = min_distance(code, workers=1, budget=args.budget)
        rec["distance"] = d
        rec["relative_distance"] = fraction_str(Fraction(d, code.n))
        if args.eps is not None:
            rec["distance_event"] = Fraction(d, code.n) >= 1 - code.rate - args.eps / 2
        if args.search_budget > 0:
            rho = args.rho if args.rho is not None else 1 - code.rate - args.eps
            ball, size = max_list_size_search(code, args.ell, rho, strategy=args.strategy,
                                              budget=args.search_budget, seed=args.seed,
                                              workers=1, enum_budget=args.budget, trial=t)
            dim, _ = independent_in_ball(code, ball, workers=1, budget=args.budget)
            rec["max_list"] = size
            rec["independent"] = dim
    except CapacityError as e:
        rec["error"] = str(e)
    return rec


def cmd_mc(args):
    _resolve_k(args)
    _need(args, "n", "k")
    if args.search_budget > 0:
        _need(args, "ell")
        if args.rho is None and args.eps is None:
            raise UsageError("list search needs --rho or --eps")
    trials = run_parallel(lambda a, _b: _mc_trial(args, a),
                          [(t, t + 1) for t in range(args.trials)], args.workers)
    ok = [r for r in trials if "error" not in r]
    agg: dict = {"trials": len(trials), "budget_errors": len(trials) - len(ok)}
    if ok:
        ds = [r["distance"] for r in ok]
        agg.update(min_distance=min(ds), mean_distance=fraction_str(Fraction(sum(ds), len(ds))),
                   total_resamples=sum(r["resamples"] for r in ok))
        if "distance_event" in ok[0]:
            hits = sum(r["distance_event"] for r in ok)
            agg["distance_event_fraction"] = fraction_str(Fraction(hits, len(ok)))
        if "max_list" in ok[0]:
            sizes = [r["max_list"] for r in ok]
            agg.update(max_list=max(sizes), mean_list=fraction_str(Fraction(sum(sizes), len(sizes))),
                       max_independent=max(r["independent"] for r in ok))
    refs = {}
    if args.eps is not None and args.ell is not None:
        R = Fraction(args.k, args.n)
        if 1 - R - args.eps > 0:
            refs["prop_independent_count"] = prop_lb_count(R, args.eps, args.ell)
        if "max_independent" in agg:
            refs["list_bound_log2_at_max_independent"] = round(
                tamo_list_bound(args.ell, args.eps, agg["max_independent"]).log2_value, 9)
    doc = _record(args, trials=trials, aggregate=agg, reference=refs)
    lines = [f"{k}: {v}" for k, v in sorted(agg.items())] + [f"reference {k}: {v}" for k, v in sorted(refs.items())]
    return doc, trials, lines, EXIT_OK


def cmd_distance(args):
    def one(t: int) -> dict:
        code = _code(args, t)
        d, w = min_distance(code, workers=1, budget=args.budget)
        return {"trial": t, "distance": d, "singleton": code.n - code.k + 1, "witness": w.tolist()}

    n_trials = 1 if args.code else args.trials
    trials = run_parallel(lambda a, _b: one(a), [(t, t + 1) for t in range(n_trials)], args.workers)
    doc = _record(args, trials=trials)
    lines = [f"trial {r['trial']}: d = {r['distance']} (n - k + 1 = {r['singleton']})" for r in trials]
    return doc, trials, lines, EXIT_OK


def cmd_lcl_check(args):
    _need(args, "n", "k")
    recs = consistency_check(args.p ** args.m, args.n, args.k, args.b, args.trials, args.seed,
                             profiles=args.profiles, rho=args.rho, ell=args.ell,
                             workers=args.workers)
    violations = sum(r["violations"] for r in recs)
    agg = {"instances": len(recs), "violations": violations,
           "bad_instances": sum(r["bad"] for r in recs),
           "profiles_contained": sum(r["profiles_contained"] for r in recs)}
    doc = _record(args, trials=recs, aggregate=agg)
    rows = [{k: v for k, v in r.items() if k != "problems"} for r in recs]
    lines = [f"{k}: {v}" for k, v in agg.items()]
    return doc, rows, lines, EXIT_OK if violations == 0 else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, fmt: str = "text") -> None:
    p.add_argument("--p", type=int, default=None, help="field characteristic")
    p.add_argument("--m", type=int, default=1, help="extension degree")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--eps", type=_rational, help="num/den")
    p.add_argument("--rate", type=_rational, help="num/den")
    p.add_argument("--rho", type=_rational, help="num/den")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--budget", type=int, default=ENUMERATION_BUDGET,
                   help="cap on exhaustively enumerated messages")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("text", "json", "csv"), default=fmt)
    p.add_argument("--workers", type=int, default=default_workers(),
                   help="parallel workers (results do not depend on this)")
    p.add_argument("--timing", action="store_true", help="report wall-clock on stderr")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="listrecovery", description=__doc__.split("\n")[0])
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="bound calculators at one parameter point")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    for name, func, help_ in (("certify-lower-bound", cmd_certify_lower_bound,
                               "disjoint-support certificate of a large list"),
                              ("certify-independent", cmd_certify_independent,
                               "many independent codewords in one ball")):
        p = sub.add_parser(name, help=help_)
        _common(p, fmt="json")
        p.add_argument("--code", help="code document to use instead of sampling")
        p.add_argument("--verify", metavar="FILE", help="only verify this certificate")
        p.add_argument("--verify-brute-force", action="store_true",
                       help="cross-check by exhaustive recovery when q^k <= budget")
        p.set_defaults(func=func)

    p = sub.add_parser("recover", help="exhaustive list recovery")
    _common(p)
    p.add_argument("--code")
    p.add_argument("--ball", help="ball document; otherwise a ball is searched for")
    p.add_argument("--family", choices=("rlc", "rs"), default="rlc")
    p.add_argument("--distinct", action="store_true", help="RS: distinct evaluation points")
    p.add_argument("--strategy", choices=("random", "codeword-seeded", "exhaustive-tiny", "none"),
                   default="codeword-seeded")
    p.add_argument("--search-budget", type=int, default=20)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("mc", help="Monte Carlo over random codes")
    _common(p)
    p.add_argument("--family", choices=("rlc", "rs"), default="rlc")
    p.add_argument("--distinct", action="store_true", help="RS: distinct evaluation points")
    p.add_argument("--strategy", choices=("random", "codeword-seeded"), default="codeword-seeded")
    p.add_argument("--search-budget", type=int, default=0,
                   help="balls tried per strategy and trial (0 skips the list search)")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("distance", help="exact minimum distance")
    _common(p)
    p.add_argument("--code")
    p.add_argument("--family", choices=("rlc", "rs"), default="rlc")
    p.add_argument("--distinct", action="store_true", help="RS: distinct evaluation points")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("lcl-check", help="profile containment vs bad lists on tiny codes")
    _common(p)
    p.add_argument("--b", type=int, default=2, help="locality (list size bound + 1)")
    p.add_argument("--profiles", type=int, default=20, help="random profiles per instance")
    p.set_defaults(func=cmd_lcl_check)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.q_given = args.p is not None
    if args.p is None:
        args.p = 2
    if args.workers < 1:
        print("error: need --workers >= 1", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        doc, rows, lines, status = args.func(args)
    except (CapacityError, CertificateCapacityError) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ConstructionError, ValueError, ZeroDivisionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, _render(doc, rows, args.format, lines))
    if args.timing:
        print(f"wall-clock {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
