"""Command line: reduce, solve1, verify, darboux and corpus subcommands.

Exit codes: 0 success, 1 error (including parse errors), 2 when the search
ends without a result (nothing found at the degree bound, or a limit hit).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError, PSError
from .frontend import SOODE, parse_invariant, parse_ode, render
from .limits import Limits
from .pipeline import EXIT_CODES, NOT_FOUND, OK, NumericSettings, run_reduce, run_solve1
from .verify import equivalent, max_drift, verify_numeric, verify_symbolic

DRIFT_TOL = 1e-6


def _limits(args) -> Limits:
    kw = {"max_degree": args.max_degree, "all_degrees": getattr(args, "all", False)}
    kw["s_degree"] = args.s_degree if args.s_degree is not None else min(2, args.max_degree)
    kw["r_degree"] = args.r_degree if args.r_degree is not None else min(2, args.max_degree)
    if args.timeout is not None:
        kw["timeout"] = args.timeout
    return Limits(**kw)


def _numeric(args) -> NumericSettings:
    return NumericSettings(args.trajectories, args.h, args.T, args.seed)


def _emit(obj: dict, as_json: bool, human) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        human()


def _print_report(rep) -> None:
    print(f"ode:       {rep.ode}")
    if rep.M:
        print(f"M, N:      {rep.M}  |  {rep.N}")
    if rep.status != OK:
        print(f"status:    {rep.status}  ({rep.message})")
        return
    if rep.order == 2:
        print(f"pairs:     {len(rep.pairs)} verified")
        show = rep.pairs if rep.limits.get("all_degrees") else rep.pairs[rep.chosen:rep.chosen + 1]
        for p in show:
            print(f"  S = {render(p.S)}    R = {render(p.R)}    (degree {p.degree})")
    else:
        for f, g in rep.darboux:
            print(f"darboux:   {f}    cofactor {g}")
        print(f"factor:    R = {rep.integrating_factor}")
    print(f"invariant: {render(rep.invariant)}")
    if rep.reduced is not None:
        for line in rep.reduced.explicit():
            print(f"reduced:   {line}")
    print(f"symbolic:  {'ok' if rep.symbolic else 'FAILED'}")
    if rep.numeric_max_drift is not None:
        print(f"drift:     {rep.numeric_max_drift:.3e}")
    print("timing:    " + ", ".join(f"{k} {v:.0f} ms" for k, v in rep.timing_ms.items()))


def cmd_reduce(args) -> int:
    rep = run_reduce(args.ode, _limits(args), _numeric(args))
    _emit(rep.to_json(), args.json, lambda: _print_report(rep))
    return rep.exit_code


def cmd_solve1(args) -> int:
    rep = run_solve1(args.ode, args.degree, Limits(timeout=args.timeout), _numeric(args))
    _emit(rep.to_json(), args.json, lambda: _print_report(rep))
    return rep.exit_code


def cmd_verify(args) -> int:
    ode = parse_ode(args.ode)
    inv = parse_invariant(args.invariant)
    sym = verify_symbolic(inv, ode)
    drift = None
    if args.trajectories > 0:
        drift = max_drift(verify_numeric(inv, ode, args.trajectories, args.h, args.T, args.seed))
    out = {"ode": args.ode, "invariant": render(inv),
           "checks": {"symbolic": sym, "numeric_max_drift": drift}}

    def human():
        print(f"symbolic: {'true' if sym else 'false'}")
        if drift is not None:
            print(f"numeric:  max drift {drift:.3e} ({'ok' if drift < DRIFT_TOL else 'too large'})")
    _emit(out, args.json, human)
    return 0 if sym else EXIT_CODES[NOT_FOUND]


def cmd_darboux(args) -> int:
    from .calculus import scaled_D
    from .darboux import darboux_polynomials
    from .foode import find_darboux
    ode = parse_ode(args.ode)
    limits = Limits(timeout=args.timeout)
    if isinstance(ode, SOODE):
        op = lambda f: scaled_D(f, ode.M, ode.N)
        cof = max(ode.N.total_degree() + 1, ode.M.total_degree()) - 1
        found = darboux_polynomials(op, args.degree, cof, 3, limits)
    else:
        found = find_darboux(ode, args.degree, limits)
    out = {"ode": args.ode, "darboux": [{"f": render(d.f), "cofactor": render(d.cofactor)} for d in found]}

    def human():
        for d in found:
            print(f"{render(d.f)}    cofactor {render(d.cofactor)}")
        if not found:
            print("no Darboux polynomials at this degree")
    _emit(out, args.json, human)
    return 0


# -- corpus ------------------------------------------------------------------------

@dataclass
class CorpusEntry:
    line: int
    ode: str
    expect: str | None


def read_corpus(path: Path) -> list[CorpusEntry]:
    out = []
    for i, raw in enumerate(path.read_text().splitlines(), 1):
        text = raw.split("#", 1)[0].strip() if raw.lstrip().startswith("#") else raw.strip()
        if not text:
            continue
        ode, _, expect = text.partition(";;")
        expect = expect.strip()
        if expect.startswith("expect:"):
            expect = expect[len("expect:"):].strip()
        out.append(CorpusEntry(i, ode.strip(), expect or None))
    return out


def run_entry(entry: CorpusEntry, limits: Limits, numeric: NumericSettings) -> dict:
    try:
        ode = parse_ode(entry.ode)
    except ParseError as e:
        return {"line": entry.line, "ode": entry.ode, "status": "error", "detail": str(e)}
    rep = run_reduce(entry.ode, limits, numeric) if isinstance(ode, SOODE) \
        else run_solve1(entry.ode, limits.max_degree, limits, numeric)
    res = {"line": entry.line, "ode": entry.ode, "status": rep.status, "detail": rep.message,
           "invariant": render(rep.invariant) if rep.invariant is not None else None,
           "drift": rep.numeric_max_drift, "ms": round(sum(rep.timing_ms.values()))}
    if rep.status == OK:
        ok = rep.symbolic
        if entry.expect:
            ok = ok and equivalent(rep.invariant, parse_invariant(entry.expect))
        if rep.numeric_max_drift is not None:
            ok = ok and rep.numeric_max_drift < DRIFT_TOL
        res["status"] = "pass" if ok else "fail"
    return res


def default_corpus() -> Path:
    return Path(str(resources.files("psreduce") / "data" / "examples.corpus"))


def cmd_corpus(args) -> int:
    path = Path(args.path) if args.path else default_corpus()
    if not path.exists():
        print(f"corpus file not found: {path}", file=sys.stderr)
        return 1
    entries = read_corpus(path)
    limits, numeric = _limits(args), _numeric(args)
    if args.jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(run_entry, entries, [limits] * len(entries), [numeric] * len(entries)))
    else:
        results = [run_entry(e, limits, numeric) for e in entries]
    passed = sum(r["status"] == "pass" for r in results)
    bad = [r for r in results if r["status"] in ("fail", "error")]
    summary = {"total": len(results), "passed": passed,
               "nothing_found": sum(r["status"] == NOT_FOUND for r in results), "failed": len(bad)}

    def human():
        for r in results:
            drift = f"{r['drift']:.1e}" if r.get("drift") is not None else "-"
            print(f"{r['status']:<14} {r.get('ms', 0):>7} ms  drift {drift:<8} {r['ode']}")
            if r["status"] != "pass" and r.get("detail"):
                print(f"{'':14} {r['detail']}")
        print(f"{passed}/{len(results)} passed")
    _emit({"entries": results, "summary": summary}, args.json, human)
    return 1 if bad else 0


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psreduce", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, search=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--timeout", type=float, default=None,
                        help="seconds per stage (default: PS2_TIMEOUT or 30)")
        sp.add_argument("--seed", type=int, default=0, help="seed for numeric trajectories")
        sp.add_argument("--trajectories", type=int, default=10)
        sp.add_argument("--h", type=float, default=1e-4, help="RK4 step")
        sp.add_argument("--T", type=float, default=1.0, help="integration length")
        if search:
            sp.add_argument("--s-degree", type=int, default=None)
            sp.add_argument("--r-degree", type=int, default=None)
            sp.add_argument("--max-degree", type=int, default=4)
            sp.add_argument("--all", action="store_true", help="report every verified pair up to max degree")

    r = sub.add_parser("reduce", help="reduce y'' = M/N to a first-order equation")
    r.add_argument("ode")
    common(r)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve1", help="integrating factor and first integral of y' = M/N")
    s.add_argument("ode")
    s.add_argument("--degree", type=int, default=2)
    common(s, search=False)
    s.set_defaults(func=cmd_solve1)

    v = sub.add_parser("verify", help="check a candidate invariant")
    v.add_argument("ode")
    v.add_argument("invariant")
    common(v, search=False)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("darboux", help="Darboux polynomials of the equation's derivation")
    d.add_argument("ode")
    d.add_argument("--degree", type=int, default=2)
    d.add_argument("--json", action="store_true")
    d.add_argument("--timeout", type=float, default=None)
    d.set_defaults(func=cmd_darboux)

    c = sub.add_parser("corpus", help="run a corpus file ('<ode> ;; expect: <invariant>' per line)")
    c.add_argument("path", nargs="?", help="corpus file (default: the shipped examples)")
    c.add_argument("--jobs", type=int, default=1)
    common(c)
    c.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except PSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
