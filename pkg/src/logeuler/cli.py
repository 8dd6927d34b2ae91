"""Command-line frontend: ``logeuler <subcommand> ...``.

Cycle mini-language (``--cycle``, repeatable)::

    cycle   := body [";" mult]
    body    := "zero" | "conormal:" expr | "raw:" chart ":" expr ("," expr)*
    mult    := signed integer (default 1)

``expr`` uses the polynomial grammar of :mod:`logeuler.polyring`; conormal
equations are read in the base chart, raw generators in the named chart
(id such as ``Z`` or ``X|W``, or its index) with fibre variables
``eta_<coord>`` / ``xi_<coord>``.

Exit codes: 0 success, 2 input error, 3 non-transverse intersection,
4 resource budget exhausted, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import logdr
from .chow import Space, chern_cotangent, chern_log_cotangent, euler_open, euler_open_direct
from .elimination import DEFAULT_BUDGET
from .errors import InputError, InvariantError, LogEulerError
from .sscycle import (CountReport, LagCycle, LogSection, chart_list, conormal_cycle, gamma_dlogf,
                      intersect_count, raw_cycle, sharp_family, zero_section)

SCHEMA = 1


def _split_mult(text: str) -> Tuple[str, int]:
    body, sep, tail = text.rpartition(";")
    if sep:
        try:
            return body.strip(), int(tail.strip())
        except ValueError:
            raise InputError(f"bad multiplicity {tail!r} in cycle {text!r}") from None
    return text.strip(), 1


def parse_cycle(X: Space, text: str, budget: int = DEFAULT_BUDGET) -> LagCycle:
    body, mult = _split_mult(text)
    if body == "zero":
        return zero_section(X, mult)
    kind, sep, rest = body.partition(":")
    if not sep or not rest.strip():
        raise InputError(f"cannot read cycle {text!r}; expected zero, conormal:<expr> or raw:<chart>:<gens>")
    if kind == "conormal":
        return conormal_cycle(X, rest, multiplicity=mult, budget=budget)
    if kind == "raw":
        chart, sep, gens = rest.partition(":")
        if not sep:
            raise InputError(f"raw cycle {text!r} needs raw:<chart>:<generators>")
        return raw_cycle(X, chart.strip(), [g for g in gens.split(",") if g.strip()],
                         multiplicity=mult, budget=budget)
    raise InputError(f"unknown cycle kind {kind!r}")


def _cycles(X: Space, specs: Optional[Sequence[str]], budget: int) -> LagCycle:
    specs = specs or ["zero"]
    total = LagCycle(X)
    for s in specs:
        total = total + parse_cycle(X, s, budget)
    return total


def _fraction_list(text: str, what: str) -> List[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read {what} {text!r}") from None


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot read {what} {text!r}") from None


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- subcommands --------------------------------------------------------------

def _report_text(report: CountReport) -> List[str]:
    lines = []
    for comp in report.components:
        lines.append(f"component {comp.label}  n_v={comp.n_v}  degree={comp.degree}")
        lines.append(f"  {'chart':<10} {'stratum':<22} count")
        for s in comp.strata:
            lines.append(f"  {s.chart:<10} {s.stratum:<22} {s.count}")
            for p in s.points or []:
                keys = list(p)
                base = [k for k in keys if not k.startswith(("eta_", "xi_"))]
                fib = [k for k in keys if k.startswith(("eta_", "xi_"))]
                lines.append(f"    point ({','.join(base)};{','.join(fib)}) = "
                             f"({','.join(p[k] for k in base)};{','.join(p[k] for k in fib)})")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    lines.append(f"total {report.total}")
    return lines


def cmd_count(args, euler_mode: bool):
    X = Space.parse(args.space, args.divisor)
    cyc = _cycles(X, args.cycle, args.budget)
    if args.f is None:
        raise InputError("--f is required")
    section = gamma_dlogf(X, args.f, Fraction(args.scale))
    if euler_mode and section.is_zero:
        raise InputError("f must be non-constant and the scale nonzero for the log Euler formula")
    report = intersect_count(cyc, section, rotation=args.rotation, budget=args.budget)
    out = report.to_dict()
    extra = []
    if euler_mode:
        out["euler"] = report.total
        if args.cycle in (None, [], ["zero"]):
            expect = (-1) ** X.dim * euler_open(X)
            out["expected_from_chern"] = expect
            extra.append(f"(-1)^n chi(U) from Chern classes: {expect}")
            if expect != report.total:
                raise InvariantError(f"zero-section count {report.total} != (-1)^n chi(U) = {expect}")
    return out, _report_text(report) + extra


def cmd_chern(args):
    X = Space.parse(args.space, args.divisor)
    c_log = chern_log_cotangent(X)
    c = chern_cotangent(X)
    chi = euler_open(X)
    direct = euler_open_direct(X)
    if chi != direct:
        raise InvariantError(f"chi(U) routes disagree: {chi} vs {direct}")
    out = {"space": repr(X), "chern_log": str(c_log), "chern_cotangent": str(c),
           "euler_open": chi, "dim": X.dim}
    lines = [f"space {X!r}", f"c(Omega^1(log D)) = {c_log}", f"c(Omega^1_X) = {c}",
             f"chi(U) = {chi}"]
    return out, lines


def cmd_drstalk(args):
    lam = _fraction_list(args.lam, "lambda")
    if args.shift is None:
        shift = [0] * len(lam)
    else:
        shift = _int_list(args.shift, "shift")
    if args.k is not None:
        if len(lam) == 1 and args.k > 1:
            lam = lam * args.k
        if len(shift) == 1 and args.k > 1:
            shift = shift * args.k
        if len(lam) != args.k or len(shift) != args.k:
            raise InputError(f"--k {args.k} does not match lambda/shift lengths")
    data = logdr.Rank1Data(lam, shift, args.nfree)
    st = logdr.stalk_dr(data)
    I = [l for l, a in enumerate(data.a) if a < 0]
    consistent = all(a <= -1 or a >= 0 for a in data.a)
    expected = logdr.expected_stalk(data, I) if consistent else None
    if expected is not None and expected != st:
        raise InvariantError(f"stalk {st} disagrees with topological prediction {expected}")
    if data.k and len(I) == data.k:
        verdict = "j_! stalk"
    elif not I:
        verdict = "Rj_* stalk"
    else:
        verdict = f"mixed: j_! along {I}, Rj_* elsewhere"
    q0, jumps = logdr.stabilization_threshold(data)
    roots = [[_fmt(r) for r in logdr.b_roots_shifted(data, l)] for l in range(data.k)]
    out = {"dims": {str(j): d for j, d in st.as_dict().items()}, "verdict": verdict,
           "I": I, "q0": q0, "jumps": jumps, "b_roots": roots}
    lines = [f"stalk: {st}", f"verdict: {verdict}", f"q0 = {q0}, jumps = {jumps}",
             f"b-roots: {roots}"]
    return out, lines


def cmd_bcheck(args):
    if args.gen:
        res = logdr.weyl_monomial_generation(args.v, args.gen, args.depth)
        out = {"mode": args.gen, "v": args.v, "result": res.value, "witness": res.witness}
        return out, [f"{args.gen}(v={args.v}): {str(res.value).lower()} ({res.witness})"]
    if args.b is None or args.P is None:
        b, P = logdr.monomial_b_function(args.w)
        b = args.b or str(b)
        P = args.P or P
    else:
        b, P = args.b, args.P
    ok = logdr.verify_b_identity(args.w, b, P)
    out = {"w": args.w, "b": str(b), "P": P, "valid": ok}
    return out, [f"{P} * y^(s+{args.w}) == ({b}) * y^s : {'valid' if ok else 'invalid'}"]


def cmd_sharp(args):
    X = Space.parse(args.space, args.divisor)
    cyc = _cycles(X, args.cycle, args.budget)
    if not args.f:
        raise InputError("--f is required")
    fam = sharp_family(cyc, args.f, args.budget)
    value = Fraction(args.s)
    charts = []
    lines = []
    for ch in chart_list(X):
        comps = []
        for i, comp in enumerate(cyc.components):
            I = fam.ideal(i, ch)
            F = fam.fiber([value] * len(fam.params), i, ch)
            comps.append({"label": comp.label, "family": [str(g) for g in I.groebner(budget=args.budget)],
                          "fiber": [str(g) for g in F.groebner(budget=args.budget)]})
            lines.append(f"chart {ch.id} [{comp.label}] family: " +
                         ", ".join(str(g) for g in I.groebner(budget=args.budget)))
            lines.append(f"chart {ch.id} [{comp.label}] fiber s={_fmt(value)}: " +
                         ", ".join(str(g) for g in F.groebner(budget=args.budget)))
        charts.append({"chart": ch.id, "components": comps})
    report = intersect_count(fam.fiber_cycle([value] * len(fam.params)), LogSection.zero(X),
                             budget=args.budget) if value else None
    out = {"params": list(fam.params), "s": _fmt(value), "charts": charts}
    if report is not None:
        out["count_with_zero_section"] = report.total
        lines.append(f"fiber at s={_fmt(value)} meets the zero section in {report.total} point(s)")
    return out, lines


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logeuler", description="Log Euler characteristics and log de Rham stalks.")
    sub = p.add_subparsers(dest="command", required=True)

    def geometry(sp, need_f=True):
        sp.add_argument("--space", required=True, help="p1, p2, p1xp1, ...")
        sp.add_argument("--divisor", default="toric", help="toric | none | comma list (X,Z | 0,inf,1 | pt@i:q)")
        sp.add_argument("--cycle", action="append", help="zero | conormal:<expr> | raw:<chart>:<gens>[;mult]")
        sp.add_argument("--f", help="log function, e.g. X/Y or x/(x-1)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Groebner step budget")

    for name, helptext in (("euler", "chi(U, F) via the log index formula"),
                           ("count", "stratified intersection count with Gamma_{s dlog f}")):
        sp = sub.add_parser(name, help=helptext)
        geometry(sp)
        sp.add_argument("--scale", default="1", help="rational scale s of s*dlog f")
        sp.add_argument("--rotation", type=int, default=0, help="rotate chart enumeration")
    sp = sub.add_parser("chern", help="Chern classes and chi(U)")
    sp.add_argument("--space", required=True)
    sp.add_argument("--divisor", default="toric")
    sp = sub.add_parser("sharp", help="the sharp family and a fiber")
    geometry(sp)
    sp.add_argument("--s", default="1", help="parameter value for the fiber")
    sp = sub.add_parser("drstalk", help="rank-one log de Rham stalk")
    sp.add_argument("--k", type=int, help="number of boundary components (broadcasts scalars)")
    sp.add_argument("--lambda", dest="lam", default="0", help="comma list in (-1,0]")
    sp.add_argument("--shift", help="comma list of integer shifts a_l")
    sp.add_argument("--nfree", type=int, default=0)
    sp = sub.add_parser("bcheck", help="b-function identity or monomial generation check")
    sp.add_argument("--w", type=int, default=1)
    sp.add_argument("--b", help="candidate b(s)")
    sp.add_argument("--P", help="operator word, e.g. d^2 or y*d")
    sp.add_argument("--gen", choices=["star", "shriekstar"], help="run the generation check instead")
    sp.add_argument("--v", type=int, default=1)
    sp.add_argument("--depth", type=int, default=logdr.DEFAULT_DEPTH)
    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    handlers = {
        "euler": lambda a: cmd_count(a, True),
        "count": lambda a: cmd_count(a, False),
        "chern": cmd_chern,
        "drstalk": cmd_drstalk,
        "bcheck": cmd_bcheck,
        "sharp": cmd_sharp,
    }
    try:
        out, lines = handlers[args.command](args)
    except LogEulerError as e:
        return _fail(args, e.category, str(e), e.exit_code, stdout, stderr)
    except RecursionError as e:
        return _fail(args, "resource", f"recursion limit: {e}", 4, stdout, stderr)
    except Exception as e:  # unexpected failures are reported as invariant breaches
        return _fail(args, "internal", f"{type(e).__name__}: {e}", 5, stdout, stderr)
    if args.json:
        out = {"schema": SCHEMA, "command": args.command, **out}
        print(json.dumps(out, indent=2), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
    return 0


def _fail(args, category, message, code, stdout, stderr) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"schema": SCHEMA, "command": args.command,
                          "error": {"category": category, "message": message}}, indent=2), file=stdout)
    print(f"error [{category}]: {message}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
