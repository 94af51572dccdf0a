"""twistlab command line: build twists, run checks and audits, emit canonical JSON."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core_algebra import DEFAULT_ORDER, AlgebraError, ResourceBudgetExceeded, get_term_budget, rational, set_term_budget
from . import verify as V
from .rep import rep_cocycle_check, rep_qybe_check
from .reports import VerificationReport
from .twists import (
    BUILDERS,
    ParamSet,
    TwistElement,
    build_twist,
    corrupt_cartan,
    corrupt_drop_extension,
    corrupt_sign_flip,
    make_plan,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

BUILD_KINDS = ("jordanian", "chain", "rotated-chain", "parabolic", "sl4-p1", "sl4-p3")
CHECKS = ("cocycle", "counit", "qybe", "cybe", "relations", "lemma", "carrier")
PARABOLIC_KINDS = {"parabolic"}


class UsageError(Exception):
    pass


def canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_n_range(text: str) -> list[int]:
    """'4' -> [4]; '3..6' -> [3, 4, 5, 6]."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(text)]
    except ValueError:
        raise UsageError(f"bad --n value {text!r}") from None
    if not out or min(out) < 1:
        raise UsageError(f"bad --n value {text!r}")
    return out


def parse_rationals(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [v.strip() for v in text.split(",") if v.strip()]


def make_params(n: int, args) -> ParamSet | None:
    xi, zeta = parse_rationals(args.xi), parse_rationals(args.zeta)
    if xi is None and zeta is None:
        return None
    try:
        return ParamSet.build(make_plan(n), xi, zeta)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad deformation parameter: {exc}") from None


def _twist_from_args(args, order: int) -> TwistElement:
    if getattr(args, "file", None):
        try:
            tw = TwistElement.from_json(Path(args.file).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read twist file {args.file}: {exc}") from None
        if order is not None and order != tw.order:
            tw = tw.with_order(order)
        return tw
    if args.n is None or args.twist is None:
        raise UsageError("give --n and --twist, or --file")
    return build_twist(args.twist, args.n, order, make_params(args.n, args))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _report_doc(reports: list[VerificationReport], timings: bool) -> dict:
    failed = [r.check for r in reports if not r.passed]
    return {
        "reports": [r.to_payload(timings) for r in reports],
        "summary": {"total": len(reports), "passed": len(reports) - len(failed), "failed": failed},
    }


def _finish(reports: list[VerificationReport], args) -> int:
    if args.text:
        for r in reports:
            print(r.line())
    else:
        _emit(canonical(_report_doc(reports, args.timings)), args.out)
    if args.text and args.out:
        Path(args.out).write_text(canonical(_report_doc(reports, args.timings)) + "\n", encoding="utf-8")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    tw = build_twist(args.twist, args.n, args.order, make_params(args.n, args))
    if args.corrupt:
        plan = make_plan(args.n)
        if args.corrupt == "sign-flip":
            tw = corrupt_sign_flip(tw)
        elif args.corrupt == "drop-extension":
            tw = corrupt_drop_extension(tw)
        else:
            tw = corrupt_cartan(tw, plan)
    summary = [f"{tw.kind}: n={tw.n}, order={tw.order}, {len(tw.factors)} factors"]
    summary += [f"  {f.name}: {f}" for f in tw.factors]
    summary.append(V.carrier(tw).summary())
    # keep stdout pure JSON when no file is requested
    sink = sys.stdout if args.out else sys.stderr
    print("\n".join(summary), file=sink)
    _emit(tw.to_json(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    order = args.order
    check = args.check
    reports: list[VerificationReport] = []
    if check in ("relations", "lemma"):
        if args.n is None:
            raise UsageError(f"{check} needs --n")
        plan = make_plan(args.n)
        params = make_params(args.n, args)
        N = order or DEFAULT_ORDER
        if check == "relations":
            reports = V.relations_suite(plan, params, N)
        else:
            if not plan.p:
                reports = V.b2_lemma_suite(N)
            else:
                ss = [args.s] if args.s else range(1, plan.p + 1)
                ws = V.Workspace(plan, params, N)
                for s in ss:
                    reports += V.lemma_suite(s, plan, params, N, ws=ws)
        return _finish(reports, args)

    if not args.file:
        order = order or DEFAULT_ORDER
    tw = _twist_from_args(args, order)
    if check == "cocycle":
        reports = [V.cocycle_check(tw)]
    elif check == "counit":
        reports = [V.counit_check(tw)]
    elif check == "qybe":
        reports = [V.qybe_check(V.r_matrix(tw))]
    elif check == "cybe":
        reports = [V.cybe_check(V.classical_r(tw))]
    elif check == "carrier":
        reports = [V.carrier_check(tw, expect_parabolic=tw.kind in PARABOLIC_KINDS)]
    return _finish(reports, args)


def cmd_audit(args) -> int:
    ns = parse_n_range(args.n)
    reports: list[VerificationReport] = []
    table = []
    for n in ns:
        rs = V.audit(n, make_params(n, args) if len(ns) == 1 else None, order=args.order)
        table.append((n, sum(r.passed for r in rs), len(rs)))
        reports += rs
    if len(ns) > 1:
        print("\n".join(f"n={n:<3} {p}/{t} pass" for n, p, t in table), file=sys.stderr)
    return _finish(reports, args)


def cmd_rep_check(args) -> int:
    try:
        t = rational(args.t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --t value {args.t!r}") from None
    # the representation path only uses the factor list, so the series order is irrelevant
    tw = _twist_from_args(args, None if args.file else 1)
    reports = [rep_cocycle_check(tw, t_value=t), rep_qybe_check(tw, t_value=t)]
    return _finish(reports, args)


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, twist: bool = True) -> None:
    p.add_argument("--n", type=int, help="rank parameter: the algebra is gl(n) / sl(n)")
    if twist:
        p.add_argument("--twist", choices=sorted(BUILDERS), help="twist family")
        p.add_argument("--file", help="read a serialized twist instead of building one")
    p.add_argument("--xi", help="link parameters as comma-separated p/q values")
    p.add_argument("--zeta", help="quasi-Jordanian parameters as comma-separated p/q values")
    _output(p)


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON document here instead of stdout")
    p.add_argument("--text", action="store_true", help="print one line per check instead of JSON")
    p.add_argument("--timings", action="store_true", help="include wall time (ms) in each report")
    p.add_argument("--budget", type=int, help="term budget for intermediate results")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistlab", description="Exact verification of chains of twists for gl(n).")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a twist and write it as canonical JSON")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--twist", choices=BUILD_KINDS, required=True)
    b.add_argument("--order", type=int, default=DEFAULT_ORDER)
    b.add_argument("--xi")
    b.add_argument("--zeta")
    b.add_argument("--corrupt", choices=("sign-flip", "drop-extension", "wrong-cartan"),
                   help="apply a deliberate corruption to the first link (negative control)")
    b.add_argument("--out")
    b.add_argument("--budget", type=int)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run one check")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("--order", type=int)
    v.add_argument("--s", type=int, help="lemma: restrict to one quasi-Jordanian index")
    _common(v)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("audit", help="adjudicate every claim for one n or a range such as 3..6")
    a.add_argument("--n", required=True)
    a.add_argument("--order", type=int, default=2)
    a.add_argument("--xi")
    a.add_argument("--zeta")
    _output(a)
    a.set_defaults(func=cmd_audit)

    r = sub.add_parser("rep-check", help="exact cocycle and QYBE in the fundamental representation")
    r.add_argument("--t", default="1", help="value substituted for t, as p/q")
    _common(r)
    r.set_defaults(func=cmd_rep_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    previous = get_term_budget()
    if getattr(args, "budget", None):
        set_term_budget(args.budget)
    try:
        return args.func(args)
    except ResourceBudgetExceeded as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, AlgebraError) as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_term_budget(previous)


if __name__ == "__main__":
    sys.exit(main())
