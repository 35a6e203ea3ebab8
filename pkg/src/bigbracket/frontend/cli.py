"""Command-line driver: ``bigbracket <command> ...``.

Exit codes: 0 verdict true (or a plain computation finished), 1 verdict
false, 2 input error, 3 precondition or domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Sequence

from ..gauge import gauge_equivalence
from ..structures import CheckReport, classify, derived_bracket, master_residual
from ..supercore import BigBracketError, Bidegree, GeneratorSpace, PreconditionError, SuperPoly, split_bidegrees
from ..symplectic import poisson_bracket
from ..twisting import TwistInput, closed_form_twist, mc_residual, twist
from .parser import ParseError, parse_expression
from .printer import print_expression
from .sourcefile import SourceFile, load_source

__all__ = ["main", "run_command", "evaluate_check", "build_parser"]

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(BigBracketError):
    """Bad command-line input that is not a parse error."""


def evaluate_check(src: SourceFile) -> CheckReport:
    """Verdict for a source file.

    With a twist datum the verdict is the twisted Maurer-Cartan equation of
    the theta block; otherwise it is the master equation.  The classification
    always describes the effective (twisted) structure.
    """
    effective = src.effective_theta
    kind = classify(effective).classification
    w = src.twist_input
    if w is None:
        report = master_residual(effective)
    else:
        R = mc_residual(w, src.theta)
        residuals = split_bidegrees(R) or {_mc_key(w): R}
        report = CheckReport.from_residuals(residuals)
    report.classification = kind
    return report


def _mc_key(w: TwistInput) -> Bidegree:
    return Bidegree(0, 3) if w.is_form else Bidegree(3, 0)


# -- output -------------------------------------------------------------------

def _residual_map(report: CheckReport) -> Dict[str, str]:
    return {str(d): print_expression(R) for d, R in sorted(report.residuals.items())}


def _components(T) -> Dict[str, str]:
    return {name: print_expression(F) for name, F, _ in T.named()}


def _emit(payload: dict, plain: bool, out) -> None:
    if not plain:
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    for key, value in payload.items():
        if isinstance(value, dict):
            if not value:
                out.write(f"{key}: {{}}\n")
            for k, v in value.items():
                out.write(f"{key} {k}: {_plain_value(v)}\n")
        else:
            out.write(f"{key}: {_plain_value(value)}\n")


def _plain_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_plain_value(x)}" for k, x in v.items())
    return str(v)


# -- commands -----------------------------------------------------------------

def _space_from_flag(args) -> GeneratorSpace:
    text = getattr(args, "space", None)
    if text is None:
        raise InputError("this command needs --space n,r")
    try:
        n, r = (int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"--space expects 'n,r', got {text!r}") from None
    if n < 0 or r < 0:
        raise InputError("--space values must be nonnegative")
    return GeneratorSpace(n, r)


def _load(args) -> SourceFile:
    try:
        src = load_source(args.file)
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror or exc}") from None
    flag = getattr(args, "space", None)
    if flag is not None and _space_from_flag(args) != src.space:
        raise InputError(f"--space {flag} contradicts the file's space {src.space.n},{src.space.r}")
    return src


def _expr(text: str, src_or_space) -> SuperPoly:
    if isinstance(src_or_space, SourceFile):
        return parse_expression(text, src_or_space.space, src_or_space.bindings)
    return parse_expression(text, src_or_space)


def cmd_bracket(args) -> dict:
    sp = _space_from_flag(args)
    A, B = _expr(args.a, sp), _expr(args.b, sp)
    return {"verdict": None, "classification": None, "residuals": {},
            "result": print_expression(poisson_bracket(A, B))}


def _report_payload(report: CheckReport) -> dict:
    payload = {"verdict": report.verdict,
               "classification": str(report.classification) if report.classification else None,
               "residuals": _residual_map(report)}
    if report.details:
        payload["details"] = {k: print_expression(v) for k, v in report.details.items()}
    return payload


def cmd_check(args) -> dict:
    src = _load(args)
    report = evaluate_check(src)
    payload = _report_payload(report)
    if src.expect_verdict is not None or src.expect_classification is not None:
        matches = ((src.expect_verdict is None or src.expect_verdict == report.verdict)
                   and (src.expect_classification is None or src.expect_classification == report.classification))
        payload["expectation_met"] = matches
    return payload


def cmd_classify(args) -> dict:
    src = _load(args)
    report = classify(src.effective_theta)
    payload = _report_payload(report)
    payload["components"] = _components(src.effective_theta)
    payload["exit_on_verdict"] = False
    return payload


def _twist_input(args, src) -> TwistInput:
    if args.form is not None:
        return TwistInput.form(_expr(args.form, src))
    return TwistInput.bivector(_expr(args.bivector, src))


def cmd_twist(args) -> dict:
    src = _load(args)
    w = _twist_input(args, src)
    base = src.effective_theta
    series = twist(base, w)
    closed = closed_form_twist(base, w)
    agree = series == closed
    diff = {} if agree else {
        f"{name}": print_expression(a - b)
        for (name, a, _), (_, b, _) in zip(series.named(), closed.named()) if a != b}
    return {"verdict": agree, "classification": str(classify(series).classification),
            "residuals": {}, "components": _components(series), "details": diff}


def cmd_mc(args) -> dict:
    src = _load(args)
    if args.pi is not None:
        w = TwistInput.bivector(_expr(args.pi, src))
    else:
        w = TwistInput.form(_expr(args.omega, src))
    R = mc_residual(w, src.effective_theta)
    report = CheckReport.from_residuals(split_bidegrees(R) or {_mc_key(w): R})
    report.classification = classify(twist(src.effective_theta, w)).classification
    return _report_payload(report)


def cmd_gauge(args) -> dict:
    sp = _space_from_flag(args)
    pi = TwistInput.bivector(_expr(args.pi, sp))
    omega = TwistInput.form(_expr(args.omega, sp))
    phi = _expr(args.phi, sp) if args.phi is not None else sp.zero()
    res = gauge_equivalence(pi, omega, phi)
    payload = _report_payload(res.report)
    payload["classification"] = str(classify(res.lhs).classification)
    payload["result"] = {
        "transformed_pi": print_expression(res.transformed_pi.generator),
        "mc_before": print_expression(res.mc_before),
        "mc_after": print_expression(res.mc_after),
    }
    return payload


def cmd_derived(args) -> dict:
    src = _load(args)
    X, Y = _expr(args.x, src), _expr(args.y, src)
    return {"verdict": None, "classification": None, "residuals": {},
            "result": print_expression(derived_bracket(X, src.effective_theta, Y))}


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--plain", action="store_true", default=argparse.SUPPRESS,
                        help="plain text instead of JSON")
    common.add_argument("--space", metavar="n,r", default=argparse.SUPPRESS,
                        help="generator space for inline expressions")

    parser = argparse.ArgumentParser(prog="bigbracket", parents=[common],
                                     description="Exact big-bracket calculus and structure checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", parents=[common], help="big bracket {A, B}")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_bracket)

    for name, fn, text in (("check", cmd_check, "verify a structure file"),
                           ("classify", cmd_classify, "classify a structure file")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.set_defaults(run=fn)

    p = sub.add_parser("twist", parents=[common], help="twist by a 2-form or bivector")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--form")
    g.add_argument("--bivector")
    p.add_argument("file")
    p.set_defaults(run=cmd_twist)

    p = sub.add_parser("mc", parents=[common], help="twisted Maurer-Cartan residual")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pi")
    g.add_argument("--omega")
    p.add_argument("file")
    p.set_defaults(run=cmd_mc)

    p = sub.add_parser("gauge", parents=[common], help="gauge equivalence of a twisted Poisson pair")
    p.add_argument("--pi", required=True)
    p.add_argument("--omega", required=True)
    p.add_argument("--phi")
    p.set_defaults(run=cmd_gauge)

    p = sub.add_parser("derived", parents=[common], help="derived bracket {{X, Θ}, Y}")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("file")
    p.set_defaults(run=cmd_derived)
    return parser


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    plain = getattr(args, "plain", False)
    start = time.perf_counter()
    try:
        payload = args.run(args)
    except (ParseError, InputError) as exc:
        err.write(f"bigbracket: input error: {exc}\n")
        return EXIT_INPUT
    except PreconditionError as exc:
        err.write(f"bigbracket: precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except BigBracketError as exc:
        err.write(f"bigbracket: input error: {exc}\n")
        return EXIT_INPUT
    exit_on_verdict = payload.pop("exit_on_verdict", True)
    ordered = {"command": " ".join(argv)}
    ordered.update(payload)
    ordered["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    _emit(ordered, plain, out)
    if exit_on_verdict and ordered.get("verdict") is False:
        return EXIT_FALSE
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
