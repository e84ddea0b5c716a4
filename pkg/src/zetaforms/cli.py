"""Command-line front end.

Every command builds a JSON-serialisable report. Exact rationals are written
as "num/den" strings; reals are objects {"value": str, "digits": int} with
the value rounded half-to-even to the stated number of significant digits.

Exit codes: 0 success or PASS, 2 invalid parameters, 3 numeric failure,
4 integrality failure, 5 FAIL, 6 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import mpmath

from . import __version__
from .arithnorm import check_lemma1, nu_p_via_phi
from .asymptotics import (
    QuadratureError,
    RootFindingError,
    RootSelectionError,
    SaddleError,
    UncertifiedWarning,
    analyze,
)
from .certify import (
    Certificate,
    Reproduction,
    Verdict,
    delta_lower_bound,
    irrationality_criterion,
    reproduce,
    theorem4_check,
)
from .exactnum import (
    CERTIFY_DIGITS,
    DEFAULT_DIGITS,
    MIN_DIGITS,
    PrecisionContext,
    decimal_field,
    factorize,
    format_rational,
)
from .formbuilder import FormParameters, SeriesBudgetError, build_form, eval_series, validate_triple, verify_identity

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3
EXIT_INTEGRALITY = 4
EXIT_FAIL = 5
EXIT_INCONCLUSIVE = 6

REPORT_DIGITS = 30
GOLDEN_PATH = Path(__file__).with_name("data") / "golden.json"
NUMERIC_ERRORS = (ArithmeticError, RootFindingError, RootSelectionError, SaddleError,
                  QuadratureError, SeriesBudgetError)


class InvalidParameters(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: Dict[str, int] = field(default_factory=dict)
    digits: int = DEFAULT_DIGITS
    nLadder: List[int] = field(default_factory=list)
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise InvalidParameters(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.format not in ("json", "csv", "text"):
            raise InvalidParameters(f"unknown format {self.format!r}")


def _real(x, digits: int = REPORT_DIGITS) -> dict:
    return decimal_field(x, digits)


def _factor_map(n: int) -> Dict[str, int]:
    return {str(p): e for p, e in sorted(factorize(n).items())}


# ----------------------------------------------------------------- commands


def cmd_form(a: int, b: int, c: int, n: int, digits: int) -> dict:
    params = FormParameters(a, b, c, n)
    ctx = PrecisionContext(digits)
    _, form = build_form(params)
    with ctx.workdps(10):
        value = eval_series(params, ctx)
        residual = verify_identity(form, ctx)
    return {
        "params": {"a": a, "b": b, "c": c, "n": n},
        "A0": format_rational(form.A0),
        "As": {str(s): format_rational(v) for s, v in sorted(form.As.items())},
        "I": _real(value, min(digits - 5, 60)),
        "residual": _real(residual, 5) if residual != 0 else {"value": "0", "digits": 5},
        "residualBound": f"1e{12 - digits}",
        "digits": digits,
    }


def cmd_lemma1(a: int, b: int, c: int, n_max: int) -> dict:
    validate_triple(a, b, c)
    if n_max < 1:
        raise InvalidParameters("n-max must be positive")
    rows = []
    for n in range(1, n_max + 1):
        params = FormParameters(a, b, c, n)
        table, form = build_form(params)
        verdict = check_lemma1(params, form, table)
        report = verdict.report
        phi_ok = all(nu_p_via_phi(p, n, c) == v for p, v in report.nuMap.items())
        rows.append({
            "n": n,
            "status": "PASS" if verdict.ok else "FAIL",
            "Pi": str(report.Pi),
            "PiFactorization": {str(p): v for p, v in sorted(report.factorization().items())},
            "D2n": str(report.D2n),
            "D2nFactorization": _factor_map(report.D2n),
            "nuMap": {str(p): v for p, v in sorted(report.nuMap.items())},
            "nuMatchesPhi": phi_ok,
            "failures": [{"kind": kind, "index": str(idx), "value": format_rational(val)}
                         for kind, idx, val in verdict.failures],
        })
    ok = all(r["status"] == "PASS" and r["nuMatchesPhi"] for r in rows)
    return {"params": {"a": a, "b": b, "c": c}, "nMax": n_max, "rows": rows,
            "status": "PASS" if ok else "FAIL"}


def cmd_asymptotics(a: int, b: int, c: int, digits: int) -> dict:
    validate_triple(a, b, c)
    ctx = PrecisionContext(digits)
    rep = analyze(a, b, c, ctx)
    d = min(REPORT_DIGITS, digits - 5)
    return {
        "params": {"a": a, "b": b, "c": c},
        "mu0": _real(rep.mu0, d),
        "mu1": _real(rep.mu1, d),
        "mu": {"re": _real(rep.mu.real, d), "im": _real(rep.mu.imag, d)},
        "eta": {"re": _real(0, d), "im": _real(rep.eta.imag, d)},
        "kappa": _real(rep.kappa, d),
        "condition19": rep.condition19,
        "kappaCertified": rep.condition19,
        "boundSimple": _real(rep.boundSimple, d),
        "boundSharp": _real(rep.boundSharp, d),
        "digits": digits,
    }


def cmd_ladder(a: int, b: int, c: int, ladder: List[int], digits: int) -> dict:
    validate_triple(a, b, c)
    if not ladder or any(n < 1 for n in ladder):
        raise InvalidParameters("the n ladder needs positive integers")
    ctx = PrecisionContext(digits)
    rep = analyze(a, b, c, ctx, with_eta=False)
    rows = []
    with ctx.workdps(10):
        for n in ladder:
            value = eval_series(FormParameters(a, b, c, n), ctx)
            rate = mpmath.log(abs(value)) / n
            rows.append({"n": n, "logAbsI_over_n": format(float(rate), ".12g"),
                         "kappa": format(float(rep.kappa), ".12g"),
                         "gap": format(float(rate - rep.kappa), ".12g")})
    return {"params": {"a": a, "b": b, "c": c}, "kappaCertified": rep.condition19, "rows": rows}


def _golden_key(rep: Reproduction) -> str:
    return f"theorem{rep.theorem}"


def _golden_values(rep: Reproduction) -> Dict[str, Dict[str, str]]:
    out = {}
    for item in rep.items:
        cert = item.certificate
        if cert is None:
            continue
        vals = {}
        for name in ("kappa", "varpi", "criterionValue", "deltaBound"):
            v = getattr(cert, name)
            if v is not None:
                vals[name] = decimal_field(v, REPORT_DIGITS)["value"]
        out[item.label] = vals
    return out


def compare_golden(rep: Reproduction, golden: dict) -> List[str]:
    """Labels whose values differ from the stored 30-digit ones by more than rounding."""
    stored = golden.get(_golden_key(rep), {})
    mismatches = []
    for label, vals in _golden_values(rep).items():
        ref = stored.get(label)
        if ref is None:
            mismatches.append(f"{label}: no stored values")
            continue
        for name, text in vals.items():
            if name not in ref:
                mismatches.append(f"{label}/{name}: no stored value")
                continue
            x, y = mpmath.mpf(text), mpmath.mpf(ref[name])
            if abs(x - y) > abs(y) * mpmath.mpf(10) ** (2 - REPORT_DIGITS):
                mismatches.append(f"{label}/{name}: {text} != {ref[name]}")
    return mismatches


def load_golden(path: Path = GOLDEN_PATH) -> dict:
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def cmd_certify(args, digits: int) -> dict:
    ctx = PrecisionContext(digits)
    if args.theorem is not None:
        rep = reproduce(args.theorem, ctx, extra_m=tuple(args.extra_m or ()))
        out = rep.to_dict()
        if args.regenerate_golden:
            golden = load_golden(args.golden_path)
            golden[_golden_key(rep)] = _golden_values(rep)
            _atomic_write(args.golden_path, json.dumps(golden, indent=2, sort_keys=True) + "\n")
            out["golden"] = {"regenerated": str(args.golden_path)}
        else:
            golden = load_golden(args.golden_path)
            if _golden_key(rep) in golden:
                mismatches = compare_golden(rep, golden)
                out["golden"] = {"checked": True, "mismatches": mismatches}
                if mismatches:
                    out["verdict"] = Verdict.FAIL.value
            else:
                out["golden"] = {"checked": False}
        return out
    if args.a is None:
        raise InvalidParameters("certify needs --theorem N, -a -b -c, or -a -c")
    if args.theorem4:
        return theorem4_check(args.a, ctx).to_dict(REPORT_DIGITS)
    if args.c is None:
        raise InvalidParameters("certify needs -c together with -a")
    if args.b is None:
        cert: Certificate = delta_lower_bound(args.a, args.c, ctx, target=args.target)
    else:
        cert = irrationality_criterion(args.a, args.b, args.c, ctx)
    return cert.to_dict(REPORT_DIGITS)


# ------------------------------------------------------------------- output


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flatten(obj, prefix: str = "") -> List[tuple]:
    if isinstance(obj, dict):
        if set(obj) == {"value", "digits"}:
            return [(prefix, obj["value"])]
        rows = []
        for k, v in obj.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return rows
    if isinstance(obj, list):
        rows = []
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}[{i}]"))
        return rows
    return [(prefix, obj)]


def render(report: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        if command == "ladder":
            writer.writerow(["n", "logAbsI_over_n", "kappa", "gap"])
            for row in report["rows"]:
                writer.writerow([row["n"], row["logAbsI_over_n"], row["kappa"], row["gap"]])
        else:
            writer.writerow(["key", "value"])
            writer.writerows(_flatten(report))
        return buf.getvalue()
    for key, value in _flatten(report):
        buf.write(f"{key}: {value}\n")
    return buf.getvalue()


def exit_code_for(command: str, report: dict) -> int:
    if command == "lemma1":
        return EXIT_OK if report["status"] == "PASS" else EXIT_INTEGRALITY
    if command == "certify":
        verdict = report.get("verdict")
        return {"PASS": EXIT_OK, "FAIL": EXIT_FAIL}.get(verdict, EXIT_INCONCLUSIVE)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def _digits_default(command: str) -> int:
    env = os.environ.get("ZETAFORMS_DIGITS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidParameters(f"ZETAFORMS_DIGITS must be an integer, got {env!r}")
    return CERTIFY_DIGITS if command == "certify" else DEFAULT_DIGITS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetaforms",
        description="Linear forms in odd zeta values: construction, integrality, asymptotics, certificates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help="working precision in decimal digits (env ZETAFORMS_DIGITS; default 64, certify 80)")
    common.add_argument("--output", "-o", default=None, help="write the report here (atomically) instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    def triple(p, need_b=True, need_c=True):
        p.add_argument("-a", type=int, required=True)
        p.add_argument("-b", type=int, required=need_b, default=None)
        p.add_argument("-c", type=int, required=need_c, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("form", parents=[common], help="coefficients A_0, A_s, the value I_n and the identity residual")
    triple(p)
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("lemma1", parents=[common], help="exact integrality of the cleared coefficients for n = 1..n-max")
    triple(p)
    p.add_argument("--n-max", type=int, default=6)

    p = sub.add_parser("asymptotics", parents=[common], help="mu_0, mu_1, mu, eta, kappa and the coefficient bounds")
    triple(p)

    p = sub.add_parser("ladder", parents=[common], help="log|I_n|/n against kappa over an n ladder")
    triple(p)
    p.add_argument("--n", dest="ladder", type=int, nargs="+", default=[10, 20, 40])

    p = sub.add_parser("certify", parents=[common], help="irrationality and dimension certificates")
    p.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), default=None)
    p.add_argument("-a", type=int, default=None)
    p.add_argument("-b", type=int, default=None)
    p.add_argument("-c", type=int, default=None)
    p.add_argument("--target", type=int, default=None, help="claimed dimension lower bound for -a -c")
    p.add_argument("--theorem4", action="store_true", help="with -a: search c and compare with 0.395 log a")
    p.add_argument("--extra-m", type=int, nargs="*", default=None,
                   help="with --theorem 4: also check the log-scale bound for these m")
    p.add_argument("--golden-path", type=Path, default=GOLDEN_PATH)
    p.add_argument("--regenerate-golden", action="store_true",
                   help="rewrite the stored 30-digit reference values for this theorem")
    return parser


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        digits = args.digits if args.digits is not None else _digits_default(args.command)
        config = RunConfig(command=args.command, digits=digits, output=args.output, format=args.format,
                           params={k: getattr(args, k) for k in ("a", "b", "c", "n")
                                   if getattr(args, k, None) is not None},
                           nLadder=list(getattr(args, "ladder", []) or []))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UncertifiedWarning)
            if config.command == "form":
                report = cmd_form(args.a, args.b, args.c, args.n, digits)
            elif config.command == "lemma1":
                report = cmd_lemma1(args.a, args.b, args.c, args.n_max)
            elif config.command == "asymptotics":
                report = cmd_asymptotics(args.a, args.b, args.c, digits)
            elif config.command == "ladder":
                report = cmd_ladder(args.a, args.b, args.c, config.nLadder, digits)
            else:
                report = cmd_certify(args, digits)
    except (InvalidParameters, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = render(report, config.format, config.command)
    if config.output:
        _atomic_write(config.output, text)
    else:
        stdout.write(text)
    return exit_code_for(config.command, report)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
