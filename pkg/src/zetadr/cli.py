"""zetadr command line.

    zetadr eval --fn zeta --s -1
    zetadr identity --id T1 --format json
    zetadr sweep --ids T2,T4 --b-values 1/2,1,2 --q-values 1,2 --format csv
    zetadr bernoulli --n 12
    zetadr dr --family gamma --trunc 4 --dump
    zetadr ftr --family rzf --sigma 2 --tau 0
    zetadr report --output ledger.md

Exit status: 0 success, 1 failed --assert gate, 2 domain error, 3 non-convergence.
All numbers are printed as decimal strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc

from . import exact, reporting
from .dr import FAMILIES, TEST_FUNCTION_KINDS, TestFn, build_dr, inner_product
from .errors import DomainError, NotConverged, ResourceError
from .family import FUNCTIONS, NORMALIZATIONS, EvalRequest, evaluate, ftr_reference
from .identities import THEOREMS, TheoremCase, run_theorem, sweep
from .numerics import DIGITS_ENV, DISPLAY_DIGITS, GUARD_DIGITS, default_digits, default_tolerance, fmt, to_mp
from .quadrature import FTR_FAMILIES, ftr_check

FORMATS = ("json", "csv", "md", "plain")
MIN_DIGITS = 50
EXIT_OK, EXIT_ASSERT, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3
ASSERT_TARGETS = {
    # gate name -> residual it checks
    "rhs": "residual_value_vs_rhs",
    "dr": "residual_dr_vs_rhs",
    "value": "residual_value_vs_dr",
}


@dataclass(frozen=True)
class CliConfig:
    digits: int = 64
    format: str | None = None
    output: str | None = None

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise DomainError(f"--digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.format is not None and self.format not in FORMATS:
            raise DomainError(f"unknown format {self.format!r}; expected one of {FORMATS}")


def _digits_arg(text):
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if d < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"must be >= {MIN_DIGITS}")
    return d


def _number(text):
    """'2', '-1', '1/2', '0.25', '2,1' (re,im) -> Fraction or mpmath number."""
    text = text.strip()
    if "," in text:
        re_, im_ = text.split(",", 1)
        re_, im_ = _number(re_), _number(im_)
        if to_mp(im_) == 0:
            return re_
        return mpc(to_mp(re_), to_mp(im_))
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return mpmath.mpmathify(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _number_list(text):
    return [_number(t) for t in text.split(";" if ";" in text else ",") if t.strip()]


def _add_common(p, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--digits", type=_digits_arg, default=default,
                   help=f"working precision in decimal digits (>= {MIN_DIGITS}; default ${DIGITS_ENV} or 64)")
    p.add_argument("--format", choices=FORMATS, default=default, help="output format")
    p.add_argument("--output", default=default, help="write to this file instead of stdout")
    p.add_argument("--display", type=int, default=argparse.SUPPRESS if suppress else DISPLAY_DIGITS,
                   help="significant digits shown")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetadr", description="Zeta-family values, delta combs and identity checks.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_common(p, suppress=True)
        return p

    p = command("eval", "evaluate one function value")
    p.add_argument("--fn", required=True, choices=FUNCTIONS)
    p.add_argument("--s", required=True, type=_number, help="argument, 're' or 're,im'")
    p.add_argument("--a", type=_number, default=Fraction(1))
    p.add_argument("--z", type=_number, default=Fraction(1))
    p.add_argument("--b", type=_number, default=Fraction(0))
    p.add_argument("--normalization", choices=NORMALIZATIONS, default="gamma-normalized")
    p.add_argument("--convention", choices=exact.LAMBDA_CONVENTIONS, help="lambda convention (required for --fn lambda)")

    def identity_flags(p):
        p.add_argument("--n-start", type=int, default=0, choices=(0, 1))
        p.add_argument("--lambda-convention", choices=exact.LAMBDA_CONVENTIONS, default="standard")
        p.add_argument("--rhs-two-pi", action="store_true", help="multiply the printed right side by 2*pi")
        p.add_argument("--normalization", choices=NORMALIZATIONS, default="unnormalized",
                       help="extended-integral normalization for the T2/T4 value side")
        p.add_argument("--trunc", type=int, default=60)
        p.add_argument("--assert", dest="gate", choices=tuple(ASSERT_TARGETS),
                       help="exit 1 unless the chosen residual is below --tol "
                            "(rhs: value vs rhs, dr: dr vs rhs, value: value vs dr)")
        p.add_argument("--tol", type=_number, default=Fraction(1, 10 ** 12))

    p = command("identity", "run one theorem three ways")
    p.add_argument("--id", required=True, choices=THEOREMS)
    p.add_argument("--b", type=_number, default=Fraction(0))
    p.add_argument("--q", type=_number, default=Fraction(1))
    identity_flags(p)

    p = command("sweep", "run theorems over a (b, q) grid")
    p.add_argument("--ids", default=",".join(THEOREMS), help="comma separated theorem ids")
    p.add_argument("--b-values", type=_number_list, default=[Fraction(0)])
    p.add_argument("--q-values", type=_number_list, default=[Fraction(1)])
    identity_flags(p)

    p = command("bernoulli", "exact Bernoulli numbers (B1 = +1/2) and polynomials")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--poly", action="store_true", help="Bernoulli polynomial B_n(q)")
    p.add_argument("--q", type=_number, default=Fraction(0))

    p = command("dr", "delta-comb dump or pairing")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--trunc", type=int, default=60)
    p.add_argument("--a", type=_number)
    p.add_argument("--b", type=_number)
    p.add_argument("--z", type=_number)
    p.add_argument("--form", choices=("standard", "alternate"), default="standard")
    p.add_argument("--dump", action="store_true", help="list the comb terms instead of pairing")
    p.add_argument("--phi", choices=TEST_FUNCTION_KINDS[:-1], default="one", help="test function for the pairing")
    p.add_argument("--c", type=_number, help="scale for --phi exp-scale")
    p.add_argument("--n-start", type=int, default=0, choices=(0, 1))

    p = command("ftr", "real-line FTR integral against its reference value")
    p.add_argument("--family", required=True, choices=FTR_FAMILIES)
    p.add_argument("--sigma", required=True, type=_number)
    p.add_argument("--tau", type=_number, default=Fraction(0))
    p.add_argument("--a", type=_number, default=Fraction(1))
    p.add_argument("--b", type=_number, default=Fraction(0))
    p.add_argument("--z", type=_number, default=Fraction(1))

    command("report", "markdown ledger of all theorem runs and cross-checks")
    return parser


# ---------------------------------------------------------------- rendering


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flat(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v, ensure_ascii=False)
        else:
            out[key] = "" if v is None else v
    return out


def render(payload, style: str) -> str:
    """Generic renderer for a dict or a list of dicts."""
    rows = payload if isinstance(payload, list) else [payload]
    if style == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    flat = [_flat(r) for r in rows]
    columns = list(dict.fromkeys(k for r in flat for k in r))
    if style == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in flat:
            writer.writerow([r.get(c, "") for c in columns])
        return buf.getvalue()
    if style == "md":
        if len(flat) == 1:
            lines = ["| field | value |", "|---|---|"]
            lines += [f"| {k} | {v} |" for k, v in flat[0].items()]
        else:
            lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
            lines += ["| " + " | ".join(str(r.get(c, "")) for c in columns) + " |" for r in flat]
        return "\n".join(lines) + "\n"
    blocks = ["\n".join(f"{k}: {v}" for k, v in r.items()) for r in flat]
    return "\n\n".join(blocks) + "\n"


def write_output(text: str, path: str | None):
    """Write all at once; files are replaced atomically."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zetadr-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- commands


def _exact_str(x):
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return None


def cmd_eval(args, cfg):
    p = cfg.digits
    request = EvalRequest(args.fn, args.s, a=args.a, z=args.z, b=args.b,
                          normalization=args.normalization, lambda_convention=args.convention)
    ev = evaluate(request, p)
    with mp.workdps(p + GUARD_DIGITS):
        if ev.exact is not None:
            err, kind = "0", "exact"
        elif ev.error_estimate is not None:
            err, kind = fmt(ev.error_estimate, 5), "computed"
        else:
            err, kind = fmt(default_tolerance(p), 5), "nominal"
        payload = {
            "function": args.fn,
            "s": _exact_str(args.s) or fmt(to_mp(args.s), args.display),
            "value": fmt(ev.value, args.display),
            "exact": _exact_str(ev.exact),
            "error_estimate": err,
            "error_kind": kind,
            "route": ev.route,
            "digits": p,
        }
    return render(payload, cfg.format or "plain")


def _gate(dicts, args) -> int:
    if not args.gate:
        return EXIT_OK
    key = ASSERT_TARGETS[args.gate]
    tol = to_mp(args.tol)
    for d in dicts:
        r = d.get(key)
        if r is None or not mpmath.mpf(r) <= tol:
            return EXIT_ASSERT
    return EXIT_OK


def _case_flags(args) -> dict:
    return dict(n_start=args.n_start, lambda_convention=args.lambda_convention,
                rhs_two_pi=args.rhs_two_pi, extended_normalization=args.normalization, trunc=args.trunc)


def _render_reports(reports, cfg, display):
    style = cfg.format or "plain"
    if style == "json":
        return reporting.to_json(reports if len(reports) != 1 else reports[0], display) + "\n"
    if style == "csv":
        return reporting.to_csv(reports, display)
    if style == "md":
        return reporting.to_markdown(reports, display)
    return render([reporting.report_to_dict(r, display) for r in reports], "plain")


def cmd_identity(args, cfg):
    case = TheoremCase(args.id, b=args.b, q=args.q, **_case_flags(args))
    report = run_theorem(case, cfg.digits)
    text = _render_reports([report], cfg, args.display)
    return text, _gate([reporting.report_to_dict(report, args.display)], args)


def cmd_sweep(args, cfg):
    ids = [t.strip() for t in args.ids.split(",") if t.strip()]
    unknown = [t for t in ids if t not in THEOREMS]
    if unknown:
        raise DomainError(f"unknown theorem ids {unknown}")
    reports = sweep(ids, args.b_values, args.q_values, cfg.digits, **_case_flags(args))
    text = _render_reports(reports, cfg, args.display)
    valid = [reporting.report_to_dict(r, args.display) for r in reports if "case" not in r.errors]
    return text, _gate(valid, args)


def cmd_bernoulli(args, cfg):
    if args.n < 0:
        raise DomainError(f"n must be >= 0, got {args.n}")
    if args.poly:
        value = exact.bernoulli_poly(args.n, args.q)
    else:
        value = exact.bernoulli(args.n)
    with mp.workdps(cfg.digits + GUARD_DIGITS):
        exact_text = _exact_str(value)
        payload = {"n": args.n, "value": exact_text or fmt(value, args.display), "decimal": fmt(to_mp(value), args.display)}
        if args.poly:
            payload["q"] = _exact_str(args.q) or fmt(to_mp(args.q), args.display)
    if (cfg.format or "plain") == "plain":
        return payload["value"] + "\n"
    return render(payload, cfg.format)


def cmd_dr(args, cfg):
    comb = build_dr(args.family, a=args.a, b=args.b, z=args.z, form=args.form)
    if args.dump:
        terms = comb.dump(args.trunc, cfg.digits)
        style = cfg.format or "json"
        if style == "json":
            return json.dumps({"family": comb.family, "form": comb.form, "prefactor": comb.prefactor,
                               "repairs": list(comb.repairs), "terms": terms}, indent=1, ensure_ascii=False) + "\n"
        return render(terms, style)
    phi = TestFn(args.phi, c=args.c)
    r = inner_product(comb, phi, trunc=args.trunc, n_start=args.n_start, digits=cfg.digits)
    with mp.workdps(cfg.digits + GUARD_DIGITS):
        payload = {
            "family": comb.family,
            "phi": args.phi,
            "value": fmt(r.value, args.display),
            "value_with_2pi": fmt(r.value_with_2pi, args.display),
            "tail_bound": fmt(r.tail_bound, 5),
            "n_start": r.n_start,
            "truncations": dict(r.truncations),
            "repairs": list(comb.repairs),
        }
    return render(payload, cfg.format or "plain")


def cmd_ftr(args, cfg):
    p = cfg.digits
    q = ftr_check(args.family, args.sigma, args.tau, a=args.a, b=args.b, z=args.z, digits=p)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mp(args.sigma) + mpc(0, 1) * to_mp(args.tau)
        if to_mp(args.tau) == 0:
            s = to_mp(args.sigma)
        ref = ftr_reference(args.family, s, a=args.a, b=args.b, z=args.z, digits=p)
        diff = abs(q.value - ref)
        payload = {
            "family": args.family,
            "sigma": fmt(to_mp(args.sigma), args.display),
            "tau": fmt(to_mp(args.tau), args.display),
            "integral": fmt(q.value, args.display),
            "reference": fmt(ref, args.display),
            "difference": fmt(diff, 5),
            "error_estimate": fmt(q.abs_error_estimate, 5),
            "evaluations": q.evaluations,
        }
    return render(payload, cfg.format or "plain")


def cmd_report(args, cfg):
    text = reporting.full_report(cfg.digits, display=min(args.display, 20))
    style = cfg.format or "md"
    if style in ("md", "plain"):
        return text
    return render({"digits": cfg.digits, "report": text}, style)


COMMANDS = {
    "eval": cmd_eval,
    "identity": cmd_identity,
    "sweep": cmd_sweep,
    "bernoulli": cmd_bernoulli,
    "dr": cmd_dr,
    "ftr": cmd_ftr,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(digits=args.digits if args.digits is not None else default_digits(),
                        format=args.format, output=args.output)
    except DomainError as exc:
        print(f"zetadr: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        out = COMMANDS[args.command](args, cfg)
    except DomainError as exc:
        print(f"zetadr: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NotConverged, ResourceError) as exc:
        print(f"zetadr: not converged: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    status = EXIT_OK
    if isinstance(out, tuple):
        out, status = out
    write_output(out, cfg.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
