"""JSON / CSV / markdown renderings of identity reports, and the full ledger document."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from mpmath import mp

from .identities import TheoremCase, cross_checks, run_theorem
from .numerics import DISPLAY_DIGITS, GUARD_DIGITS, fmt

CSV_COLUMNS = (
    "id", "b", "q", "n_start", "convention",
    "value_side", "dr_side", "paper_rhs",
    "residual_value_vs_rhs", "residual_dr_vs_rhs", "residual_value_vs_dr",
)


def _param(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return fmt(x, DISPLAY_DIGITS)


def report_to_dict(report, display: int = DISPLAY_DIGITS) -> dict:
    case = report.case
    with mp.workdps(report.digits + GUARD_DIGITS):
        v, d = report.value_side, report.dr_side
        out = {
            "id": case.id,
            "b": _param(case.b),
            "q": _param(case.q),
            "n_start": case.n_start,
            "convention": case.lambda_convention,
            "value_side": fmt(v.value, display) if v else None,
            "dr_side": fmt(d.value, display) if d else None,
            "dr_side_with_2pi": fmt(d.value_with_2pi, display) if d else None,
            "paper_rhs": fmt(report.paper_rhs, display),
            "residual_value_vs_rhs": fmt(report.residual_value_vs_rhs, display) if report.residual_value_vs_rhs is not None else None,
            "residual_dr_vs_rhs": fmt(report.residual_dr_vs_rhs, display) if report.residual_dr_vs_rhs is not None else None,
            "residual_value_vs_dr": fmt(report.residual_value_vs_dr, display) if report.residual_value_vs_dr is not None else None,
            "value_side_exact": str(v.exact) if v is not None and v.exact is not None and len(str(v.exact)) < 400 else None,
            "value_side_converged": v.converged if v else None,
            "value_side_tail": fmt(v.tail_estimate, 5) if v else None,
            "dr_tail_bound": fmt(d.tail_bound, 5) if d else None,
            "metadata": {
                "precision": report.digits,
                "display_digits": display,
                "truncations": dict(d.truncations) if d else {"trunc": case.trunc},
                "flags": {
                    "n_start": case.n_start,
                    "lambda_convention": case.lambda_convention,
                    "rhs_two_pi": case.rhs_two_pi,
                    "extended_normalization": case.extended_normalization,
                    "trunc": case.trunc,
                },
                "notes": list(report.notes),
            },
        }
    return out


def to_json(reports, display: int = DISPLAY_DIGITS) -> str:
    if not isinstance(reports, (list, tuple)):
        return json.dumps(report_to_dict(reports, display), indent=2, ensure_ascii=False)
    return json.dumps([report_to_dict(r, display) for r in reports], indent=2, ensure_ascii=False)


def to_csv(reports, display: int = DISPLAY_DIGITS) -> str:
    if not isinstance(reports, (list, tuple)):
        reports = [reports]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        row = report_to_dict(r, display)
        writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def to_markdown(reports, display: int = 16) -> str:
    if not isinstance(reports, (list, tuple)):
        reports = [reports]
    cols = ("id", "b", "q", "n_start", "convention", "value_side", "dr_side", "paper_rhs",
            "residual_value_vs_rhs", "residual_dr_vs_rhs")
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in reports:
        row = report_to_dict(r, display)
        lines.append("| " + " | ".join("" if row[c] is None else str(row[c]) for c in cols) + " |")
    return "\n".join(lines) + "\n"


LEDGER = (
    ("Zeta kernel sign", "The integrals for zeta and zeta_b are printed with (1 - e^t)^{-1} e^{-t}, "
     "which is negative for t > 0. The standard kernel 1/(e^t - 1) is used."),
    ("Missing 1/Gamma(s)", "The zeta and zeta_b integrals are printed without the 1/Gamma(s) factor that the "
     "Hurwitz forms carry. Both normalizations are exposed. Gamma-normalized values vanish at s = -m."),
    ("Hurwitz parameter", "The Hurwitz shift is written both a and q; both mean the same parameter."),
    ("Hurwitz comb", "The printed denominator n!k! comes with a dangling n-sum. It is read as k!m!."),
    ("Extended Hurwitz comb", "The printed denominator n!l!k! is read as k!l!m!."),
    ("Lerch comb", "The printed (-z)^k m^k is read as z^m (-m)^k, where m is the geometric index."),
    ("Extended Lerch comb", "The outer index m is printed twice; it is split into m (for a) and n (geometric). "
     "The evaluation point sigma+n+k-l is read as sigma+m+k-l."),
    ("Theorem 2 factor 2*pi", "The printed right side carries 2*pi, but the proof's own pairing already "
     "accounts for it. The default comparison omits it."),
    ("Theorem 5 test function", "The proof names phi = 1 - e^{1-s}. The eta factor 1 - 2^{1-s} is what "
     "reproduces 1/(e+1)."),
    ("Lambda convention", "The printed lambda is 2(1 - 2^{1-s}) zeta(s) = 2 eta(s). Only (1 - 2^{-s}) zeta(s) "
     "reproduces the printed e/(e^2 - 1). Both are reported."),
    ("Geometric start index", "The n-sum is printed from 0. Starting it at 1 removes the n = 0 term, "
     "which is exp(-1), so the start index alone does not explain the value/DR gap."),
    ("Value/DR gap", "Summing the residues of Gamma(s) zeta(s) x^{-s} gives 1/(e^x - 1) = 1/x + "
     "Sum_m (-1)^m zeta(-m) x^m / m!. At x = 1 the comb pairing keeps the left side while the value "
     "series drops the s = 1 residue, so the two differ by exactly that residue: 1 for zeta and Hurwitz "
     "zeta, 1/2 for the standard lambda, 0 for eta and the printed lambda."),
    ("Theorem 5 value", "The value series equals 1/(e+1) = 0.2689414213699951... exactly; any other "
     "printed decimal for it does not follow from the exact negative-integer values."),
)


def full_report(digits: int | None = None, display: int = 20) -> str:
    """Markdown document covering T1-T6, the extended grids, the cross-checks and the ledger."""
    from .numerics import resolve_digits

    p = resolve_digits(digits)
    cases = [
        TheoremCase("T1"),
        TheoremCase("T1", n_start=1),
        *(TheoremCase("T2", b=b) for b in (Fraction(1, 2), Fraction(1), Fraction(2))),
        *(TheoremCase("T3", q=q) for q in (Fraction(1, 2), Fraction(1), Fraction(2))),
        *(TheoremCase("T4", q=q, b=b) for q in (Fraction(1), Fraction(2)) for b in (Fraction(1, 2), Fraction(1))),
        TheoremCase("T5"),
        TheoremCase("T6", lambda_convention="standard"),
        TheoremCase("T6", lambda_convention="paper"),
    ]
    reports = [run_theorem(c, p) for c in cases]
    out = [
        "# Zeta-family identity ledger",
        "",
        f"Working precision: {p} digits. Values shown to {display} significant digits. "
        "DR-side values exclude the common 2*pi factor.",
        "",
        "## Theorem runs",
        "",
        to_markdown(reports, display),
        "## Cross-checks",
        "",
        "| check | holds | magnitude |",
        "|---|---|---|",
    ]
    for c in cross_checks(p):
        out.append(f"| {c.name} | {'yes' if c.ok else 'no'} | {fmt(c.magnitude, 5)} |")
    out += ["", "## Notes per run", ""]
    for r in reports:
        label = f"{r.case.id} (b={_param(r.case.b)}, q={_param(r.case.q)}, n_start={r.case.n_start}, {r.case.lambda_convention})"
        out.append(f"- **{label}**: " + "; ".join(r.notes))
    out += ["", "## Discrepancy ledger", ""]
    for title, text in LEDGER:
        out.append(f"- **{title}.** {text}")
    return "\n".join(out) + "\n"
