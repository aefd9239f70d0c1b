"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run with pytest (the lines are repeated in the terminal summary) or directly:

    python tests/test_acceptance.py
"""
import os
import subprocess
import sys
from fractions import Fraction
from math import comb, factorial

import mpmath
from mpmath import mp, mpf

from zetadr import exact
from zetadr.family import EvalRequest, bessel_series_extended, extended, ftr_reference
from zetadr.identities import TheoremCase, cross_checks, dr_side, paper_rhs, run_theorem
from zetadr.numerics import to_mp
from zetadr.quadrature import ftr_check, gamma_b

P = 64
RESULTS = []  # (criterion, ok, line)

# Frozen value-side oracle for T5 (exact rationals through m = 60, equal to 1/(e+1)).
T5_FROZEN_ORACLE = "0.26894142136999512074884075818"
# The decimal printed next to criterion 3 for T5.
T5_PRINTED = "0.2731509"


def record(criterion, ok, text):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {text}"
    RESULTS.append((criterion, ok, line))
    print(line)
    return ok


def s(x, n=5):
    return mpmath.nstr(x, n)


def test_criterion_1_dr_side_closed_forms():
    e = mpmath.e
    half, one, two = Fraction(1, 2), Fraction(1), Fraction(2)
    cases = [TheoremCase("T1")]
    cases += [TheoremCase("T2", b=b) for b in (half, one, two)]
    cases += [TheoremCase("T3", q=q) for q in (half, one, two)]
    cases += [TheoremCase("T4", q=q, b=b) for q in (one, two) for b in (half, one)]
    cases += [TheoremCase("T5"), TheoremCase("T6", lambda_convention="standard")]
    worst, bad = mpf(0), []
    with mp.workdps(P + 10):
        for c in cases:
            # closed forms written out here, independently of paper_rhs()
            b, q = to_mp(c.b), to_mp(c.q)
            ref = {
                "T1": 1 / (e - 1),
                "T2": mpmath.exp(-b) / (e - 1),
                "T3": mpmath.exp(1 - q) / (e - 1),
                "T4": mpmath.exp(1 - q - b) / (e - 1),
                "T5": 1 / (e + 1),
                "T6": e / (e ** 2 - 1),
            }[c.id]
            assert abs(paper_rhs(c, P) - ref) < mpf("1e-50")
            r = abs(dr_side(c, P).value - ref)
            worst = max(worst, r)
            if not r < mpf("1e-12"):
                bad.append(f"{c.id}(b={c.b},q={c.q})")
    ok = record(1, not bad, f"DR side reproduces {len(cases)} closed forms, max residual {s(worst)} < 1e-12"
                + (f"; failing {bad}" if bad else ""))
    assert ok


def _partial(values, N):
    return sum((Fraction((-1) ** m, factorial(m)) * values[m] for m in range(N + 1)), Fraction(0))


def test_criterion_2_value_side_convergence():
    fs = {
        "zeta": lambda m: exact.zeta_neg(m),
        "eta": lambda m: exact.eta_neg(m),
        "lambda_std": lambda m: exact.lambda_neg(m, "standard"),
        "hurwitz(q=1/2)": lambda m: exact.hurwitz_neg(m, Fraction(1, 2)),
        "hurwitz(q=2)": lambda m: exact.hurwitz_neg(m, 2),
    }
    gaps = {}
    with mp.workdps(P + 10):
        for name, f in fs.items():
            values = [f(m) for m in range(61)]
            assert all(isinstance(v, Fraction) for v in values)
            gaps[name] = abs(to_mp(_partial(values, 60) - _partial(values, 30)))
    worst = max(gaps.values())
    ok = record(2, worst < mpf("1e-15"),
                f"exact partial sums N=30 vs N=60 agree for {', '.join(fs)}; max gap {s(worst)} < 1e-15")
    assert ok


def test_criterion_3_discrepancy_pins():
    t1 = run_theorem(TheoremCase("T1"), P)
    t5 = run_theorem(TheoremCase("T5"), P)
    with mp.workdps(P + 10):
        v1 = t1.value_side.value
        res = t1.residual_value_vs_rhs
        ok_a = (abs(v1 - mpf("-0.4180232931")) < mpf("1e-10") and abs(res - 1) < mpf("1e-9"))
        record("3a", ok_a, f"T1 value_side = {s(v1, 12)}, residual_value_vs_rhs = 1 {'+' if res >= 1 else '-'} "
               f"{s(abs(res - 1))} (tolerance 1e-9)")
        v5 = t5.value_side.value
        printed_gap = abs(v5 - mpf(T5_PRINTED))
        oracle_gap = abs(v5 - mpf(T5_FROZEN_ORACLE))
        ok_b = printed_gap < mpf("1e-6")
        record("3b", ok_b, f"T5 value_side = {s(v5, 12)} vs printed {T5_PRINTED}...: |diff| = {s(printed_gap)} "
               f"(tolerance 1e-6); frozen exact oracle {T5_FROZEN_ORACLE[:14]}... matches to {s(oracle_gap)}")
    assert ok_a
    assert ok_b, "printed T5 value 0.2731509 is not reproduced; the exact series equals 1/(e+1)"


def test_criterion_4_quadrature_cross_checks():
    notes, ok = [], True
    with mp.workdps(P + 10):
        worst = mpf(0)
        for b in (Fraction(1, 4), 1, 4):
            bb = to_mp(b)
            ref = mpmath.sqrt(mpmath.pi) * mpmath.exp(-2 * mpmath.sqrt(bb))
            worst = max(worst, abs(gamma_b(Fraction(1, 2), b, digits=P).value - ref) / ref)
        ok &= worst < mpf("1e-10")
        notes.append(f"Gamma_b(1/2) rel {s(worst, 3)}")
        worst = mpf(0)
        for b in (Fraction(1, 4), 1, 4):
            for x in (Fraction(1, 2), 1, Fraction(3, 2)):
                lhs = gamma_b(-x, b, digits=P).value
                rhs = to_mp(b) ** (-to_mp(x)) * gamma_b(x, b, digits=P).value
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
        ok &= worst < mpf("1e-10")
        notes.append(f"reflection grid rel {s(worst, 3)}")
        small = abs(gamma_b(2, mpf("1e-8"), digits=P).value - 1)
        ok &= small < mpf("1e-6")
        notes.append(f"|Gamma_1e-8(2) - 1| = {s(small, 3)}")
        q = extended("zeta_b", EvalRequest("zeta_b", 2, b=1, normalization="unnormalized"), digits=P).value
        o = bessel_series_extended(2, 1, tol=mpf("1e-15"), digits=P).value
        ok &= abs(q - o) < mpf("1e-10")
        notes.append(f"zeta_b(2), b=1 vs Bessel series {s(abs(q - o), 3)}")
    record(4, ok, "; ".join(notes) + " (all < 1e-10, b->0 < 1e-6)")
    assert ok


def test_criterion_5_ftr_spot_checks():
    worst, ok = mpf(0), True
    with mp.workdps(P + 10):
        for family in ("gamma", "rzf"):
            for sigma, tau in ((2, 0), (3, 0), (3, 1)):
                q = ftr_check(family, sigma, tau, digits=P).value
                x = to_mp(sigma) + mpmath.mpc(0, tau) if tau else to_mp(sigma)
                ref = mpmath.gamma(x) * (mpmath.zeta(x) if family == "rzf" else 1)
                assert abs(ftr_reference(family, x, digits=P) - ref) < mpf("1e-50") * abs(ref)
                rel = abs(q - ref) / abs(ref)
                worst = max(worst, rel)
                ok &= rel < mpf("1e-10")
    record(5, ok, f"FTR gamma/rzf at (2,0), (3,0), (3,1) vs mpmath Gamma and Gamma*zeta; max rel {s(worst, 3)} < 1e-10")
    assert ok


def test_criterion_6_exact_values():
    recurrence = all(sum(comb(n + 1, k) * exact.bernoulli(k) for k in range(n + 1)) == n + 1 for n in range(61))
    odd = all(exact.bernoulli(n) == 0 for n in range(3, 62, 2))
    qs = [Fraction(1, 3), Fraction(-5, 7), Fraction(2), Fraction(1, 2)]
    symmetry = all(exact.bernoulli_poly(n, 1 - q) == (-1) ** n * exact.bernoulli_poly(n, q) for n in range(21) for q in qs)
    z11 = exact.zeta_neg(11) == Fraction(691, 32760)
    e7 = exact.eta_neg(7) == Fraction(-17, 16)
    ok = recurrence and odd and symmetry and z11 and e7
    record(6, ok, f"recurrence n<=60 {recurrence}, odd vanishing {odd}, B_n(1-q) symmetry {symmetry}, "
           f"zeta(-11) = 691/32760 {z11}, eta(-7) = -17/16 {e7}")
    assert ok


def test_criterion_7_consistency_web():
    checks = cross_checks(P)
    worst = max(c.magnitude for c in checks)
    ok = all(c.ok for c in checks) and worst < mpf("1e-12")
    failing = [c.name for c in checks if not c.ok]
    record(7, ok, f"{len(checks)} cross-checks, max magnitude {s(worst, 3)} < 1e-12" + (f"; failing {failing}" if failing else ""))
    assert ok


def test_criterion_8_report_determinism(tmp_path):
    env = {**os.environ, "ZETADR_DIGITS": str(P)}
    outs = [tmp_path / "a.md", tmp_path / "b.md"]
    procs = [subprocess.Popen([sys.executable, "-m", "zetadr", "report", "--output", str(o)], env=env)
             for o in outs]
    codes = [p.wait(timeout=600) for p in procs]
    a, b = (o.read_bytes() for o in outs)
    ok = codes == [0, 0] and a == b and len(a) > 0
    record(8, ok, f"two independent `zetadr report` runs at {P} digits: {len(a)} and {len(b)} bytes, identical {a == b}")
    assert ok


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
    sys.exit(0 if all(ok for _, ok, _ in RESULTS) else 1)
