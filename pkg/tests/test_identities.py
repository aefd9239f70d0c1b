from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zetadr.errors import DomainError
from zetadr.family import bessel_series_extended
from zetadr.identities import TheoremCase, cross_checks, dr_side, run_theorem, sweep, value_side
from zetadr.numerics import to_mp
from zetadr.reporting import report_to_dict

P = 50
E = mpmath.e

# Frozen oracle values: exact-rational partial sums through m = 60 (Fraction
# arithmetic over mpmath.bernfrac, one conversion at the end), checked against the
# generating function 1/t - e^t/(e^t - 1) at t = -1 and -2.
T1_VALUE_ORACLE = "-0.41802329313067357561499799489"
T5_VALUE_ORACLE = "0.26894142136999512074884075818"


def test_t1_defaults():
    r = run_theorem(TheoremCase("T1"), P)
    with mp.workdps(P + 10):
        assert abs(r.dr_side.value - 1 / (E - 1)) < mpf("1e-12")
        assert abs(r.paper_rhs - 1 / (E - 1)) < mpf("1e-40")
        assert abs(r.value_side.value - mpf(T1_VALUE_ORACLE)) < mpf("1e-28")
        assert abs(r.residual_value_vs_rhs - 1) < mpf("1e-9")
    assert r.value_side.exact is not None and r.value_side.converged


def test_t3_q1_matches_t1():
    a = report_to_dict(run_theorem(TheoremCase("T1"), P))
    b = report_to_dict(run_theorem(TheoremCase("T3", q=1), P))
    for key in ("value_side", "dr_side", "paper_rhs"):
        assert a[key] == b[key]


def test_t5_pins():
    r = run_theorem(TheoremCase("T5"), P)
    with mp.workdps(P + 10):
        assert abs(r.dr_side.value - 1 / (E + 1)) < mpf("1e-12")
        assert abs(r.value_side.value - mpf(T5_VALUE_ORACLE)) < mpf("1e-28")
        # the series is exactly 1/(e+1): G(-1) - 2 G(-2) with G(t) = 1/t - e^t/(e^t - 1)
        assert abs(r.value_side.value - 1 / (E + 1)) < mpf("1e-25")


def test_t6_conventions():
    std = run_theorem(TheoremCase("T6", lambda_convention="standard"), P)
    pap = run_theorem(TheoremCase("T6", lambda_convention="paper"), P)
    t5 = dr_side(TheoremCase("T5"), P)
    with mp.workdps(P + 10):
        assert abs(std.dr_side.value - E / (E ** 2 - 1)) < mpf("1e-12")
        assert abs(pap.dr_side.value - 2 * t5.value) < mpf("1e-12")
        assert abs(pap.dr_side.value - pap.paper_rhs) > mpf("0.1")


def test_rhs_two_pi_flag():
    a = run_theorem(TheoremCase("T2", b=1), P)
    b = run_theorem(TheoremCase("T2", b=1, rhs_two_pi=True), P)
    with mp.workdps(P + 10):
        assert abs(b.paper_rhs - 2 * mpmath.pi * a.paper_rhs) < mpf("1e-40")


def test_t2_value_side_against_bessel_oracle():
    # Sum_m (-1)^m/m! * integral of t^{-m-1} e^{-b/t}/(e^t - 1) dt collapses to the
    # same integral with b replaced by b + 1, i.e. Sum_n 2 K_0(2 sqrt((b+1) n))
    b = 4
    v = value_side(TheoremCase("T2", b=b, trunc=100), P)
    assert v.converged
    oracle = bessel_series_extended(0, b + 1, tol=mpf("1e-20"), digits=P)
    with mp.workdps(P + 10):
        assert abs(v.value - oracle.value) < mpf("1e-15")


def test_t2_value_side_diverges_for_small_b():
    v = value_side(TheoremCase("T2", b=Fraction(1, 2)), P)
    assert not v.converged


def test_gamma_normalized_value_side_is_zero():
    v = value_side(TheoremCase("T4", q=2, b=1, extended_normalization="gamma-normalized"), P)
    assert v.value == 0


def test_sweep_grids():
    rs = sweep("T2", b_values=[2, Fraction(1, 2), 1], digits=P)
    assert [r.case.b for r in rs] == [Fraction(1, 2), 1, 2]
    with mp.workdps(P + 10):
        for r in rs:
            assert abs(r.dr_side.value - mpmath.exp(-to_mp(r.case.b)) / (E - 1)) < mpf("1e-12")
    assert sweep("T1", b_values=[], digits=P) == []
    bad = sweep(["T3"], q_values=[-1, 1], digits=P)
    assert "case" in bad[0].errors and bad[1].dr_side is not None


def test_invalid_cases():
    with pytest.raises(DomainError):
        TheoremCase("T7")
    with pytest.raises(DomainError):
        TheoremCase("T2", b=-1)
    with pytest.raises(DomainError):
        TheoremCase("T3", q=0)
    with pytest.raises(DomainError):
        TheoremCase("T1", n_start=2)


def test_n_start_shift():
    r0 = dr_side(TheoremCase("T1"), P)
    r1 = dr_side(TheoremCase("T1", n_start=1), P)
    with mp.workdps(P + 10):
        # the n = 0 term of the comb is exp(-1); dropping it does not close the gap of 1
        assert abs(r1.value - 1 / (E * (E - 1))) < mpf("1e-12")
        assert abs(r0.value - r1.value - 1 / E) < mpf("1e-12")


def test_gap_is_the_pole_residue():
    # value side + residue at s = 1 reproduces the DR side
    gaps = {"T1": 1, "T5": 0}
    for tid, gap in gaps.items():
        r = run_theorem(TheoremCase(tid), P)
        assert abs(r.dr_side.value - r.value_side.value - gap) < mpf("1e-12")
    std = run_theorem(TheoremCase("T6", lambda_convention="standard"), P)
    pap = run_theorem(TheoremCase("T6", lambda_convention="paper"), P)
    assert abs(std.dr_side.value - std.value_side.value - mpf(1) / 2) < mpf("1e-12")
    assert abs(pap.dr_side.value - pap.value_side.value) < mpf("1e-12")


def test_cross_checks_hold():
    checks = cross_checks(P)
    assert len(checks) == 10
    assert all(c.ok for c in checks), [c.name for c in checks if not c.ok]


def test_reports_deterministic():
    a = report_to_dict(run_theorem(TheoremCase("T4", q=2, b=1), P))
    b = report_to_dict(run_theorem(TheoremCase("T4", q=2, b=1), P))
    assert a == b
