"""Theorems T1-T6 computed three ways, with residuals between the routes.

value side   Sum_m (-1)^m f(-m) / m!, from exact negative-integer values
             (T1, T3, T5, T6) or from extended half-line integrals (T2, T4)
DR side      the delta-comb pairing with phi chosen per theorem
paper_rhs    the printed closed form

Large residuals are measurements, not failures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
from mpmath import mp, mpf

from . import exact
from .dr import DEFAULT_CAP, InnerProductResult, TestFn, build_dr, gamma_dr_pairing, inner_product
from .errors import DomainError, ZetaDRError
from .family import NORMALIZATIONS
from .numerics import GUARD_DIGITS, SeriesResult, resolve_digits, to_mp
from .quadrature import HalfLineIntegrand, halfline_moments

THEOREMS = ("T1", "T2", "T3", "T4", "T5", "T6")
VALUE_SIDE_TOL = mpf("1e-25")
CROSS_CHECK_TOL = mpf("1e-12")

# residue at s = 1 of the function paired with Gamma(s); the expected value/DR gap
_RESIDUE = {
    ("T1", None): "1", ("T2", None): "1", ("T3", None): "1", ("T4", None): "1",
    ("T5", None): "0", ("T6", "standard"): "1/2", ("T6", "paper"): "0",
}
_COMB = {"T1": "rzf", "T2": "erzf", "T3": "hzf", "T4": "ehzf", "T5": "rzf", "T6": "rzf"}


@dataclass(frozen=True)
class TheoremCase:
    id: str
    b: object = 0
    q: object = 1
    n_start: int = 0
    lambda_convention: str = "standard"
    rhs_two_pi: bool = False
    extended_normalization: str = "unnormalized"
    trunc: int = DEFAULT_CAP

    def __post_init__(self):
        if self.id not in THEOREMS:
            raise DomainError(f"unknown theorem {self.id!r}; expected one of {THEOREMS}")
        object.__setattr__(self, "b", _number(self.b))
        object.__setattr__(self, "q", _number(self.q))
        b = to_mp(self.b)
        if not (mpmath.im(b) == 0 and mpmath.re(b) >= 0):
            raise DomainError(f"b must be real and >= 0, got {self.b}")
        if self.id in ("T3", "T4") and not mpmath.re(to_mp(self.q)) > 0:
            raise DomainError(f"q must have positive real part, got {self.q}")
        if self.n_start not in (0, 1):
            raise DomainError("n_start must be 0 or 1")
        if self.lambda_convention not in exact.LAMBDA_CONVENTIONS:
            raise DomainError(f"lambda convention must be one of {exact.LAMBDA_CONVENTIONS}")
        if self.extended_normalization not in NORMALIZATIONS:
            raise DomainError(f"normalization must be one of {NORMALIZATIONS}")
        if self.trunc < 8:
            raise DomainError("trunc must be at least 8")


def _number(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return to_mp(x)
    return to_mp(x)


@dataclass(frozen=True)
class IdentityReport:
    case: TheoremCase
    value_side: SeriesResult | None
    dr_side: InnerProductResult | None
    paper_rhs: mpf
    residual_value_vs_rhs: mpf | None
    residual_dr_vs_rhs: mpf | None
    residual_value_vs_dr: mpf | None
    notes: tuple = ()
    digits: int = 0
    errors: dict = field(default_factory=dict)


def paper_rhs(case: TheoremCase, digits: int | None = None) -> mpf:
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        e = mpmath.e
        b, q = to_mp(case.b), to_mp(case.q)
        rhs = {
            "T1": lambda: 1 / (e - 1),
            "T2": lambda: mpmath.exp(-b) / (e - 1),
            "T3": lambda: mpmath.exp(1 - q) / (e - 1),
            "T4": lambda: mpmath.exp(1 - (q + b)) / (e - 1),
            "T5": lambda: 1 / (e + 1),
            "T6": lambda: e / (e ** 2 - 1),
        }[case.id]()
        if case.rhs_two_pi:
            rhs *= 2 * mpmath.pi
        return +rhs


def _phi(case: TheoremCase) -> TestFn:
    if case.id == "T5":
        return TestFn("eta-factor")
    if case.id == "T6":
        return TestFn("lambda-factor-" + case.lambda_convention)
    return TestFn("one")


def dr_side(case: TheoremCase, digits: int | None = None) -> InnerProductResult:
    comb = build_dr(_COMB[case.id], a=case.q, b=case.b)
    return inner_product(comb, _phi(case), trunc=case.trunc, n_start=case.n_start, digits=digits)


def _value_function(case: TheoremCase, p: int):
    """f evaluated at s = -m for the value-side series."""
    if case.id == "T1":
        return lambda s: exact.zeta_neg(-s)
    if case.id == "T3":
        return lambda s: exact.hurwitz_neg(-s, case.q)
    if case.id == "T5":
        return lambda s: exact.eta_neg(-s)
    if case.id == "T6":
        return lambda s: exact.lambda_neg(-s, case.lambda_convention)
    if to_mp(case.b) == 0:
        if case.id == "T2":
            return lambda s: exact.zeta_neg(-s)
        return lambda s: exact.hurwitz_neg(-s, case.q)
    if case.extended_normalization == "gamma-normalized":
        # 1/Gamma(-m) = 0, so every gamma-normalized extended value vanishes
        return lambda s: 0
    kernel = "bose" if case.id == "T2" else "hurwitz"
    integrand = HalfLineIntegrand(sigma=0, b=case.b, kernel=kernel, a=case.q)
    table = halfline_moments(integrand, case.trunc, tol=VALUE_SIDE_TOL * mpf("1e-5"), digits=p)
    return lambda s: table[-s].value


def value_side(case: TheoremCase, digits: int | None = None) -> SeriesResult:
    p = resolve_digits(digits)
    return gamma_dr_pairing(_value_function(case, p), trunc=case.trunc, tol=VALUE_SIDE_TOL, digits=p)


def _notes(case: TheoremCase, value: SeriesResult | None) -> list:
    notes = []
    if case.id == "T2":
        notes.append("printed right side carries an extra factor 2*pi; compared without it unless rhs_two_pi is set")
    if case.id in ("T2", "T4"):
        notes.append("extended integrand uses 1/(e^t - 1); the printed (1 - e^t)^{-1} e^{-t} is negative on t > 0")
        if case.extended_normalization == "gamma-normalized":
            notes.append("gamma-normalized extended values vanish at s = -m, so the value side is identically 0")
        else:
            notes.append("value side uses the unnormalized extended integral (no 1/Gamma(s) prefactor)")
    if case.id == "T5":
        notes.append("printed proof names phi = 1 - e^{1-s}; the eta factor 1 - 2^{1-s} is used")
    if case.id == "T6":
        notes.append(f"lambda convention: {case.lambda_convention}"
                     + ("" if case.lambda_convention == "standard" else " (2*eta; printed right side does not match it)"))
    if case.id in ("T3", "T4"):
        notes.append("parameter q is the Hurwitz shift a")
    residue = _RESIDUE.get((case.id, case.lambda_convention if case.id == "T6" else None))
    if residue is not None and (case.id not in ("T2", "T4") or to_mp(case.b) == 0):
        notes.append(f"value side omits the residue {residue} at s = 1, which the comb pairing keeps")
    notes.append(f"geometric index starts at n = {case.n_start}")
    notes.extend(build_dr(_COMB[case.id], a=case.q, b=case.b).repairs)
    if value is not None and not value.converged:
        notes.append(f"value-side series not converged at trunc = {case.trunc} "
                     f"(tail estimate {mpmath.nstr(value.tail_estimate, 5)})")
    return notes


def run_theorem(case: TheoremCase, digits: int | None = None) -> IdentityReport:
    p = resolve_digits(digits)
    errors = {}
    value = dr = None
    try:
        value = value_side(case, p)
    except ZetaDRError as exc:
        errors["value_side"] = f"{type(exc).__name__}: {exc}"
    try:
        dr = dr_side(case, p)
    except ZetaDRError as exc:
        errors["dr_side"] = f"{type(exc).__name__}: {exc}"
    rhs = paper_rhs(case, p)
    with mp.workdps(p + GUARD_DIGITS):
        def diff(x, y):
            if x is None or y is None:
                return None
            return +abs(to_mp(x) - to_mp(y))

        v = value.value if value is not None else None
        d = dr.value if dr is not None else None
        report = IdentityReport(
            case=case,
            value_side=value,
            dr_side=dr,
            paper_rhs=rhs,
            residual_value_vs_rhs=diff(v, rhs),
            residual_dr_vs_rhs=diff(d, rhs),
            residual_value_vs_dr=diff(v, d),
            notes=tuple(_notes(case, value)) + tuple(f"{k} failed: {msg}" for k, msg in errors.items()),
            digits=p,
            errors=errors,
        )
    return report


def sweep(theorems, b_values=(0,), q_values=(1,), digits: int | None = None, **flags) -> list:
    """One report per (theorem, b, q) grid point, in lexicographic order.

    Invalid points are recorded as reports with an ``errors['case']`` entry
    and empty sides; the sweep keeps going.
    """
    if isinstance(theorems, str):
        theorems = [theorems]
    b_values = sorted((_number(b) for b in b_values), key=lambda x: to_mp(x))
    q_values = sorted((_number(q) for q in q_values), key=lambda x: (mpmath.re(to_mp(x)), mpmath.im(to_mp(x))))
    reports = []
    for tid, b, q in product(sorted(theorems), b_values, q_values):
        try:
            case = TheoremCase(tid, b=b, q=q, **flags)
        except DomainError as exc:
            case = _InvalidCase(tid, b, q)
            reports.append(IdentityReport(case, None, None, mpf("nan"), None, None, None,
                                          notes=(f"invalid case: {exc}",), digits=resolve_digits(digits),
                                          errors={"case": str(exc)}))
            continue
        reports.append(run_theorem(case, digits))
    return reports


@dataclass(frozen=True)
class _InvalidCase:
    id: str
    b: object
    q: object
    n_start: int = 0
    lambda_convention: str = "standard"
    rhs_two_pi: bool = False
    extended_normalization: str = "unnormalized"
    trunc: int = DEFAULT_CAP


@dataclass(frozen=True)
class CrossCheck:
    name: str
    ok: bool
    magnitude: mpf


def cross_checks(digits: int | None = None, tol=CROSS_CHECK_TOL) -> list:
    """The consistency web among the theorems (DR sides only where noted)."""
    p = resolve_digits(digits)
    tol = to_mp(tol)
    out = []

    def check(name, x, y):
        with mp.workdps(p + GUARD_DIGITS):
            mag = +abs(to_mp(x) - to_mp(y))
        out.append(CrossCheck(name, bool(mag < tol), mag))

    t1 = TheoremCase("T1")
    t5 = TheoremCase("T5")
    t6 = TheoremCase("T6", lambda_convention="standard")
    dr1, dr5, dr6 = (dr_side(c, p).value for c in (t1, t5, t6))
    v1, v5, v6 = (value_side(c, p) for c in (t1, t5, t6))
    with mp.workdps(p + GUARD_DIGITS):
        check("T6_std = (T1 + T5)/2, DR side", dr6, (dr1 + dr5) / 2)
        check("T6_std = (T1 + T5)/2, value side", v6.value, (v1.value + v5.value) / 2)
    for b in (Fraction(1, 2), Fraction(1), Fraction(2)):
        d2 = dr_side(TheoremCase("T2", b=b), p).value
        with mp.workdps(p + GUARD_DIGITS):
            check(f"T2 = exp(-b) T1, DR side, b = {b}", d2, mpmath.exp(-to_mp(b)) * dr1)
    for q, b in product((Fraction(1), Fraction(2)), (Fraction(1, 2), Fraction(1))):
        d3 = dr_side(TheoremCase("T3", q=q), p).value
        d4 = dr_side(TheoremCase("T4", q=q, b=b), p).value
        with mp.workdps(p + GUARD_DIGITS):
            check(f"T4 = exp(-b) T3, DR side, q = {q}, b = {b}", d4, mpmath.exp(-to_mp(b)) * d3)
    v3 = value_side(TheoremCase("T3", q=1), p)
    exact_equal = v3.exact is not None and v3.exact == v1.exact
    out.append(CrossCheck("T3 value side at q = 1 equals T1 value side (exact)", exact_equal,
                          mpf(0) if exact_equal else abs(v3.value - v1.value)))
    return out
