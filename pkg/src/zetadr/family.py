"""Gamma, zeta, Hurwitz, Lerch, eta and lambda, plus their b-extended variants.

Routing is deliberately simple: non-positive integer arguments with b = 0 go
to the exact rationals of :mod:`zetadr.exact`; everything else is floating
point at the requested working precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from . import exact
from .errors import DomainError, PoleError
from .numerics import (
    GUARD_DIGITS,
    ConvergencePolicy,
    default_tolerance,
    is_real,
    nonpositive_integer,
    resolve_digits,
    sum_series,
    to_mp,
)
from .quadrature import HalfLineIntegrand, QuadratureResult, integrate_halfline
from .quadrature import gamma_b as gamma_b_quad

FUNCTIONS = ("gamma", "gamma_b", "zeta", "zeta_b", "hurwitz", "hurwitz_b", "lerch", "lerch_b", "eta", "lambda")
NORMALIZATIONS = ("gamma-normalized", "unnormalized")
LERCH_DIRECT_RADIUS = mpf(3) / 4


def _real_if_possible(x):
    if isinstance(x, mpc) and x.imag == 0:
        return x.real
    return x


# ---------------------------------------------------------------- gamma


@lru_cache(maxsize=16)
def _spouge_coefficients(digits: int):
    """Spouge coefficients for relative error below 10^-digits.

    Truncation error is bounded by a^{-1/2} (2 pi)^{-(a + 1/2)}; the
    coefficients alternate in sign and cancel, hence the doubled precision.
    """
    a = int(math.ceil(digits * math.log(10) / math.log(2 * math.pi))) + 2
    with mp.workdps(2 * digits + 20):
        c = [mpmath.sqrt(2 * mpmath.pi)]
        fact = mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            c.append((-1) ** (k - 1) / fact * mpmath.power(a - k, k - mpf(1) / 2) * mpmath.exp(a - k))
    return a, tuple(c)


def _spouge(z, digits: int):
    """Gamma(z + 1) for Re(z) >= 1/2."""
    a, c = _spouge_coefficients(digits)
    with mp.workdps(2 * digits + 20):
        total = c[0]
        for k in range(1, a):
            total += c[k] / (z + k)
        return mpmath.power(z + a, z + mpf(1) / 2) * mpmath.exp(-z - a) * total


def gamma(s, digits: int | None = None):
    """Complex gamma with relative error below 10^-(p-12).

    Spouge's approximation (a Lanczos-type sum with closed-form coefficients)
    for Re(s) >= 1/2, reflection below.
    """
    p = resolve_digits(digits)
    s = to_mp(s)
    if nonpositive_integer(s) is not None:
        raise PoleError(f"gamma has a pole at s = {s}")
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mp(s)
        if mpmath.re(s) < mpf(1) / 2:
            value = mpmath.pi / (mpmath.sinpi(s) * _gamma_right(1 - s, p))
        else:
            value = _gamma_right(s, p)
        return _real_if_possible(+value)


def _gamma_right(s, p):
    # Gamma(s) = Gamma(s + 1)/s keeps Spouge's argument at Re >= 1/2.
    return _spouge(s, p + GUARD_DIGITS) / s


def rgamma(s, digits: int | None = None):
    """1/Gamma(s), exactly zero at the poles."""
    if nonpositive_integer(s) is not None:
        return mpf(0)
    return 1 / gamma(s, digits)


# ---------------------------------------------------------------- eta / zeta


def _borwein_terms(s, p: int) -> int:
    """Terms for Borwein's accelerated alternating series.

    The error is below 3 (3 + sqrt 8)^{-n} (1 + 2|t|) e^{pi |t| / 2} / |Gamma(s)|.
    """
    t = abs(float(mpmath.im(s)))
    excess = math.log10(1 + 2 * t) + math.pi * t / 2 / math.log(10)
    with mp.workdps(20):
        excess -= float(mpmath.re(mpmath.loggamma(s))) / math.log(10)
    return int(math.ceil((p + GUARD_DIGITS + max(0.0, excess) + 1) / math.log10(3 + math.sqrt(8))))


@lru_cache(maxsize=32)
def _borwein_d(n: int) -> tuple:
    d = []
    acc = Fraction(0)
    term = Fraction(1, n)  # i = 0 term of (n + i - 1)! 4^i / ((n - i)! (2i)!)
    for i in range(n + 1):
        if i > 0:
            term = term * (n + i - 1) * (n - i + 1) * 4 / ((2 * i - 1) * (2 * i))
        acc += term
        d.append(acc)
    out = []
    for x in d:
        x *= n
        assert x.denominator == 1
        out.append(x.numerator)
    return tuple(out)


def _eta_series(s, p: int):
    n = _borwein_terms(s, p)
    d = _borwein_d(n)
    dn = d[n]
    with mp.workdps(p + GUARD_DIGITS + 5):
        total = mpf(0)
        for k in range(n):
            term = mpf(d[k] - dn) / mpmath.power(k + 1, s)
            total += term if k % 2 == 0 else -term
        return -total / dn


def eta(s, digits: int | None = None):
    """Dirichlet eta, Sum (-1)^{n-1} n^{-s}, accelerated; valid across s = 1."""
    p = resolve_digits(digits)
    m = nonpositive_integer(s)
    if m is not None:
        return to_mp(exact.eta_neg(m))
    s = to_mp(s)
    if not mpmath.re(s) > 0:
        raise DomainError(f"eta needs Re(s) > 0 or a non-positive integer, got {s}")
    with mp.workdps(p + GUARD_DIGITS):
        return _real_if_possible(+_eta_series(to_mp(s), p))


def zeta(s, digits: int | None = None):
    """Riemann zeta for Re(s) > 0, s != 1, and exactly at s = 0, -1, -2, ..."""
    p = resolve_digits(digits)
    m = nonpositive_integer(s)
    if m is not None:
        return to_mp(exact.zeta_neg(m))
    s = to_mp(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if not mpmath.re(s) > 0:
        raise DomainError(f"zeta is only provided for Re(s) > 0 or s = -m, got {s}")
    with mp.workdps(p + GUARD_DIGITS):
        factor = 1 - mpmath.power(2, 1 - s)
        if abs(factor) < mpf(10) ** (-(p // 2)):
            raise DomainError(f"1 - 2^(1-s) vanishes at s = {s}; the eta route cannot resolve zeta there")
        return _real_if_possible(+(_eta_series(s, p) / factor))


def lambda_(s, convention: str, digits: int | None = None):
    """Dirichlet lambda; ``paper`` = 2 eta(s), ``standard`` = (1 - 2^{-s}) zeta(s)."""
    if convention not in exact.LAMBDA_CONVENTIONS:
        raise DomainError(f"lambda convention must be one of {exact.LAMBDA_CONVENTIONS}, got {convention!r}")
    p = resolve_digits(digits)
    m = nonpositive_integer(s)
    if m is not None:
        return to_mp(exact.lambda_neg(m, convention))
    if convention == "paper":
        with mp.workdps(p + GUARD_DIGITS):
            return +(2 * eta(s, p))
    s = to_mp(s)
    with mp.workdps(p + GUARD_DIGITS):
        return _real_if_possible(+((1 - mpmath.power(2, -s)) * zeta(s, p)))


# ---------------------------------------------------------------- Hurwitz / Lerch


def hurwitz(s, a=1, digits: int | None = None):
    """Hurwitz zeta Sum_{n>=0} (n + a)^{-s} by Euler-Maclaurin.

    The first N terms are summed directly with N ~ p ln 10 / ln 2 pi, then the
    tail uses 2 ceil(p/4) Bernoulli corrections.
    """
    p = resolve_digits(digits)
    m = nonpositive_integer(s)
    if m is not None:
        if isinstance(a, (int, Fraction)):
            return to_mp(exact.hurwitz_neg(m, a))
        with mp.workdps(p + GUARD_DIGITS):
            return _real_if_possible(+exact.hurwitz_neg(m, to_mp(a)))
    s, a = to_mp(s), to_mp(a)
    if not mpmath.re(a) > 0:
        raise DomainError(f"hurwitz needs Re(a) > 0, got a = {a}")
    if s == 1:
        raise PoleError("hurwitz has a pole at s = 1")
    with mp.workdps(p + 2 * GUARD_DIGITS):
        n_direct = int(math.ceil(p * math.log(10) / math.log(2 * math.pi))) + int(abs(s))
        n_bern = 2 * int(math.ceil(p / 4))
        head = mpmath.fsum(mpmath.power(k + a, -s) for k in range(n_direct))
        x = n_direct + a
        xs = mpmath.power(x, -s)
        tail = x * xs / (s - 1) + xs / 2
        rising = s  # s (s+1) ... (s + 2j - 2)
        xpow = xs / x
        fact = mpf(2)
        corrections = []
        for j in range(1, n_bern + 1):
            corrections.append(to_mp(exact.bernoulli(2 * j)) / fact * rising * xpow)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            xpow /= x * x
            fact *= (2 * j + 1) * (2 * j + 2)
        value = head + tail + mpmath.fsum(corrections)
    with mp.workdps(p + GUARD_DIGITS):
        return _real_if_possible(+value)


def lerch(z, s, a=1, digits: int | None = None):
    """Hurwitz-Lerch Phi(z, s, a) = Sum_{n>=0} z^n (n + a)^{-s}.

    Direct summation for |z| <= 3/4, the Hurwitz routine at z = 1 and the
    integral representation by quadrature elsewhere on the closed unit disc.
    """
    p = resolve_digits(digits)
    z, s, a = to_mp(z), to_mp(s), to_mp(a)
    if abs(z) > 1:
        raise DomainError(f"lerch needs |z| <= 1, got z = {z}")
    if not mpmath.re(a) > 0:
        raise DomainError(f"lerch needs Re(a) > 0, got a = {a}")
    if z == 1:
        return hurwitz(s, a, p)
    if not mpmath.re(s) > 0:
        raise DomainError(f"lerch needs Re(s) > 0 for z != 1, got s = {s}")
    with mp.workdps(p + GUARD_DIGITS):
        if z == 0:
            return _real_if_possible(+mpmath.power(a, -s))
        if abs(z) <= LERCH_DIRECT_RADIUS:
            policy = ConvergencePolicy(tolerance=default_tolerance(p) * mpf("1e-5"), max_terms=100_000)
            result = sum_series(lambda n: z ** n * mpmath.power(n + a, -s), policy, digits=p)
            return _real_if_possible(+result.value)
        integrand = HalfLineIntegrand(sigma=mpmath.re(s), kernel="lerch", a=a, z=z)
        q = integrate_halfline(integrand, mpmath.im(s), digits=p)
        return _real_if_possible(+(q.value / gamma(s, p)))


def polylog_via_lerch(z, s, digits: int | None = None):
    """Li_s(z) = z Phi(z, s, 1)."""
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        return +(to_mp(z) * lerch(z, s, 1, p))


# ---------------------------------------------------------------- extended family

_EXTENDED_KERNEL = {"zeta_b": "bose", "hurwitz_b": "hurwitz", "lerch_b": "lerch"}


@dataclass(frozen=True)
class EvalRequest:
    function: str
    s: object
    a: object = 1
    z: object = 1
    b: object = 0
    normalization: str = "gamma-normalized"
    lambda_convention: str | None = None

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise DomainError(f"unknown function {self.function!r}; expected one of {FUNCTIONS}")
        if self.normalization not in NORMALIZATIONS:
            raise DomainError(f"normalization must be one of {NORMALIZATIONS}")
        if self.function == "lambda" and self.lambda_convention not in exact.LAMBDA_CONVENTIONS:
            raise DomainError("lambda needs an explicit convention: 'paper' or 'standard'")
        b = to_mp(self.b)
        if not is_real(b) or b < 0:
            raise DomainError(f"b must be real and >= 0, got {self.b}")


@dataclass(frozen=True)
class Evaluation:
    value: mpf | mpc
    route: str
    exact: Fraction | None = None
    error_estimate: mpf | None = None
    detail: dict = field(default_factory=dict, compare=False)


def extended(function: str, request: EvalRequest, tol=None, digits: int | None = None) -> QuadratureResult:
    """Half-line integral for zeta_b, hurwitz_b or lerch_b.

    ``gamma-normalized`` divides by Gamma(s); at s = 0, -1, -2, ... that factor
    is 1/Gamma = 0 and the result is exactly zero.  ``unnormalized`` returns
    the bare integral, finite for every real s once b > 0.
    """
    if function not in _EXTENDED_KERNEL:
        raise DomainError(f"extended() handles {tuple(_EXTENDED_KERNEL)}, got {function!r}")
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mp(request.s)
        integrand = HalfLineIntegrand(
            sigma=mpmath.re(s),
            b=request.b,
            kernel=_EXTENDED_KERNEL[function],
            a=request.a if function != "zeta_b" else 1,
            z=request.z if function == "lerch_b" else 1,
        )
        q = integrate_halfline(integrand, mpmath.im(s), tol=tol, digits=p)
        if request.normalization == "unnormalized":
            return q
        scale = rgamma(s, p)
        return QuadratureResult(
            value=_real_if_possible(q.value * scale),
            abs_error_estimate=q.abs_error_estimate * abs(scale),
            evaluations=q.evaluations,
            level=q.level,
            history=q.history,
        )


def bessel_series_extended(s, b, a=1, z=1, tol=None, digits: int | None = None, max_terms: int = 200_000):
    """Unnormalized extended Lerch integral as a Bessel series.

    Integral of t^{s-1} e^{-(n+a)t - b/t} dt = 2 (b/(n+a))^{s/2} K_s(2 sqrt((n+a) b)),
    summed over n with weights z^n.  With a = z = 1 (and the n = 0 term
    dropped, i.e. shifted) this is the extended Riemann zeta.  Independent of
    the quadrature path; uses mpmath's modified Bessel K.
    """
    p = resolve_digits(digits)
    if tol is not None:
        # Bessel K at integer order is costly; work only as precisely as tol needs
        p = min(p, int(-mpmath.log10(to_mp(tol))) + GUARD_DIGITS)
    with mp.workdps(p + GUARD_DIGITS):
        s, b, a, z = to_mp(s), to_mp(b), to_mp(a), to_mp(z)
        if not b > 0:
            raise DomainError("the Bessel series needs b > 0")
        tol = default_tolerance(p) if tol is None else to_mp(tol)

        def term(n):
            x = n + a
            return z ** n * 2 * mpmath.power(b / x, s / 2) * mpmath.besselk(s, 2 * mpmath.sqrt(x * b))

        policy = ConvergencePolicy(tolerance=tol, max_terms=max_terms, k=3)
        return sum_series(term, policy, digits=p)


def ftr_reference(family: str, s, a=1, b=0, z=1, digits: int | None = None):
    """What the family's real-line FTR integral should equal: Gamma(s) times
    the function value, or the Bessel form of the extended integral."""
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mp(s)
        if family == "gamma":
            return gamma(s, p)
        if family == "rzf":
            return gamma(s, p) * zeta(s, p)
        if family == "hzf":
            return gamma(s, p) * hurwitz(s, a, p)
        if family == "hlzf":
            return gamma(s, p) * lerch(z, s, a, p)
        if family == "egamma":
            b = to_mp(b)
            return 2 * mpmath.power(b, s / 2) * mpmath.besselk(s, 2 * mpmath.sqrt(b))
        if family == "erzf":
            return bessel_series_extended(s, b, 1, 1, digits=p).value
        if family == "ehzf":
            return bessel_series_extended(s, b, a, 1, digits=p).value
        if family == "ehlzf":
            return bessel_series_extended(s, b, a, z, digits=p).value
    raise DomainError(f"unknown family {family!r}")


def evaluate(request: EvalRequest, digits: int | None = None) -> Evaluation:
    """Dispatch an :class:`EvalRequest`.

    Exact path if and only if s is a non-positive integer and b = 0 (and, for
    Hurwitz, a is rational); otherwise floating point or quadrature.
    """
    p = resolve_digits(digits)
    fn = request.function
    b = to_mp(request.b)
    m = nonpositive_integer(request.s)
    a = request.a

    if fn in ("zeta_b", "hurwitz_b", "lerch_b"):
        if b > 0:
            q = extended(fn, request, digits=p)
            return Evaluation(q.value, "quadrature", error_estimate=q.abs_error_estimate,
                              detail={"evaluations": q.evaluations, "level": q.level})
        base = {"zeta_b": "zeta", "hurwitz_b": "hurwitz", "lerch_b": "lerch"}[fn]
        inner = evaluate(EvalRequest(base, request.s, request.a, request.z), p)
        if request.normalization == "gamma-normalized":
            return inner
        return Evaluation(gamma(request.s, p) * inner.value, inner.route)
    if fn == "gamma_b":
        if b > 0:
            q = gamma_b_quad(request.s, b, digits=p)
            return Evaluation(q.value, "quadrature", error_estimate=q.abs_error_estimate,
                              detail={"evaluations": q.evaluations, "level": q.level})
        fn = "gamma"
    if fn == "gamma":
        return Evaluation(gamma(request.s, p), "spouge")

    if m is not None:
        if fn == "zeta":
            value = exact.zeta_neg(m)
        elif fn == "eta":
            value = exact.eta_neg(m)
        elif fn == "lambda":
            value = exact.lambda_neg(m, request.lambda_convention)
        elif fn == "hurwitz" and isinstance(a, (int, Fraction)):
            value = exact.hurwitz_neg(m, a)
        elif fn == "lerch" and to_mp(request.z) == 1 and isinstance(a, (int, Fraction)):
            value = exact.hurwitz_neg(m, a)
        else:
            value = None
        if value is not None:
            with mp.workdps(p + GUARD_DIGITS):
                return Evaluation(to_mp(value), "exact", exact=value)

    if fn == "zeta":
        return Evaluation(zeta(request.s, p), "eta-series")
    if fn == "eta":
        return Evaluation(eta(request.s, p), "eta-series")
    if fn == "lambda":
        return Evaluation(lambda_(request.s, request.lambda_convention, p), "eta-series")
    if fn == "hurwitz":
        return Evaluation(hurwitz(request.s, a, p), "euler-maclaurin")
    if fn == "lerch":
        return Evaluation(lerch(request.z, request.s, a, p), "lerch")
    raise DomainError(f"cannot evaluate {fn}")
