"""Precision handling, compensated summation and the convergent-series engine.

Scalars are mpmath ``mpf``/``mpc`` values.  The working precision ``p`` is a
number of significant decimal digits; every public routine in the package
accepts ``digits=None`` and resolves it through :func:`resolve_digits`, so
the precision in force is always explicit at the call site.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NotConverged

DEFAULT_DIGITS = 64
DISPLAY_DIGITS = 30
GUARD_DIGITS = 10
DIGITS_ENV = "ZETADR_DIGITS"

Number = Union[int, Fraction, mpf, mpc, complex, float]


def default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DIGITS
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{DIGITS_ENV} must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise DomainError(f"{DIGITS_ENV} must be a positive integer, got {raw!r}")
    return value


def resolve_digits(digits: int | None) -> int:
    if digits is None:
        return default_digits()
    digits = int(digits)
    if digits <= 0:
        raise DomainError(f"precision must be a positive number of digits, got {digits}")
    return digits


def default_tolerance(digits: int | None = None) -> mpf:
    p = resolve_digits(digits)
    return mpf(10) ** (-(p - GUARD_DIGITS))


def to_mp(x) -> mpf | mpc:
    """Convert ints, Fractions, floats, complex and decimal strings to mpmath numbers."""
    if isinstance(x, (mpf, mpc)):
        return +x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mpc(x.real, x.imag)
    if isinstance(x, str):
        if "/" in x:
            return to_mp(Fraction(x))
        return mpmath.mpmathify(x)
    return mpmath.mpmathify(x)


def is_real(x) -> bool:
    return not isinstance(x, (mpc, complex)) or x.imag == 0


def as_real(x) -> mpf:
    x = to_mp(x)
    if isinstance(x, mpc):
        if x.imag != 0:
            raise DomainError(f"expected a real value, got {x}")
        return x.real
    return x


def nonpositive_integer(s) -> int | None:
    """Return m if ``s == -m`` for an integer m >= 0, else None."""
    if isinstance(s, (int, Fraction)):
        if s <= 0 and Fraction(s).denominator == 1:
            return int(-s)
        return None
    if isinstance(s, float):
        s = mpf(s)
    if isinstance(s, complex):
        s = mpc(s)
    if isinstance(s, mpc):
        if s.imag != 0:
            return None
        s = s.real
    if isinstance(s, mpf) and s <= 0 and s == mpmath.floor(s):
        return int(-s)
    return None


def fmt(x, n: int = DISPLAY_DIGITS) -> str:
    """Decimal string with ``n`` significant digits.  Complex values with a
    zero imaginary part print as reals."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        x = to_mp(x)
    if isinstance(x, (mpc, complex)):
        if x.imag == 0:
            return mpmath.nstr(mpf(x.real), n)
        return f"{mpmath.nstr(mpf(x.real), n)}{'+' if x.imag >= 0 else '-'}{mpmath.nstr(abs(mpf(x.imag)), n)}j"
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(mpf(x), n)


@dataclass(frozen=True)
class ConvergencePolicy:
    tolerance: mpf
    max_terms: int = 10_000
    stop_rule: str = "consecutive-small-terms"
    k: int = 3

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.stop_rule not in ("consecutive-small-terms", "tail-bound"):
            raise DomainError(f"unknown stop rule {self.stop_rule!r}")
        if self.stop_rule == "consecutive-small-terms" and self.k < 2:
            raise DomainError("consecutive-small-terms needs k >= 2")

    @classmethod
    def default(cls, digits: int | None = None, **kwargs) -> "ConvergencePolicy":
        return cls(tolerance=default_tolerance(digits), **kwargs)


@dataclass(frozen=True)
class SeriesResult:
    value: mpf | mpc
    terms_used: int
    tail_estimate: mpf
    converged: bool
    exact: Fraction | None = None


def compensated_sum(terms: Iterable) -> mpf | mpc:
    """Sum at the current working precision with a single final rounding.

    ``mpmath.fsum`` accumulates exactly in fixed point, which is at least as
    accurate as Kahan/Neumaier compensation and independent of term order.
    """
    terms = list(terms)
    if not terms:
        return mpf(0)
    return mpmath.fsum(terms)


def _ratio_tail(last: mpf, prev: mpf, floor_ratio: mpf = mpf(0)) -> mpf:
    if prev == 0:
        return mpf(0) if last == 0 else mpmath.inf
    r = max(last / prev, floor_ratio)
    if r >= 1:
        return mpmath.inf
    return 2 * last * r / (1 - r)


def sum_series(
    term_at: Callable[[int], Number],
    policy: ConvergencePolicy | None = None,
    start: int = 0,
    digits: int | None = None,
    strict: bool = False,
) -> SeriesResult:
    """Sum ``term_at(start) + term_at(start + 1) + ...`` until the stop rule fires.

    ``consecutive-small-terms`` stops after ``k`` successive terms with
    magnitude below the tolerance; ``tail-bound`` stops when a ratio-based
    geometric tail estimate drops below it.  If ``max_terms`` is exhausted the
    partial sum comes back with ``converged=False``; with ``strict=True`` a
    :class:`NotConverged` carrying that result is raised instead.
    """
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        policy = policy or ConvergencePolicy.default(p)
        tol = mpf(policy.tolerance)
        terms = []
        mags = []
        small_run = 0
        converged = False
        tail = mpmath.inf
        for i in range(policy.max_terms):
            t = to_mp(term_at(start + i))
            terms.append(t)
            mag = abs(t)
            mags.append(mag)
            if policy.stop_rule == "consecutive-small-terms":
                small_run = small_run + 1 if mag <= tol else 0
                if small_run >= policy.k:
                    tail = max(mags[-policy.k:])
                    converged = True
                    break
            else:
                if len(mags) >= 2:
                    tail = _ratio_tail(mags[-1], mags[-2])
                    if tail <= tol:
                        converged = True
                        break
        if not converged and policy.stop_rule == "consecutive-small-terms":
            tail = max(mags[-policy.k:])
        value = compensated_sum(terms)
    result = SeriesResult(value=value, terms_used=len(terms), tail_estimate=tail, converged=converged)
    if strict and not converged:
        raise NotConverged(f"series not converged after {len(terms)} terms", result)
    return result
