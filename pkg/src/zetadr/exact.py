"""Exact rational Bernoulli numbers and the negative-integer zeta values built on them.

Convention: B_1 = +1/2 throughout, so that zeta(-m) = -B_{m+1}/(m+1) holds
for every m >= 0 including m = 0.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from mpmath import mpf

from .errors import DomainError, ResourceError
from .numerics import to_mp

MAX_BERNOULLI_INDEX = 512

LAMBDA_CONVENTIONS = ("paper", "standard")


class BernoulliTable:
    """Memoized B+_n grown incrementally with the Akiyama-Tanigawa row.

    After processing index m the row's first entry is B+_m, so growing the
    table from n to n' costs O(n'^2) rational operations in total.  Reads of
    already cached entries take no lock; growth is serialized.
    """

    def __init__(self, max_index: int = MAX_BERNOULLI_INDEX):
        self.max_index = max_index
        self._values: list[Fraction] = []
        self._row: list[Fraction] = []
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._values)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise DomainError(f"Bernoulli index must be non-negative, got {n}")
        if n > self.max_index:
            raise ResourceError(f"Bernoulli index {n} exceeds configured maximum {self.max_index}")
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            while len(self._values) <= n:
                m = len(self._values)
                row = self._row
                row.append(Fraction(1, m + 1))
                for j in range(m, 0, -1):
                    row[j - 1] = j * (row[j - 1] - row[j])
                self._values.append(row[0])
        return self._values[n]


_TABLE = BernoulliTable()


def bernoulli(n: int) -> Fraction:
    """Exact B+_n (B_1 = +1/2)."""
    return _TABLE[int(n)]


def staudt_clausen_denominator(n: int) -> int:
    """Denominator of B_n for even n >= 2: the product of primes p with (p-1) | n."""
    if n < 2 or n % 2:
        raise DomainError("von Staudt-Clausen applies to even n >= 2")
    den = 1
    for d in range(1, n + 1):
        if n % d == 0:
            p = d + 1
            if all(p % f for f in range(2, int(p ** 0.5) + 1)):
                den *= p
    return den


def check_bernoulli(n: int) -> bool:
    """Validate B+_n against the binomial recurrence and, for even n, the
    von Staudt-Clausen denominator."""
    if n >= 1:
        total = sum(comb(n + 1, k) * bernoulli(k) for k in range(n + 1))
        if total != n + 1:
            return False
    if n >= 2 and n % 2 == 0:
        return bernoulli(n).denominator == staudt_clausen_denominator(n)
    if n >= 3 and n % 2 == 1:
        return bernoulli(n) == 0
    return True


def _minus_convention(k: int) -> Fraction:
    b = bernoulli(k)
    return -b if k == 1 else b


def bernoulli_poly(n: int, q):
    """B_n(q).  Exact for int/Fraction q; mpmath arithmetic otherwise."""
    if n < 0:
        raise DomainError(f"Bernoulli polynomial degree must be non-negative, got {n}")
    if isinstance(q, (int, Fraction)):
        q = Fraction(q)
        return sum((comb(n, k) * _minus_convention(k) * q ** (n - k) for k in range(n + 1)), Fraction(0))
    q = to_mp(q)
    total = mpf(0)
    for k in range(n + 1):
        c = comb(n, k) * _minus_convention(k)
        if c:
            total += to_mp(c) * q ** (n - k)
    return total


def _check_m(m: int) -> int:
    m = int(m)
    if m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m}")
    return m


def zeta_neg(m: int) -> Fraction:
    """zeta(-m) = -B+_{m+1}/(m+1)."""
    m = _check_m(m)
    return -bernoulli(m + 1) / (m + 1)


def hurwitz_neg(m: int, q):
    """zeta(-m, q) = -B_{m+1}(q)/(m+1); exact when q is rational."""
    m = _check_m(m)
    return -bernoulli_poly(m + 1, q) / (m + 1)


def eta_neg(m: int) -> Fraction:
    m = _check_m(m)
    return (1 - 2 ** (m + 1)) * zeta_neg(m)


def lambda_neg(m: int, convention: str) -> Fraction:
    """Dirichlet lambda at -m.

    ``paper`` is 2(1 - 2^{1-s}) zeta(s) = 2 eta(s); ``standard`` is
    (1 - 2^{-s}) zeta(s).  There is deliberately no default.
    """
    m = _check_m(m)
    if convention == "paper":
        return 2 * eta_neg(m)
    if convention == "standard":
        return (1 - 2 ** m) * zeta_neg(m)
    raise DomainError(f"lambda convention must be one of {LAMBDA_CONVENTIONS}, got {convention!r}")
