from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from zetadr import exact
from zetadr.errors import DomainError, ResourceError


def test_bernoulli_examples():
    assert exact.bernoulli(0) == 1
    assert exact.bernoulli(1) == Fraction(1, 2)
    assert exact.bernoulli(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("n", range(0, 61))
def test_recurrence(n):
    assert sum(comb(n + 1, k) * exact.bernoulli(k) for k in range(n + 1)) == n + 1


def test_odd_vanish_and_denominators():
    for n in range(3, 101, 2):
        assert exact.bernoulli(n) == 0
    for n in range(2, 101, 2):
        assert exact.bernoulli(n).denominator == exact.staudt_clausen_denominator(n)
        assert exact.check_bernoulli(n)


def test_bernoulli_poly_examples():
    assert exact.bernoulli_poly(0, Fraction(7, 3)) == 1
    assert exact.bernoulli_poly(1, Fraction(1, 2)) == 0
    assert exact.bernoulli_poly(2, 0) == Fraction(1, 6)
    assert exact.bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 25), st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_poly_symmetry_and_shift(n, q):
    assert exact.bernoulli_poly(n, 1 - q) == (-1) ** n * exact.bernoulli_poly(n, q)
    if n >= 1:
        assert exact.bernoulli_poly(n, q + 1) - exact.bernoulli_poly(n, q) == n * q ** (n - 1)


def test_negative_values():
    assert exact.zeta_neg(0) == Fraction(-1, 2)
    assert exact.zeta_neg(1) == Fraction(-1, 12)
    assert exact.zeta_neg(2) == 0
    assert exact.zeta_neg(11) == Fraction(691, 32760)
    assert exact.hurwitz_neg(0, Fraction(1, 3)) == Fraction(1, 2) - Fraction(1, 3)
    assert exact.hurwitz_neg(1, Fraction(1, 2)) == Fraction(1, 24)
    assert exact.eta_neg(0) == Fraction(1, 2)
    assert exact.eta_neg(2) == 0
    assert exact.eta_neg(7) == Fraction(-17, 16)
    assert exact.lambda_neg(0, "paper") == 1
    assert exact.lambda_neg(0, "standard") == 0
    assert exact.lambda_neg(1, "standard") == Fraction(1, 12)


@pytest.mark.parametrize("m", range(0, 30))
def test_relations(m):
    assert exact.hurwitz_neg(m, 1) == exact.zeta_neg(m)
    assert exact.lambda_neg(m, "paper") == 2 * exact.eta_neg(m)
    assert exact.lambda_neg(m, "standard") == (exact.zeta_neg(m) + exact.eta_neg(m)) / 2
    # zeta(s, 2) = zeta(s) - 1
    assert exact.hurwitz_neg(m, 2) == exact.zeta_neg(m) - 1


def test_domain_errors():
    with pytest.raises(DomainError):
        exact.bernoulli(-1)
    with pytest.raises(ResourceError):
        exact.bernoulli(exact.MAX_BERNOULLI_INDEX + 1)
    with pytest.raises(DomainError):
        exact.zeta_neg(-2)
    with pytest.raises(DomainError):
        exact.lambda_neg(1, "mystery")
