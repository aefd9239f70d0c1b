"""Delta-comb (distributional) representations and their pairings with test functions.

A comb is a weighted sum of Dirac deltas delta(tau - i(sigma + k)).  Paired
with Gamma(s) phi(s) each delta evaluates phi at s = -k, so a comb reduces
to a nested series of weights times phi at integers.  The weights are
products of one-dimensional factors x^i / i!, one per factorial index, times
z^n for the geometric index n; exactly one factorial index may have base -n
("coupled"), which is what produces the e^{-n} decay summed over n.

Summation order matters: at fixed m the sum over n of n^m diverges, so the
factorial indices are always summed first at fixed n.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Mapping

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NotConverged
from .numerics import (
    GUARD_DIGITS,
    SeriesResult,
    default_tolerance,
    fmt,
    is_real,
    resolve_digits,
    to_mp,
)

FAMILIES = ("gamma", "egamma", "rzf", "erzf", "hzf", "ehzf", "hlzf", "ehlzf")
TEST_FUNCTION_KINDS = ("one", "eta-factor", "lambda-factor-paper", "lambda-factor-standard", "exp-scale", "tabulated")
MIN_FACTORIAL_CAP = 8
MIN_GEOMETRIC_CAP = 40
DEFAULT_CAP = 60
MAX_COUPLED_TERMS = 20_000
_IOTA_MODULUS = 1  # |i|, the delta rescaling factor between the two printed forms


@dataclass(frozen=True)
class IndexSpec:
    """One summation index.

    Factorial indices contribute ``base**i / i!`` to the weight and
    ``offset * i`` to the evaluation point; ``base`` is the string "-n" for
    the index coupled to the geometric one.  Geometric indices contribute
    ``ratio**n`` and never move the evaluation point.
    """

    name: str
    decay: str
    lower: int = 0
    base: object = None
    offset: int = 0
    ratio: object = None

    @property
    def coupled(self) -> bool:
        return isinstance(self.base, str)


@dataclass(frozen=True)
class DeltaComb:
    family: str
    params: Mapping
    plan: tuple
    form: str = "standard"
    delta_scale: Fraction = Fraction(1)
    prefactor: str = "2*pi"
    repairs: tuple = ()

    @property
    def index_names(self) -> tuple:
        return tuple(spec.name for spec in self.plan)

    @property
    def geometric(self) -> IndexSpec | None:
        for spec in self.plan:
            if spec.decay == "geometric":
                return spec
        return None

    def coeff(self, indices=None, **kw):
        """(weight, eval_point) for a multi-index given by name.

        The weight is exact (int/Fraction) whenever the parameters are.
        """
        idx = dict(indices or {}, **kw)
        missing = set(self.index_names) - set(idx)
        if missing:
            raise DomainError(f"missing indices {sorted(missing)} for {self.family} comb")
        weight = self.delta_scale
        point = 0
        geo = self.geometric
        for spec in self.plan:
            i = int(idx[spec.name])
            if i < spec.lower:
                raise DomainError(f"index {spec.name} starts at {spec.lower}")
            if spec.decay == "geometric":
                weight = weight * _power(spec.ratio, i)
                continue
            base = -int(idx[geo.name]) if spec.coupled else spec.base
            weight = weight * _power(base, i) / factorial(i)
            point += spec.offset * i
        return _tidy(weight), point

    def terms(self, trunc: int | Mapping = DEFAULT_CAP):
        caps = _caps(self, trunc, check=False)
        ranges = [range(spec.lower, caps[spec.name] + 1) for spec in self.plan]
        for combo in product(*ranges):
            indices = dict(zip(self.index_names, combo))
            weight, point = self.coeff(indices)
            yield indices, weight, point

    def dump(self, trunc: int | Mapping = DEFAULT_CAP, digits: int | None = None) -> list:
        """JSON-ready list of {indices, weight, eval_point}; weights as decimal strings."""
        p = resolve_digits(digits)
        out = []
        with mp.workdps(p + GUARD_DIGITS):
            for indices, weight, point in self.terms(trunc):
                entry = {"indices": indices, "weight": fmt(to_mp(weight), p), "eval_point": point}
                if isinstance(weight, (int, Fraction)):
                    entry["weight_exact"] = str(Fraction(weight))
                out.append(entry)
        return out

    def to_json(self, trunc: int | Mapping = DEFAULT_CAP, digits: int | None = None) -> str:
        return json.dumps(self.dump(trunc, digits), indent=1)


def _power(base, i: int):
    if isinstance(base, (int, Fraction)):
        return Fraction(base) ** i
    return base ** i


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, mpc) and x.imag == 0:
        return x.real
    return x


def _param(x, default):
    if x is None:
        x = default
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return _param(to_mp(x), default)
    if isinstance(x, float):
        return Fraction(x)
    x = to_mp(x)
    if isinstance(x, mpc) and x.imag == 0:
        x = x.real
    return x


_REPAIRS = {
    "hzf": ("denominator printed n!k! read as k!m! (dangling n-sum removed)",),
    "ehzf": ("denominator printed n!l!k! read as k!l!m!",),
    "hlzf": ("factor printed (-z)^k m^k read as z^m (-m)^k with m the geometric index",),
    "ehlzf": (
        "duplicated outer index m resolved to distinct indices m (for a) and n (geometric)",
        "evaluation point printed sigma+n+k-l read as sigma+m+k-l so the geometric index does not shift it",
    ),
}


def build_dr(family: str, a=None, b=None, z=None, form: str = "standard") -> DeltaComb:
    """Construct the delta comb of a zeta-family member.

    ``form="alternate"`` is the delta(i tau + (sigma + k)) spelling; with
    delta(alpha x) = delta(x)/|alpha| and |i| = 1 it yields identical weights.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if form not in ("standard", "alternate"):
        raise DomainError(f"unknown delta form {form!r}")
    a = _param(a, 1)
    b = _param(b, 0)
    z = _param(z, 1)
    if not is_real(to_mp(b)) or to_mp(b) < 0:
        raise DomainError(f"b must be real and >= 0, got {b}")
    if family in ("hzf", "ehzf", "hlzf", "ehlzf") and not mpmath.re(to_mp(a)) > 0:
        raise DomainError(f"Re(a) must be positive, got a = {a}")
    if family in ("hlzf", "ehlzf") and abs(to_mp(z)) > 1:
        raise DomainError(f"|z| must be <= 1, got z = {z}")
    if family in ("gamma", "rzf", "hzf", "hlzf"):
        b = Fraction(0)

    F = lambda name, base, offset: IndexSpec(name, "factorial", 0, base, offset)
    G = lambda name, ratio=1: IndexSpec(name, "geometric", 0, None, 0, ratio)
    plans = {
        "gamma": (F("n", -1, 1),),
        "egamma": (F("n", -b, -1), F("m", -1, 1)),
        "rzf": (G("n"), F("l", -1, 1), F("m", "-n", 1)),
        "erzf": (G("n"), F("k", -1, 1), F("l", -b, -1), F("m", "-n", 1)),
        "hzf": (G("n"), F("m", -a, 1), F("k", "-n", 1)),
        "ehzf": (G("n"), F("l", -b, -1), F("m", -a, 1), F("k", "-n", 1)),
        "hlzf": (G("m", z), F("n", -a, 1), F("k", "-m", 1)),
        "ehlzf": (G("n", z), F("m", -a, 1), F("l", -b, -1), F("k", "-n", 1)),
    }
    scale = Fraction(1) if form == "standard" else Fraction(1, _IOTA_MODULUS)
    params = {"a": a, "b": b, "z": z}
    return DeltaComb(family, params, plans[family], form=form, delta_scale=scale,
                     repairs=_REPAIRS.get(family, ()))


# ---------------------------------------------------------------- test functions


@dataclass(frozen=True)
class TestFn:
    """phi(s) in the pairing <F, Gamma(s) phi(s)>, evaluated only at integers.

    eta-factor            1 - 2^{1-s}
    lambda-factor-paper   2 (1 - 2^{1-s})
    lambda-factor-standard 1 - 2^{-s}
    exp-scale             c^s
    tabulated             explicit values keyed by integer s
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str = "one"
    c: Fraction | None = None
    table: Mapping | None = field(default=None, hash=False)

    def __post_init__(self):
        if self.kind not in TEST_FUNCTION_KINDS:
            raise DomainError(f"unknown test function kind {self.kind!r}")
        if self.kind == "exp-scale":
            if self.c is None or not Fraction(self.c) > 0:
                raise DomainError("exp-scale needs a rational c > 0")
            object.__setattr__(self, "c", Fraction(self.c))
        if self.kind == "tabulated" and not self.table:
            raise DomainError("tabulated test function needs a table")

    def __call__(self, s: int):
        s = int(s)
        if self.kind == "one":
            return 1
        if self.kind == "eta-factor":
            return 1 - Fraction(2) ** (1 - s)
        if self.kind == "lambda-factor-paper":
            return 2 * (1 - Fraction(2) ** (1 - s))
        if self.kind == "lambda-factor-standard":
            return 1 - Fraction(2) ** (-s)
        if self.kind == "exp-scale":
            return self.c ** s
        try:
            return self.table[s]
        except KeyError:
            raise DomainError(f"tabulated test function has no value at s = {s}") from None

    def exponential_parts(self):
        """[(coef, r), ...] with phi(-k) = Sum coef * r^k for every integer k, or
        None for tabulated functions."""
        if self.kind == "one":
            return [(Fraction(1), Fraction(1))]
        if self.kind == "eta-factor":
            return [(Fraction(1), Fraction(1)), (Fraction(-2), Fraction(2))]
        if self.kind == "lambda-factor-paper":
            return [(Fraction(2), Fraction(1)), (Fraction(-4), Fraction(2))]
        if self.kind == "lambda-factor-standard":
            return [(Fraction(1), Fraction(1)), (Fraction(-1), Fraction(2))]
        if self.kind == "exp-scale":
            return [(Fraction(1), 1 / self.c)]
        return None

    def growth(self, direction: int) -> mpf:
        """Bound R >= 1 on |phi(s - direction)/phi(s)| far out, used by tail bounds."""
        if self.kind == "one":
            return mpf(1)
        if self.kind in ("eta-factor", "lambda-factor-paper", "lambda-factor-standard"):
            return mpf(2) if direction > 0 else mpf(1)
        if self.kind == "exp-scale":
            c = to_mp(self.c)
            return max(mpf(1), 1 / c if direction > 0 else c)
        keys = sorted(self.table)
        worst = mpf(1)
        for k0, k1 in zip(keys, keys[1:]):
            v0, v1 = abs(to_mp(self.table[k0])), abs(to_mp(self.table[k1]))
            if k1 == k0 + 1 and v0 > 0 and v1 > 0:
                worst = max(worst, v0 / v1 if direction > 0 else v1 / v0)
        return worst


# ---------------------------------------------------------------- pairing


@dataclass(frozen=True)
class InnerProductResult:
    value: mpf | mpc
    value_with_2pi: mpf | mpc
    truncations: dict
    tail_bound: mpf
    n_start: int


def _caps(comb: DeltaComb, trunc, check: bool = True) -> dict:
    if isinstance(trunc, Mapping):
        unknown = set(trunc) - set(comb.index_names)
        if unknown:
            raise DomainError(f"unknown indices {sorted(unknown)} for {comb.family} comb")
        caps = {name: int(trunc.get(name, DEFAULT_CAP)) for name in comb.index_names}
    else:
        caps = {name: int(trunc) for name in comb.index_names}
    if check:
        for spec in comb.plan:
            floor = MIN_GEOMETRIC_CAP if spec.decay == "geometric" else MIN_FACTORIAL_CAP
            if caps[spec.name] < floor:
                raise DomainError(f"cap for {spec.decay} index {spec.name} must be >= {floor}")
    return caps


def _factor_weights(spec: IndexSpec, cap: int):
    base = to_mp(spec.base)
    w = [mpf(1)]
    for i in range(1, cap + 1):
        w.append(w[-1] * base / i)
    return w[spec.lower:], spec.lower


def _convolve(A: dict, weights, lower: int, sign: int) -> dict:
    out: dict = {}
    for o, wa in A.items():
        for i, wi in enumerate(weights, start=lower):
            key = o + sign * i
            out[key] = out.get(key, 0) + wa * wi
    return out


def _pairing_pass(comb, phi, caps, n_start, work_dps, inner_tol):
    with mp.workdps(work_dps):
        geo = comb.geometric
        coupled = next((s for s in comb.plan if s.coupled), None)
        plain = [s for s in comb.plan if s.decay == "factorial" and not s.coupled]
        A: dict = {0: mpf(1) * to_mp(comb.delta_scale)}
        A_abs: dict = {0: abs(A[0])}
        for spec in plain:
            weights, lower = _factor_weights(spec, caps[spec.name])
            A = _convolve(A, weights, lower, spec.offset)
            A_abs = _convolve(A_abs, [abs(w) for w in weights], lower, spec.offset)
        phi_cache: dict = {}

        def phi_at(k):
            # eval point k pairs with s = -k
            if k not in phi_cache:
                phi_cache[k] = to_mp(phi(-k))
            return phi_cache[k]

        if geo is None:
            terms = [A[o] * phi_at(o) for o in sorted(A)]
            magnitude = max((A_abs[o] * abs(phi_at(o)) for o in A), default=mpf(0))
            return mpmath.fsum(terms), magnitude, {}, [], len(terms)

        B: list = []
        B_abs: list = []
        parts = phi.exponential_parts()
        if parts is not None:
            # phi(-(o + j)) = Sum c r^o r^j, so the o-sum collapses once per part
            collapsed = []
            for c, r in parts:
                c, r = to_mp(c), to_mp(r)
                collapsed.append((
                    c * mpmath.fsum(A[o] * r ** o for o in sorted(A)),
                    abs(c) * mpmath.fsum(A_abs[o] * abs(r) ** o for o in sorted(A)),
                    r,
                ))

        def B_at(j):
            while len(B) <= j:
                jj = len(B)
                if parts is not None:
                    B.append(mpmath.fsum(cs * r ** jj for cs, _, r in collapsed))
                    B_abs.append(mpmath.fsum(ca * abs(r) ** jj for _, ca, r in collapsed))
                else:
                    B.append(mpmath.fsum(A[o] * phi_at(o + jj) for o in sorted(A)))
                    B_abs.append(mpmath.fsum(A_abs[o] * abs(phi_at(o + jj)) for o in A))
            return B[j], B_abs[j]

        ratio = to_mp(geo.ratio)
        R_plus = phi.growth(+1)
        floor_cap = caps[coupled.name]
        outer_terms = []
        magnitude = mpf(0)
        used_j = 0
        count = 0
        for n in range(n_start, caps[geo.name] + 1):
            x = mpf(-n)
            weight = mpf(1)
            inner = []
            small = 0
            j = 0
            while True:
                if j > 0:
                    weight = weight * x / j
                b, b_abs = B_at(j)
                term = weight * b
                inner.append(term)
                mag = abs(weight) * b_abs
                magnitude = max(magnitude, mag)
                small = small + 1 if mag < inner_tol else 0
                if j >= floor_cap and j > n * R_plus and small >= 3:
                    break
                if n == 0 and j >= floor_cap:
                    break
                j += 1
                if j > MAX_COUPLED_TERMS:
                    raise NotConverged(f"coupled index {coupled.name} did not settle at n = {n}")
            used_j = max(used_j, j)
            count += len(inner)
            outer_terms.append(ratio ** n * mpmath.fsum(inner))
        return mpmath.fsum(outer_terms), magnitude, {coupled.name: used_j}, outer_terms, count


def inner_product(
    comb: DeltaComb,
    phi: TestFn | None = None,
    trunc: int | Mapping = DEFAULT_CAP,
    n_start: int = 0,
    tol=None,
    digits: int | None = None,
) -> InnerProductResult:
    """Pair the comb with Gamma(s) phi(s); the result excludes the 2 pi prefactor.

    ``trunc`` caps each index (an int for all, or a mapping by index name).
    The factorial index coupled to the geometric one treats its cap as a
    floor and keeps going at each n until its terms are negligible, since
    Sum_m (-n)^m / m! needs far more than a fixed number of terms for large n.
    ``n_start`` is the first value of the geometric index.  If ``tol`` is
    given and the tail bound exceeds it, :class:`NotConverged` is raised with
    the result attached.
    """
    phi = phi or TestFn("one")
    if n_start not in (0, 1):
        raise DomainError("n_start must be 0 or 1")
    p = resolve_digits(digits)
    caps = _caps(comb, trunc)
    inner_tol = mpf(10) ** (-(p + 5))

    # The coupled sums Sum_j (-n)^j / j! B_j cancel down from about e^{n R};
    # carry that many extra digits up front, and redo if the measured
    # magnitude turns out larger.
    allowance = 0
    geo = comb.geometric
    if geo is not None and any(spec.coupled for spec in comb.plan):
        allowance = int(caps[geo.name] * phi.growth(+1) * mpmath.log10(mpmath.e)) + 2
    work = p + GUARD_DIGITS + allowance
    value, magnitude, extra, outer, count = _pairing_pass(comb, phi, caps, n_start, work, inner_tol)
    with mp.workdps(work):
        needed = int(mpmath.ceil(mpmath.log10(magnitude))) + 2 if magnitude > 1 else 0
    if needed > allowance:
        work = p + GUARD_DIGITS + needed
        value, magnitude, extra, outer, count = _pairing_pass(comb, phi, caps, n_start, work, inner_tol)

    with mp.workdps(work):
        tail = magnitude * count * mpf(10) ** (-work)
        scale = max(mpf(1), mpmath.fsum(abs(t) for t in outer) if outer else abs(value))
        if geo is not None:
            tail += scale * 3 * inner_tol
            if len(outer) >= 2:
                last, prev = abs(outer[-1]), abs(outer[-2])
                if prev == 0:
                    tail += 0 if last == 0 else mpmath.inf
                else:
                    r = last / prev
                    tail += mpmath.inf if r >= 1 else 2 * last * r / (1 - r)
        for spec in comb.plan:
            if spec.decay != "factorial" or spec.coupled:
                continue
            x = abs(to_mp(spec.base)) * phi.growth(spec.offset)
            K = caps[spec.name]
            rho = x / (K + 2)
            if rho >= 1:
                tail = mpmath.inf
                continue
            tail += 4 * x ** (K + 1) / mpmath.factorial(K + 1) / (1 - rho) * mpmath.exp(x) * scale
        value = +value
        if isinstance(value, mpc) and value.imag == 0:
            value = value.real

    truncations = dict(caps)
    truncations.update(extra)
    with mp.workdps(p + GUARD_DIGITS):
        value = +value
        result = InnerProductResult(
            value=value,
            value_with_2pi=2 * mpmath.pi * value,
            truncations=truncations,
            tail_bound=+tail,
            n_start=n_start,
        )
    if tol is not None and result.tail_bound > to_mp(tol):
        raise NotConverged(f"tail bound {fmt(result.tail_bound, 5)} exceeds tolerance", result)
    return result


def gamma_dr_pairing(
    g: Callable[[int], object],
    trunc: int = DEFAULT_CAP,
    tol=None,
    digits: int | None = None,
    strict: bool = False,
) -> SeriesResult:
    """The reversed pairing <Gamma(s), g(s)> without 2 pi: Sum_{m<=trunc} (-1)^m g(-m)/m!.

    If every g(-m) is an int or Fraction the sum is exact and converted once
    at the end (``exact`` holds the rational).  The tail is estimated from the
    decay of the last two non-zero terms.
    """
    p = resolve_digits(digits)
    tol = default_tolerance(p) if tol is None else to_mp(tol)
    with mp.workdps(p + GUARD_DIGITS):
        raw = [g(-m) for m in range(trunc + 1)]
        exact_mode = all(isinstance(v, (int, Fraction)) for v in raw)
        if exact_mode:
            terms = [Fraction((-1) ** m, factorial(m)) * v for m, v in enumerate(raw)]
            total = sum(terms, Fraction(0))
            value = to_mp(total)
            mags = [abs(to_mp(t)) for t in terms]
        else:
            terms = [(-1) ** m * to_mp(v) / mpmath.factorial(m) for m, v in enumerate(raw)]
            total = None
            value = mpmath.fsum(terms)
            mags = [abs(t) for t in terms]
        nonzero = [i for i, mgn in enumerate(mags) if mgn != 0]
        if len(nonzero) >= 2:
            i1, i2 = nonzero[-2], nonzero[-1]
            r = (mags[i2] / mags[i1]) ** (mpf(1) / (i2 - i1))
            tail = mpmath.inf if r >= 1 else 2 * mags[i2] * r / (1 - r)
        elif nonzero:
            tail = mags[nonzero[-1]]
        else:
            tail = mpf(0)
        if isinstance(value, mpc) and value.imag == 0:
            value = value.real
        result = SeriesResult(value=+value, terms_used=trunc + 1, tail_estimate=+tail,
                              converged=bool(tail <= tol), exact=total)
    if strict and not result.converged:
        raise NotConverged("reversed pairing not converged", result)
    return result
