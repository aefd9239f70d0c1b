"""Half-line and real-line quadrature on the exponential substitution t = e^u.

Every integrand here has the form t^{s-1} K(t) e^{-b/t} on (0, inf).  After
t = e^u it becomes e^{su} K(e^u) e^{-b e^{-u}} on the real line, whose right
tail decays like e^{-e^u} and whose left tail decays like e^{-b e^{-u}}
(b > 0) or like e^{alpha u} (b = 0).  The trapezoid rule on such functions
converges geometrically in 1/h, so the mesh is simply halved until two
levels agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NonConvergent, SingularEndpoint
from .numerics import (
    GUARD_DIGITS,
    compensated_sum,
    default_tolerance,
    is_real,
    resolve_digits,
    to_mp,
)

KERNELS = ("plain", "bose", "hurwitz", "lerch")
FTR_FAMILIES = ("gamma", "egamma", "rzf", "erzf", "hzf", "ehzf", "hlzf", "ehlzf")
_FTR_KERNEL = {
    "gamma": "plain", "egamma": "plain",
    "rzf": "bose", "erzf": "bose",
    "hzf": "hurwitz", "ehzf": "hurwitz",
    "hlzf": "lerch", "ehlzf": "lerch",
}
MAX_TAU = 16
MAX_LEVEL = 12
MAX_WINDOW = 20_000


@dataclass(frozen=True)
class QuadratureResult:
    value: mpf | mpc
    abs_error_estimate: mpf
    evaluations: int
    level: int
    history: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class HalfLineIntegrand:
    """t^{sigma-1} K(t) e^{-b/t} with K chosen by ``kernel``:

    plain    e^{-t}
    bose     1/(e^t - 1)
    hurwitz  e^{-a t}/(1 - e^{-t})
    lerch    e^{-a t}/(1 - z e^{-t})
    """

    sigma: mpf
    b: mpf = mpf(0)
    kernel: str = "plain"
    a: mpf | mpc = mpf(1)
    z: mpf | mpc = mpf(1)

    def __post_init__(self):
        object.__setattr__(self, "sigma", to_mp(self.sigma))
        object.__setattr__(self, "b", to_mp(self.b))
        object.__setattr__(self, "a", to_mp(self.a))
        object.__setattr__(self, "z", to_mp(self.z))
        self.validate()

    def validate(self):
        if self.kernel not in KERNELS:
            raise DomainError(f"unknown kernel {self.kernel!r}")
        if not is_real(self.sigma):
            raise DomainError("sigma must be real; pass the imaginary part as s_imag")
        if not is_real(self.b) or self.b < 0:
            raise DomainError(f"b must be real and >= 0, got {self.b}")
        if self.kernel in ("hurwitz", "lerch") and not mpmath.re(self.a) > 0:
            raise DomainError(f"Re(a) must be positive, got a = {self.a}")
        if self.kernel == "lerch" and abs(self.z) > 1:
            raise DomainError(f"|z| must be <= 1, got z = {self.z}")
        if self.b == 0:
            rate = self.left_decay_rate()
            if not rate > 0:
                raise SingularEndpoint(
                    f"{self.kernel} integrand with b = 0 diverges at t -> 0 for sigma = {self.sigma}"
                )

    def _pole_at_zero(self) -> bool:
        return self.kernel in ("bose", "hurwitz") or (self.kernel == "lerch" and self.z == 1)

    def left_decay_rate(self) -> mpf | None:
        """Exponent alpha with |f(u)| ~ e^{alpha u} as u -> -inf, or None when
        b > 0 makes the decay double exponential."""
        if self.b > 0:
            return None
        return self.sigma - 1 if self._pole_at_zero() else self.sigma

    def kernel_at(self, t):
        if self.kernel == "plain":
            return mpmath.exp(-t)
        if self.kernel == "bose":
            return 1 / mpmath.expm1(t)
        if self.kernel == "hurwitz":
            return mpmath.exp(-self.a * t) / -mpmath.expm1(-t)
        if self.z == 1:
            return mpmath.exp(-self.a * t) / -mpmath.expm1(-t)
        return mpmath.exp(-self.a * t) / (1 - self.z * mpmath.exp(-t))

    def at_u(self, u, s):
        t = mpmath.exp(u)
        return mpmath.exp(s * u - self.b / t) * self.kernel_at(t)


def _find_edge(F, direction: int, threshold: mpf, counter: list) -> mpf:
    u = mpf(0)
    misses = 0
    while True:
        step = max(mpf(1), abs(u) / 4)
        u += direction * step
        if abs(u) > MAX_WINDOW:
            raise NonConvergent(f"integrand does not decay within |u| <= {MAX_WINDOW}")
        counter[0] += 1
        if abs(F(u)) < threshold:
            misses += 1
            if misses >= 2:
                return u
        else:
            misses = 0


def trapezoid_real_line(
    F: Callable,
    tol,
    h0,
    left_rate=None,
    right_rate=None,
    min_level: int = 0,
    max_level: int = MAX_LEVEL,
) -> QuadratureResult:
    """Nested trapezoid rule for a real-line integrand decaying at both ends.

    ``left_rate``/``right_rate`` give the exponential decay rate of a tail
    that is only single-exponential; the truncated tail is then estimated as
    |F(edge)|/rate.  Refinement stops once two successive levels differ by at
    most ``tol * max(1, |value|)``.
    """
    tol = mpf(tol)
    counter = [1]
    peak = abs(F(mpf(0)))
    threshold = tol * mpf("1e-2") * max(mpf(1), peak)
    A = _find_edge(F, -1, threshold, counter)
    B = _find_edge(F, +1, threshold, counter)
    tail = mpf(0)
    if left_rate is not None:
        tail += abs(F(A)) / left_rate
    if right_rate is not None:
        tail += abs(F(B)) / right_rate

    h = mpf(h0)
    j_lo, j_hi = int(mpmath.ceil(A / h)), int(mpmath.floor(B / h))
    values = [F(j * h) for j in range(j_lo, j_hi + 1)]
    counter[0] += len(values)
    total = compensated_sum(values)
    abs_total = compensated_sum(abs(v) for v in values)
    estimate = h * total
    history = [estimate]
    level = 0
    diff = mpmath.inf
    while True:
        if level >= 1 and level >= min_level and diff <= tol * max(mpf(1), abs(estimate)):
            break
        if level >= max_level:
            raise NonConvergent(f"trapezoid not converged at level {level}", _result(estimate, diff, tail, counter, level, history, h, abs_total))
        level += 1
        h /= 2
        j_lo, j_hi = int(mpmath.ceil(A / h)), int(mpmath.floor(B / h))
        start = j_lo if j_lo % 2 else j_lo + 1
        new = [F(j * h) for j in range(start, j_hi + 1, 2)]
        counter[0] += len(new)
        total = compensated_sum([total] + new)
        abs_total = compensated_sum([abs_total] + [abs(v) for v in new])
        previous, estimate = estimate, h * total
        history.append(estimate)
        diff = abs(estimate - previous)
    return _result(estimate, diff, tail, counter, level, history, h, abs_total)


def _result(estimate, diff, tail, counter, level, history, h, abs_total):
    rounding = h * abs_total * mpf(10) ** (-mp.dps)
    if isinstance(estimate, mpc) and estimate.imag == 0:
        estimate = estimate.real
    return QuadratureResult(
        value=estimate,
        abs_error_estimate=diff + tail + rounding,
        evaluations=counter[0],
        level=level,
        history=tuple(history),
    )


def _mesh(tau) -> mpf:
    return min(mpf(1) / 2, mpmath.pi / (8 * max(mpf(1), abs(tau))))


def integrate_halfline(
    f: HalfLineIntegrand,
    s_imag=0,
    tol=None,
    digits: int | None = None,
    min_level: int = 0,
) -> QuadratureResult:
    """Integral of t^{s-1} K(t) e^{-b/t} over (0, inf) with s = sigma + i*s_imag."""
    p = resolve_digits(digits)
    tol = default_tolerance(p) if tol is None else to_mp(tol)
    with mp.workdps(p + GUARD_DIGITS):
        s_imag = to_mp(s_imag)
        s = f.sigma if s_imag == 0 else mpc(f.sigma, s_imag)
        return trapezoid_real_line(
            lambda u: f.at_u(u, s),
            tol,
            _mesh(s_imag),
            left_rate=f.left_decay_rate(),
            min_level=min_level,
        )


def gamma_b(s, b, tol=None, digits: int | None = None, min_level: int = 0) -> QuadratureResult:
    """Extended gamma function: integral of t^{s-1} e^{-t - b/t} over (0, inf)."""
    p = resolve_digits(digits)
    with mp.workdps(p + GUARD_DIGITS):
        s = to_mp(s)
        b = to_mp(b)
        if not is_real(b) or b < 0:
            raise DomainError(f"b must be real and >= 0, got {b}")
        integrand = HalfLineIntegrand(sigma=mpmath.re(s), b=b, kernel="plain")
        return integrate_halfline(integrand, mpmath.im(s), tol=tol, digits=p, min_level=min_level)


def ftr_profile(family: str, sigma, a=1, b=0, z=1) -> tuple[Callable, mpf | None]:
    """The real-line profile whose Fourier transform at tau represents the family.

    Returns ``(profile, left_rate)``.  The extended families carry the extra
    factor e^{-b e^{-x}}; the plain ones require b = 0.
    """
    if family not in FTR_FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FTR_FAMILIES}")
    sigma, a, b, z = to_mp(sigma), to_mp(a), to_mp(b), to_mp(z)
    extended = family in ("egamma", "erzf", "ehzf", "ehlzf")
    if not extended:
        b = mpf(0)
    kernel = _FTR_KERNEL[family]
    if kernel == "bose":
        a, z = mpf(1), mpf(1)
    # Reuse the half-line validation: same constraints, same tails.
    spec = HalfLineIntegrand(sigma=sigma, b=b, kernel=kernel, a=a, z=z)

    def profile(x):
        ex = mpmath.exp(x)
        damp = mpmath.exp(sigma * x - b / ex)
        if kernel == "plain":
            return damp * mpmath.exp(-ex)
        if kernel == "bose":
            return damp * mpmath.exp(-ex) / -mpmath.expm1(-ex)
        if kernel == "hurwitz" or z == 1:
            return damp * mpmath.exp(-a * ex) / -mpmath.expm1(-ex)
        return damp * mpmath.exp(-a * ex) / (1 - z * mpmath.exp(-ex))

    return profile, spec.left_decay_rate()


def ftr_check(family: str, sigma, tau, a=1, b=0, z=1, tol=None, digits: int | None = None) -> QuadratureResult:
    """Integral over the real line of e^{i tau x} times the family's profile.

    Equals Gamma(sigma + i tau) times the family's function value (or the
    extended integral itself for the b-families).
    """
    p = resolve_digits(digits)
    tol = default_tolerance(p) if tol is None else to_mp(tol)
    with mp.workdps(p + GUARD_DIGITS):
        tau = to_mp(tau)
        if abs(tau) > MAX_TAU:
            raise DomainError(f"|tau| must be <= {MAX_TAU}")
        profile, left_rate = ftr_profile(family, sigma, a, b, z)
        if tau == 0:
            F = profile
        else:
            phase = mpc(0, tau)
            F = lambda x: mpmath.exp(phase * x) * profile(x)
        return trapezoid_real_line(F, tol, _mesh(tau), left_rate=left_rate)


def halfline_moments(f: HalfLineIntegrand, m_max: int, tol=None, digits: int | None = None) -> list:
    """Integrals at s = sigma, sigma - 1, ..., sigma - m_max on one shared mesh.

    The integrands differ only by the factor t^{-m}, so each node costs one
    kernel evaluation for the whole batch.  The window is the union of the
    m = 0 and m = m_max windows; refinement stops when every member has
    converged.  Real s only.
    """
    p = resolve_digits(digits)
    tol = default_tolerance(p) if tol is None else to_mp(tol)
    if m_max < 0:
        raise DomainError("m_max must be >= 0")
    with mp.workdps(p + GUARD_DIGITS):
        last = HalfLineIntegrand(sigma=f.sigma - m_max, b=f.b, kernel=f.kernel, a=f.a, z=f.z)

        def row(u):
            base = f.at_u(u, f.sigma)
            r = mpmath.exp(-u)
            out = [base]
            for _ in range(m_max):
                base *= r
                out.append(base)
            return out

        counter = [2]
        threshold = tol * mpf("1e-2") * max(mpf(1), abs(f.at_u(mpf(0), f.sigma)))
        A = _find_edge(lambda u: last.at_u(u, last.sigma), -1, threshold, counter)
        B = _find_edge(lambda u: f.at_u(u, f.sigma), +1, threshold, counter)
        dim = m_max + 1
        tails = [mpf(0)] * dim
        if f.b == 0:
            left = row(A)
            tails = [abs(left[m]) / (f.left_decay_rate() - m) for m in range(dim)]

        def add(totals, abs_totals, nodes):
            rows = [row(u) for u in nodes]
            counter[0] += len(rows)
            for m in range(dim):
                column = [r[m] for r in rows]
                totals[m] = compensated_sum([totals[m]] + column)
                abs_totals[m] = compensated_sum([abs_totals[m]] + [abs(v) for v in column])

        h = _mesh(0)
        totals, abs_totals = [mpf(0)] * dim, [mpf(0)] * dim
        j_lo, j_hi = int(mpmath.ceil(A / h)), int(mpmath.floor(B / h))
        add(totals, abs_totals, [j * h for j in range(j_lo, j_hi + 1)])
        estimates = [h * t for t in totals]
        histories = [[e] for e in estimates]
        diffs = [mpmath.inf] * dim
        level = 0
        while not (level >= 1 and all(d <= tol * max(mpf(1), abs(e)) for d, e in zip(diffs, estimates))):
            if level >= MAX_LEVEL:
                raise NonConvergent(f"moment quadrature not converged at level {level}")
            level += 1
            h /= 2
            j_lo, j_hi = int(mpmath.ceil(A / h)), int(mpmath.floor(B / h))
            start = j_lo if j_lo % 2 else j_lo + 1
            add(totals, abs_totals, [j * h for j in range(start, j_hi + 1, 2)])
            new = [h * t for t in totals]
            diffs = [abs(x - y) for x, y in zip(new, estimates)]
            estimates = new
            for hist, e in zip(histories, estimates):
                hist.append(e)
        return [
            QuadratureResult(
                value=estimates[m],
                abs_error_estimate=diffs[m] + tails[m] + h * abs_totals[m] * mpf(10) ** (-mp.dps),
                evaluations=counter[0],
                level=level,
                history=tuple(histories[m]),
            )
            for m in range(dim)
        ]
