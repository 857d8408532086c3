"""Local power-series solutions of the Gauss and Heun equations at 0.

Series coefficients are produced by recurrences in whatever number type the
parameters carry: exact ``Fraction`` parameters give exact coefficients,
mpmath parameters give floating ones.  :func:`eval_truncated` always re-runs
the recurrence in mpmath at the requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Callable, Iterator

import mpmath

from .exact import Poly, as_fraction, is_exact, to_mp


class ConvergenceError(ValueError):
    """Evaluation point outside the trusted disc, or no convergence."""


class BranchError(ValueError):
    """Evaluation point on (or too close to) a branch cut."""


def _param(v):
    if is_exact(v):
        return Fraction(v)
    if isinstance(v, str):
        return as_fraction(v)
    return v


def _is_nonpositive_int(v) -> bool:
    if is_exact(v):
        return Fraction(v).denominator == 1 and v <= 0
    v = mpmath.mpmathify(v)
    return mpmath.im(v) == 0 and mpmath.isint(mpmath.re(v)) and mpmath.re(v) <= 0


@dataclass(frozen=True)
class HpgParams:
    A: object
    B: object
    C: object

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, _param(getattr(self, name)))

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in (self.A, self.B, self.C))

    def exponent_differences(self) -> tuple:
        """At z = 0, 1, infinity."""
        A, B, C = self.A, self.B, self.C
        return (1 - C, C - A - B, A - B)

    def as_mp(self) -> "HpgParams":
        return HpgParams(*(to_mp(v) for v in (self.A, self.B, self.C)))


@dataclass(frozen=True)
class HeunParams:
    """Parameters in the ``Hl(t; q; a, b; c; d; x)`` ordering."""

    t: object
    q: object
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        for name in ("t", "q", "a", "b", "c", "d"):
            object.__setattr__(self, name, _param(getattr(self, name)))
        if self.t == 0 or self.t == 1:
            raise ValueError(f"Heun singularity t = {self.t} collides with 0 or 1")

    @property
    def e(self):
        """Exponent parameter at ``x = t``."""
        return self.a + self.b - self.c - self.d + 1

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.astuple())

    def astuple(self) -> tuple:
        return (self.t, self.q, self.a, self.b, self.c, self.d)

    def exponent_differences(self) -> tuple:
        """At x = 0, 1, t, infinity."""
        return (1 - self.c, 1 - self.d, self.c + self.d - self.a - self.b, self.a - self.b)

    def as_mp(self) -> "HeunParams":
        return HeunParams(*(to_mp(v) for v in self.astuple()))

    def replace(self, **changes) -> "HeunParams":
        vals = dict(zip(("t", "q", "a", "b", "c", "d"), self.astuple()))
        vals.update(changes)
        return HeunParams(**vals)


def _hpg_terms(p: HpgParams) -> Iterator:
    A, B, C = p.A, p.B, p.C
    coef = Fraction(1) if p.exact else mpmath.mpf(1)
    k = 0
    while True:
        yield coef
        coef = coef * (A + k) * (B + k) / ((C + k) * (k + 1))
        k += 1


def _heun_terms(p: HeunParams) -> Iterator:
    # x(x-1)(x-t) Y'' + [c(x-1)(x-t) + d x(x-t) + e x(x-1)] Y' + (ab x - q) Y = 0,
    # collected at x^n:
    #   t (n+1)(n+c) a_{n+1} = [n((n-1)(1+t) + c(1+t) + d t + e) + q] a_n
    #                          - (n-1+a)(n-1+b) a_{n-1}
    t, q, a, b, c, d = p.astuple()
    e = p.e
    one = Fraction(1) if p.exact else mpmath.mpf(1)
    prev, cur = 0 * one, one
    n = 0
    while True:
        yield cur
        nxt = (
            (n * ((n - 1) * (1 + t) + c * (1 + t) + d * t + e) + q) * cur
            - (n - 1 + a) * (n - 1 + b) * prev
        ) / (t * (n + 1) * (n + c))
        prev, cur = cur, nxt
        n += 1


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c_0..c_order`` of a power series centred at 0.

    ``terminated`` means every coefficient past ``order`` is known to vanish.
    ``terms`` regenerates the full coefficient stream from parameters (used
    for adaptive numeric evaluation); it is ``None`` for bare polynomials.
    """

    coefficients: tuple
    order: int
    terminated: bool = False
    radius: object = 1
    center: int = 0
    terms: Callable[[bool], Iterator] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_poly(cls, p: Poly) -> "TruncatedSeries":
        return cls(tuple(p.coeffs), max(p.degree, 0), terminated=True, radius=mpmath.inf)

    def __getitem__(self, k: int):
        if k < len(self.coefficients):
            return self.coefficients[k]
        if self.terminated:
            return Fraction(0)
        raise IndexError(f"coefficient {k} beyond truncation order {self.order}")

    def as_poly(self) -> Poly:
        """Exact polynomial of a terminated (or truncated) exact series."""
        return Poly(self.coefficients)


def _collect(stream: Iterator, order: int, terminating_after: int | None):
    coeffs = list(islice(stream, order + 1))
    terminated = False
    if terminating_after is not None and terminating_after <= order:
        terminated = True
        coeffs = coeffs[: terminating_after + 1]
    return tuple(coeffs), terminated


def hpg_series(p: HpgParams, order: int) -> TruncatedSeries:
    """Coefficients ``(A)_k (B)_k / ((C)_k k!)`` up to ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if _is_nonpositive_int(p.C):
        raise ValueError(f"inadmissible C = {p.C} (zero or a negative integer)")
    stop = None
    for v in (p.A, p.B):
        if _is_nonpositive_int(v):
            deg = int(-mpmath.re(mpmath.mpmathify(v))) if not is_exact(v) else int(-v)
            stop = deg if stop is None else min(stop, deg)
    coeffs, terminated = _collect(_hpg_terms(p), order, stop)

    def terms(numeric: bool):
        return _hpg_terms(p.as_mp() if numeric else p)

    return TruncatedSeries(coeffs, order, terminated, radius=1, terms=terms)


def heun_series(p: HeunParams, order: int) -> TruncatedSeries:
    """Local Heun solution ``Hl(t; q; a, b; c; d; x)`` to ``order``.

    Termination is detected exactly: two consecutive vanishing coefficients
    force every later one to vanish in the three-term recurrence.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if _is_nonpositive_int(p.c):
        raise ValueError(f"inadmissible c = {p.c} (zero or a negative integer)")
    stream = _heun_terms(p)
    coeffs = list(islice(stream, order + 1))
    terminated = False
    if p.exact:
        # look two steps past the order for a termination witness
        ext = coeffs + list(islice(stream, 2))
        for k in range(1, len(ext) - 1):
            if ext[k] == 0 and ext[k + 1] == 0:
                terminated = True
                coeffs = ext[:k]
                while len(coeffs) > 1 and coeffs[-1] == 0:
                    coeffs.pop()
                break
    radius = min(1, abs(p.t)) if p.exact else min(mpmath.mpf(1), abs(to_mp(p.t)))

    def terms(numeric: bool):
        return _heun_terms(p.as_mp() if numeric else p)

    return TruncatedSeries(tuple(coeffs), order, terminated, radius=radius, terms=terms)


@dataclass(frozen=True)
class TolerancePolicy:
    precision: int = 50
    rel_tol: object = None
    safety: float = 0.9
    max_terms: int = 10_000

    def tolerance(self):
        if self.rel_tol is not None:
            return to_mp(self.rel_tol) if not isinstance(self.rel_tol, float) else mpmath.mpf(self.rel_tol)
        return mpmath.mpf(10) ** (-self.precision - 2)


@dataclass(frozen=True)
class SeriesValue:
    value: object
    error: object
    terms: int


def eval_truncated(s: TruncatedSeries, x, policy: TolerancePolicy = TolerancePolicy()) -> SeriesValue:
    """Adaptive partial sum of ``s`` at ``x``.

    Stops once three consecutive terms fall below ``rel_tol`` relative to the
    running sum; the last term's magnitude is reported as the error estimate.
    """
    with mpmath.workdps(policy.precision + 10):
        z = to_mp(x)
        if s.terminated:
            value = mpmath.mpf(0)
            for c in reversed(s.coefficients):
                value = value * z + to_mp(c)
            result = SeriesValue(value, mpmath.mpf(0), len(s.coefficients))
            return _rounded(result, policy.precision)
        bound = to_mp(s.radius) * to_mp(Fraction(policy.safety).limit_denominator(10**6))
        if abs(z) >= bound:
            raise ConvergenceError(
                f"outside convergence region: |x| = {mpmath.nstr(abs(z), 8)} >= {mpmath.nstr(bound, 8)}"
            )
        tol = policy.tolerance()
        stream = s.terms(True) if s.terms is not None else iter(to_mp(c) for c in s.coefficients)
        total = mpmath.mpf(0)
        zk = mpmath.mpf(1)
        small = 0
        last = mpmath.mpf(0)
        for n, c in enumerate(stream):
            if n >= policy.max_terms:
                raise ConvergenceError(f"no convergence within {policy.max_terms} terms")
            term = c * zk
            total += term
            zk *= z
            last = abs(term)
            if last <= tol * abs(total):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        else:
            # finite coefficient list exhausted: exact polynomial sum
            last = mpmath.mpf(0)
            n = len(s.coefficients) - 1
        return _rounded(SeriesValue(total, last, n + 1), policy.precision)


def _rounded(v: SeriesValue, precision: int) -> SeriesValue:
    with mpmath.workdps(precision):
        return SeriesValue(+v.value, +v.error, v.terms)


def hpg_degenerate_closed(a, z, precision: int = 50):
    """``2F1(1-a, 1; 2; z)`` in closed form (logarithmic when ``a = 0``)."""
    with mpmath.workdps(precision + 10):
        zz = to_mp(z)
        if zz == 0:
            return mpmath.mpf(1)
        if mpmath.im(zz) == 0 and mpmath.re(zz) >= 1:
            raise BranchError(f"z = {z} lies on the branch cut [1, oo)")
        if is_exact(a):
            is_zero = a == 0
        else:
            is_zero = abs(to_mp(a)) < mpmath.mpf(10) ** -30
        if is_zero:
            value = -mpmath.log(1 - zz) / zz
        else:
            aa = to_mp(a)
            value = (1 - mpmath.power(1 - zz, aa)) / (aa * zz)
    with mpmath.workdps(precision):
        return +value


_CUT_DISTANCE = mpmath.mpf("1e-6")


def hpg_dihedral_closed(variant: str, a, z, precision: int = 50):
    """Closed forms of ``2F1(a/2, (a+1)/2; a+1 | 1/2; z)`` (``upper`` | ``half``)."""
    with mpmath.workdps(precision + 10):
        zz = to_mp(z)
        aa = to_mp(a)
        if variant == "upper":
            w = 1 - zz
            if mpmath.re(w) < 0 and abs(mpmath.im(w)) < _CUT_DISTANCE:
                raise BranchError(f"sqrt(1 - z) cut at z = {z}")
            value = mpmath.power((1 + mpmath.sqrt(w)) / 2, -aa)
        elif variant == "half":
            if zz != 0 and mpmath.re(zz) < 0 and abs(mpmath.im(zz)) < _CUT_DISTANCE:
                raise BranchError(f"sqrt(z) cut at z = {z}")
            r = mpmath.sqrt(zz)
            lo, hi = 1 - r, 1 + r
            for base in (lo, hi):
                if mpmath.re(base) <= 0 and abs(mpmath.im(base)) < _CUT_DISTANCE:
                    raise BranchError(f"power base {mpmath.nstr(base, 8)} on the cut at z = {z}")
            value = (mpmath.power(lo, -aa) + mpmath.power(hi, -aa)) / 2
        else:
            raise ValueError(f"unknown variant {variant!r}")
    with mpmath.workdps(precision):
        return +value


def series_ode_residual(s: TruncatedSeries, ode, k: int) -> bool:
    """True iff the first ``k`` coefficients of ``P2 s'' + P1 s' + P0 s`` vanish.

    ``ode`` supplies ``cleared()`` returning the polynomial coefficients
    ``(P2, P1, P0)``.
    """
    if not s.terminated and k > s.order - 2:
        raise ValueError(f"k = {k} exceeds order - 2 = {s.order - 2}")
    P2, P1, P0 = ode.cleared()

    def coef(j):
        return s[j] if (s.terminated or j <= s.order) else None

    for j in range(k):
        total = Fraction(0)
        for i, c in enumerate(P2.coeffs):
            m = j - i + 2
            if m >= 2:
                total += c * m * (m - 1) * coef(m)
        for i, c in enumerate(P1.coeffs):
            m = j - i + 1
            if m >= 1:
                total += c * m * coef(m)
        for i, c in enumerate(P0.coeffs):
            m = j - i
            if m >= 0:
                total += c * coef(m)
        if total != 0:
            return False
    return True
