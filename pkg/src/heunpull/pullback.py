"""Second-order Fuchsian ODEs and their exact pull-back transformations.

An :class:`ODE` is ``y'' + p1 y' + p0 y = 0`` with rational-function
coefficients.  :func:`transform_ode` computes the equation satisfied by
``Y(x) = theta(x) * y(phi(x))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath

from .exact import (
    Poly,
    RationalFunction,
    coprime_basis,
    is_exact,
    multiplicity_in,
    poly_gcd,
    poly_invmod,
    poly_lcm,
)
from .liouvillian import ExactModeError, PowerProduct, pp_log_derivative
from .series import HeunParams, HpgParams


class IrregularSingularity(ValueError):
    pass


INF = "inf"


@dataclass(frozen=True)
class ODE:
    p1: RationalFunction
    p0: RationalFunction

    def cleared(self) -> tuple[Poly, Poly, Poly]:
        """Polynomial form ``P2 y'' + P1 y' + P0 y = 0`` with ``P2`` monic."""
        P2 = poly_lcm(self.p1.den, self.p0.den)
        P1 = (self.p1.num * P2).exact_div(self.p1.den)
        P0 = (self.p0.num * P2).exact_div(self.p0.den)
        return P2, P1, P0

    def singular_support(self) -> Poly:
        """Monic squarefree polynomial vanishing at the finite singular points."""
        P2 = poly_lcm(self.p1.den, self.p0.den)
        if P2.degree <= 0:
            return Poly.const(1)
        return P2.exact_div(poly_gcd(P2, P2.derivative())).monic()

    def to_dict(self) -> dict:
        return {"p1": _rf_json(self.p1), "p0": _rf_json(self.p0)}


def _rf_json(f: RationalFunction) -> dict:
    return {"num": [str(c) for c in f.num.coeffs], "den": [str(c) for c in f.den.coeffs]}


def hpg_ode(p: HpgParams) -> ODE:
    if not p.exact:
        raise ExactModeError("exact mode required for hpg_ode")
    z = RationalFunction.x()
    A, B, C = p.A, p.B, p.C
    p1 = C / z + (A + B - C + 1) / (z - 1)
    p0 = RationalFunction(Poly.const(A * B), Poly((0, -1, 1)))
    return ODE(p1, p0)


def heun_ode(p: HeunParams) -> ODE:
    if not p.exact:
        raise ExactModeError("exact mode required for heun_ode")
    x = RationalFunction.x()
    t = p.t
    p1 = p.c / x + p.d / (x - 1) + p.e / (x - t)
    p0 = RationalFunction(Poly((-p.q, p.a * p.b)), Poly((0, t, -(1 + t), 1)))
    return ODE(p1, p0)


@dataclass(frozen=True)
class PullbackSpec:
    source: ODE
    phi: RationalFunction
    theta: PowerProduct = field(default_factory=PowerProduct)

    def __post_init__(self):
        if RationalFunction.coerce(self.phi).is_constant():
            raise ValueError("phi must be nonconstant")


def transform_ode(spec: PullbackSpec) -> ODE:
    """Exact ODE for ``Y = theta * y(phi)``.

    With ``w(x) = y(phi(x))``::

        w'' + (phi' P(phi) - phi''/phi') w' + phi'^2 Q(phi) w = 0

    and ``Y = theta w`` with ``L = theta'/theta`` gives
    ``Y'' + (p1 - 2L) Y' + (L^2 - L' - p1 L + p0) Y = 0``.
    """
    if not spec.theta.exact:
        raise ExactModeError("exact mode required: theta exponents must be rational")
    phi = RationalFunction.coerce(spec.phi)
    d1 = phi.derivative()
    d2 = d1.derivative()
    P = spec.source.p1.compose(phi)
    Q = spec.source.p0.compose(phi)
    p1 = d1 * P - d2 / d1
    p0 = d1 * d1 * Q
    if spec.theta.factors:
        L = pp_log_derivative(spec.theta)
        p0 = L * L - L.derivative() - p1 * L + p0
        p1 = p1 - L * 2
    return ODE(p1, p0)


def _indicial(a0: Fraction, b0: Fraction) -> tuple:
    """Roots of ``r(r-1) + a0 r + b0``; exact when the discriminant is a rational square."""
    disc = (1 - a0) ** 2 - 4 * b0
    root = _rational_sqrt(disc)
    if root is None:
        with mpmath.workdps(50):
            root = mpmath.sqrt(mpmath.mpf(disc.numerator) / disc.denominator)
    lo = (1 - a0 - root) / 2
    hi = (1 - a0 + root) / 2
    return (lo, hi)


def _rational_sqrt(v: Fraction):
    if v < 0:
        return None
    n, d = v.numerator, v.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _leading_coefficients(ode: ODE, f: Poly) -> tuple[Poly, Poly]:
    """``lim (x-r) p1`` and ``lim (x-r)^2 p0`` at the roots ``r`` of ``f``, mod ``f``."""
    k1 = multiplicity_in(ode.p1.den, f)
    k0 = multiplicity_in(ode.p0.den, f)
    if k1 > 1 or k0 > 2:
        raise IrregularSingularity(f"irregular singularity at roots of {f}")
    fp = f.derivative()
    if k1 == 1:
        g = ode.p1.den.exact_div(f)
        a0 = (ode.p1.num * poly_invmod(g * fp, f)) % f
    else:
        a0 = Poly()
    if k0 == 2:
        g = ode.p0.den.exact_div(f * f)
        b0 = (ode.p0.num * poly_invmod(g * fp * fp, f)) % f
    else:
        b0 = Poly()
    return a0, b0


def _at_infinity(ode: ODE) -> ODE:
    inv = RationalFunction(Poly.const(1), Poly.x())
    return transform_ode(PullbackSpec(ode, inv))


Point = Union[Fraction, int, str, Poly]


def local_exponents(ode: ODE, point: Point) -> tuple:
    """The two indicial roots at ``point``.

    ``point`` is a rational number, ``"inf"``, or a squarefree polynomial
    whose roots all share the same exponents (checked exactly).
    """
    if isinstance(point, str) and point == INF:
        return local_exponents(_at_infinity(ode), Fraction(0))
    f = point if isinstance(point, Poly) else Poly.linear(point)
    a0, b0 = _leading_coefficients(ode, f.monic())
    if a0.degree > 0 or b0.degree > 0:
        raise ValueError(f"exponents differ between the roots of {f}; split the factor")
    return _indicial(a0[0], b0[0])


@dataclass(frozen=True)
class SingularPoint:
    """A set of conjugate points (roots of ``locus``) sharing exponents; ``locus=None`` is infinity."""

    locus: Poly | None
    exponents: tuple

    @property
    def count(self) -> int:
        return 1 if self.locus is None else self.locus.degree

    @property
    def difference(self):
        lo, hi = self.exponents
        d = hi - lo
        return abs(d) if is_exact(d) else abs(d)

    def label(self) -> str:
        if self.locus is None:
            return "inf"
        if self.locus.degree == 1:
            return str(-self.locus[0])
        return f"roots({self.locus})"


def _split_by_values(f: Poly, value: Poly) -> list[tuple[Poly, Poly]]:
    """Partition the roots of ``f`` by the value of ``value`` there.

    Candidate values are guessed numerically as rationals and then
    confirmed exactly by gcd splitting; unresolved roots stay grouped.
    """
    if value.degree <= 0:
        return [(f, value)]
    with mpmath.workdps(60):
        roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)],
                                 maxsteps=400, extraprec=400)
        guesses = []
        for r in roots:
            v = value(r)
            if abs(mpmath.im(v)) > mpmath.mpf(10) ** -30:
                continue
            guess = Fraction(mpmath.nstr(mpmath.re(v), 40)).limit_denominator(10**12)
            if guess not in guesses:
                guesses.append(guess)
    parts = []
    rest = f
    for g in guesses:
        h = poly_gcd(rest, value - g)
        if h.degree > 0:
            parts.append((h, Poly.const(g)))
            rest = rest.exact_div(h).monic()
    if rest.degree > 0:
        parts.append((rest, value % rest))
    return parts


def singular_points(ode: ODE, include_infinity: bool = True) -> list[SingularPoint]:
    """All singular points, conjugate roots grouped when their exponents agree."""
    out = []
    for f in coprime_basis([ode.p1.den, ode.p0.den]):
        a0, b0 = _leading_coefficients(ode, f)
        for g, a_val in _split_by_values(f, a0):
            b_local = b0 % g
            for h, b_val in _split_by_values(g, b_local):
                a_h = a_val % h
                if a_h.degree > 0 or b_val.degree > 0:
                    raise ValueError(f"could not separate exponents at the roots of {h}")
                out.append(SingularPoint(h, _indicial(a_h[0], b_val[0])))
    if include_infinity:
        inf_ode = _at_infinity(ode)
        x = Poly.x()
        if multiplicity_in(inf_ode.p1.den, x) or multiplicity_in(inf_ode.p0.den, x):
            out.append(SingularPoint(None, local_exponents(inf_ode, Fraction(0))))
    return out


def exponent_difference_multiset(ode: ODE) -> list:
    """Absolute exponent differences, one entry per singular point (sorted)."""
    diffs = []
    for sp in singular_points(ode):
        diffs.extend([sp.difference] * sp.count)
    return sorted(diffs, key=lambda v: (float(v), str(v)))


@dataclass(frozen=True)
class MatchReport:
    match: bool
    expected: HeunParams
    witness: str = ""
    singular_support: Poly | None = None

    def __bool__(self):
        return self.match


def match_heun(ode: ODE, expected: HeunParams) -> MatchReport:
    """Structural comparison of normalized coefficients with ``heun_ode(expected)``."""
    target = heun_ode(expected)
    if ode.p1 == target.p1 and ode.p0 == target.p0:
        return MatchReport(True, expected)
    bad = []
    if ode.p1 != target.p1:
        bad.append(f"p1: got {ode.p1}, expected {target.p1}")
    if ode.p0 != target.p0:
        bad.append(f"p0: got {ode.p0}, expected {target.p0}")
    return MatchReport(False, expected, "; ".join(bad), ode.singular_support())
