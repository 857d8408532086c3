"""Covering maps P1 -> P1 used by the pull-backs, with exact branching data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import mpmath

from .exact import (
    MoebiusMap,
    Poly,
    RationalFunction,
    as_fraction,
    moebius_substitute,
    multiplicity_profile,
    poly_gcd,
    poly_squarefree,
    residue_class,
)


@dataclass(frozen=True)
class ExtraBranch:
    """A ramification point outside the fibers of 0, 1, infinity.

    ``points`` is the squarefree polynomial of the ramification points
    (``None`` for x = infinity), ``order`` the branching order, and
    ``value`` the critical value when it is rational and shared by all roots.
    """

    points: Poly | None
    order: int
    value: Fraction | None

    def to_dict(self) -> dict:
        return {
            "points": None if self.points is None else [str(c) for c in self.points.coeffs],
            "order": self.order,
            "value": None if self.value is None else str(self.value),
        }


@dataclass(frozen=True)
class Covering:
    phi: RationalFunction
    degree: int
    passport: dict
    extra_branch: tuple = ()
    family: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def belyi(self) -> bool:
        return not self.extra_branch

    @property
    def extra_branch_values(self) -> list:
        return [b.value for b in self.extra_branch]

    @property
    def distinct_points(self) -> int:
        return sum(len(v) for v in self.passport.values())

    def to_dict(self) -> dict:
        num, _ = self.phi.num.integer_coeffs()
        den, _ = self.phi.den.integer_coeffs()
        # restore the overall constant lost by making both sides primitive
        scale = self.phi.num.integer_coeffs()[1] / self.phi.den.integer_coeffs()[1]
        num = [str(int(c * scale.numerator)) for c in num]
        den = [str(int(c * scale.denominator)) for c in den]
        return {
            "family": self.family,
            "N": self.params.get("N"),
            "M": self.params.get("M"),
            "s": None if self.params.get("s") is None else str(self.params["s"]),
            "degree": self.degree,
            "phi": {"num": num, "den": den},
            "passport": {k: list(v) for k, v in self.passport.items()},
            "belyi": self.belyi,
            "distinct_points": self.distinct_points,
            "extra_branch": [b.to_dict() for b in self.extra_branch],
        }


@dataclass(frozen=True)
class DihedralPair:
    Theta1: Poly
    Theta2: Poly
    N: int
    M: int

    def to_dict(self) -> dict:
        return {
            "Theta1": [str(c) for c in self.Theta1.coeffs],
            "Theta2": [str(c) for c in self.Theta2.coeffs],
            "t": str(Fraction(self.M**2, self.N**2)),
        }


def _strip(p: Poly, fibers: list[Poly]) -> Poly:
    for f in fibers:
        if f.degree <= 0:
            continue
        while True:
            g = poly_gcd(p, f)
            if g.degree <= 0:
                break
            p = p.exact_div(g)
    return p


def passport(phi: RationalFunction):
    """Fiber multiplicities over 0, 1, infinity and the extra branching.

    Returns ``(passport, extra_branch, belyi)``.  Everything is exact: fibers
    come from squarefree profiles of ``num``, ``num - den`` and ``den``; extra
    ramification from the numerator of ``phi'`` with fiber factors removed.
    """
    phi = RationalFunction.coerce(phi)
    if phi.is_constant():
        raise ValueError("phi must be nonconstant")
    n, d = phi.num, phi.den
    deg = phi.degree
    n1 = n - d
    pp = {
        "0": multiplicity_profile(n, deg),
        "1": multiplicity_profile(n1, deg),
        "inf": multiplicity_profile(d, deg),
    }
    fiber_ram = sum(m - 1 for prof in pp.values() for m in prof)
    extra_total = 2 * deg - 2 - fiber_ram
    extra: list[ExtraBranch] = []
    if extra_total:
        w = n.derivative() * d - n * d.derivative()
        rest = _strip(w, [n, n1, d])
        finite = 0
        for factor, mult in poly_squarefree(rest) if rest.degree > 0 else []:
            val = residue_class(phi, factor)
            value = val[0] if val.degree <= 0 else None
            extra.append(ExtraBranch(factor, mult + 1, value))
            finite += factor.degree * mult
        if extra_total > finite:
            # remaining ramification sits at x = infinity
            at_inf = phi.compose(RationalFunction(Poly.const(1), Poly.x()))
            val = at_inf(Fraction(0))
            extra.append(ExtraBranch(None, extra_total - finite + 1, val))
    return pp, tuple(extra), not extra


def _covering(phi, family, **params) -> Covering:
    phi = RationalFunction.coerce(phi)
    pp, extra, _ = passport(phi)
    return Covering(phi, phi.degree, pp, extra, family, params)


def cyclic_covering(N: int, M: int) -> Covering:
    """``1 - (1-x)^N (1 + N x/M)^M``, Belyi of degree ``N + M``."""
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive integers")
    phi = 1 - Poly((1, -1)) ** N * Poly((1, Fraction(N, M))) ** M
    return _covering(phi, "cyclic", N=N, M=M)


def dihedral_theta(N: int, M: int) -> DihedralPair:
    """Split ``(1+sqrt x)^N (1 - N sqrt x / M)^M`` into ``Theta1 + x^(3/2) Theta2``."""
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive integers")
    if N == M:
        raise ValueError("degenerate covering (N = M)")
    r = Fraction(-N, M)
    u = [Fraction(comb(N, k)) for k in range(N + 1)]
    v = [Fraction(comb(M, k)) * r**k for k in range(M + 1)]
    c = [Fraction(0)] * (N + M + 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            c[i + j] += a * b
    if c[1] != 0:
        raise ArithmeticError("sqrt(x) coefficient does not cancel")
    theta1 = Poly(c[0::2])
    theta2 = Poly(c[3::2])
    return DihedralPair(theta1, theta2, N, M)


def dihedral_covering(N: int, M: int) -> tuple[Covering, DihedralPair]:
    pair = dihedral_theta(N, M)
    phi = RationalFunction(Poly((0, 0, 0, 1)) * pair.Theta2 * pair.Theta2, pair.Theta1 * pair.Theta1)
    return _covering(phi, "dihedral", N=N, M=M), pair


def nonbelyi_covering(s) -> Covering:
    """``4 s x (2-x) / (x^2 - 2x - s)^2``; one extra branch value ``4s/(s+1)^2``."""
    s = as_fraction(s)
    if s == 0:
        raise ValueError("degenerate parameter s = 0 (phi vanishes identically)")
    phi = RationalFunction(Poly((0, 2, -1)) * (4 * s), Poly((-s, -2, 1)) ** 2)
    return _covering(phi, "nonbelyi", s=s)


def nonbelyi_branch_value(s) -> Fraction:
    s = as_fraction(s)
    if s == -1:
        return None
    return 4 * s / (s + 1) ** 2


def compose(g: RationalFunction, h: RationalFunction) -> RationalFunction:
    return RationalFunction.coerce(g).compose(h)


def cyclic_power_map(k: int) -> RationalFunction:
    """``z -> 1 - (1 - z)^k``: the cyclic degree-``k`` map, branched over 1 and infinity."""
    one_minus = MoebiusMap(-1, 1, 0, 1)
    inner = moebius_substitute(RationalFunction(Poly.x() ** k), one_minus)
    return one_minus.as_rational_function().compose(inner)


def critical_values_numeric(phi: RationalFunction, precision: int = 30) -> list:
    """Numeric critical values (cross-check for the exact branch data)."""
    phi = RationalFunction.coerce(phi)
    w = phi.num.derivative() * phi.den - phi.num * phi.den.derivative()
    out = []
    with mpmath.workdps(precision):
        for r in mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(w.coeffs)],
                                  maxsteps=200, extraprec=200):
            d = phi.den(r)
            out.append(mpmath.inf if abs(d) < mpmath.mpf(10) ** (-precision // 2) else phi.num(r) / d)
    return out
