"""Closed-form Liouvillian expressions: sums of rational x power-product x log terms.

Expressions live in an auxiliary variable ``s`` with ``x = s**root_order``;
``root_order = 2`` is how square roots of ``x`` are carried, so that
``(1 + sqrt(x))**a`` is the power product ``(1 + s)**a``.  Derivatives are
always taken with respect to ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .exact import PoleError, Poly, RationalFunction, is_exact, to_mp
from .series import BranchError


class ExactModeError(TypeError):
    pass


@dataclass(frozen=True)
class BranchConvention:
    """Principal branches; evaluation points must keep ``cut_distance`` from cuts."""

    cut_distance: float = 1e-6


PRINCIPAL = BranchConvention()


def _exp(e):
    return Fraction(e) if is_exact(e) else e


@dataclass(frozen=True)
class PowerProduct:
    factors: tuple = ()

    def __post_init__(self):
        merged: dict[Poly, object] = {}
        for base, e in self.factors:
            if not isinstance(base, Poly):
                base = Poly(base) if isinstance(base, (list, tuple)) else Poly.const(base)
            if base.is_zero():
                raise ValueError("zero base in power product")
            merged[base] = merged.get(base, 0) + _exp(e)
        object.__setattr__(
            self, "factors", tuple((b, e) for b, e in merged.items() if e != 0)
        )

    @classmethod
    def of(cls, *pairs) -> "PowerProduct":
        return cls(tuple(pairs))

    @property
    def exact(self) -> bool:
        return all(is_exact(e) for _, e in self.factors)

    def __mul__(self, other: "PowerProduct") -> "PowerProduct":
        return PowerProduct(self.factors + other.factors)

    def split_integer_part(self) -> tuple[RationalFunction, "PowerProduct"]:
        """Move integer parts of exact exponents into a rational factor."""
        rf = RationalFunction(1)
        rest = []
        for base, e in self.factors:
            if is_exact(e):
                n = math.floor(e)
                if n:
                    rf = rf * RationalFunction(base) ** n
                if e - n:
                    rest.append((base, e - n))
            else:
                rest.append((base, e))
        return rf, PowerProduct(tuple(rest))

    def key(self):
        return tuple(sorted((b.coeffs, e) for b, e in self.factors))


def pp_log_derivative(pp: PowerProduct) -> RationalFunction:
    """``sum e_i * b_i' / b_i``; exact for rational exponents."""
    out = RationalFunction(0)
    for base, e in pp.factors:
        if not is_exact(e):
            raise ExactModeError("exact mode required: non-rational exponent")
        out = out + RationalFunction(base.derivative(), base) * e
    return out


@dataclass(frozen=True)
class Term:
    coeff: RationalFunction
    pp: PowerProduct = field(default_factory=PowerProduct)
    log: Poly | None = None

    def key(self):
        return (self.pp.key(), None if self.log is None else self.log.coeffs)


@dataclass(frozen=True)
class LiouvillianExpr:
    """``sum coeff(s) * prod base(s)**e * [log f(s)]`` with ``x = s**root_order``."""

    terms: tuple = ()
    root_order: int = 1

    @classmethod
    def rational(cls, f, root_order: int = 1) -> "LiouvillianExpr":
        return cls((Term(RationalFunction.coerce(f)),), root_order)

    @classmethod
    def power(cls, pp: PowerProduct, coeff=1, root_order: int = 1, log: Poly | None = None) -> "LiouvillianExpr":
        return cls((Term(RationalFunction.coerce(coeff), pp, log),), root_order)

    def _check(self, other: "LiouvillianExpr"):
        if self.root_order != other.root_order:
            raise ValueError("mixing expressions with different root orders")

    def __add__(self, other):
        if not isinstance(other, LiouvillianExpr):
            other = LiouvillianExpr.rational(other, self.root_order)
        self._check(other)
        return LiouvillianExpr(self.terms + other.terms, self.root_order)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, LiouvillianExpr):
            other = LiouvillianExpr.rational(other, self.root_order)
        return self + (-other)

    def scale(self, f) -> "LiouvillianExpr":
        """Multiply every term by a rational function of ``s``."""
        f = RationalFunction.coerce(f)
        return LiouvillianExpr(
            tuple(Term(t.coeff * f, t.pp, t.log) for t in self.terms), self.root_order
        )

    __mul__ = scale
    __rmul__ = scale

    @property
    def exact(self) -> bool:
        return all(t.pp.exact for t in self.terms)

    def normalize(self) -> "LiouvillianExpr":
        """Merge terms of the same power-product class; drop zeros."""
        acc: dict = {}
        order: list = []
        for t in self.terms:
            if t.coeff.is_zero():
                continue
            rf, pp = t.pp.split_integer_part()
            nt = Term(t.coeff * rf, pp, t.log)
            k = nt.key()
            if k in acc:
                prev = acc[k]
                acc[k] = Term(prev.coeff + nt.coeff, prev.pp, prev.log)
            else:
                acc[k] = nt
                order.append(k)
        return LiouvillianExpr(
            tuple(acc[k] for k in order if not acc[k].coeff.is_zero()), self.root_order
        )

    def is_zero(self) -> bool:
        return not self.normalize().terms

    def in_x(self, f: RationalFunction) -> RationalFunction:
        """Express a rational function of ``x`` in the variable ``s``."""
        if self.root_order == 1:
            return RationalFunction.coerce(f)
        return RationalFunction.coerce(f).compose(Poly.x() ** self.root_order)


def lv_differentiate(e: LiouvillianExpr) -> LiouvillianExpr:
    """Exact ``d/dx`` in the same representation."""
    if not e.exact:
        raise ExactModeError("exact mode required: non-rational exponent")
    out = []
    for t in e.terms:
        lp = pp_log_derivative(t.pp)
        out.append(Term(t.coeff.derivative() + t.coeff * lp, t.pp, t.log))
        if t.log is not None:
            out.append(Term(t.coeff * RationalFunction(t.log.derivative(), t.log), t.pp, None))
    ds = LiouvillianExpr(tuple(out), e.root_order)
    r = e.root_order
    if r > 1:
        ds = ds.scale(RationalFunction(Poly.const(1), Poly.x() ** (r - 1) * r))
    return ds.normalize()


def _on_cut(z, tol) -> bool:
    return mpmath.re(z) < 0 and abs(mpmath.im(z)) < tol


def lv_eval(e: LiouvillianExpr, x, precision: int = 50, bc: BranchConvention = PRINCIPAL):
    """Numeric value at ``x`` with principal branches."""
    with mpmath.workdps(precision + 10):
        tol = to_mp(Fraction(bc.cut_distance).limit_denominator(10**12))
        z = to_mp(x)
        r = e.root_order
        if r > 1:
            if z != 0 and _on_cut(z, tol):
                raise BranchError(f"x = {x} on the cut of x**(1/{r})")
            s = mpmath.root(z, r)
        else:
            s = z
        total = mpmath.mpf(0)
        for t in e.terms:
            den = t.coeff.den(s)
            if den == 0:
                raise PoleError(f"coefficient pole at x = {x}")
            val = t.coeff.num(s) / den
            for base, ex in t.pp.factors:
                b = base(s)
                if is_exact(ex) and Fraction(ex).denominator == 1:
                    if b == 0 and ex < 0:
                        raise PoleError(f"power-product pole at x = {x}")
                    val *= b ** int(ex)
                    continue
                if b != 0 and _on_cut(b, tol):
                    raise BranchError(f"base {base} = {mpmath.nstr(b, 8)} on the cut at x = {x}")
                if b == 0 and mpmath.re(to_mp(ex)) <= 0:
                    raise PoleError(f"power-product pole at x = {x}")
                val *= mpmath.power(b, to_mp(ex))
            if t.log is not None:
                f = t.log(s)
                if f == 0 or _on_cut(f, tol):
                    raise BranchError(f"log argument {mpmath.nstr(f, 8)} on the cut at x = {x}")
                val *= mpmath.log(f)
            total += val
    with mpmath.workdps(precision):
        return +total


@dataclass(frozen=True)
class Residual:
    is_zero: bool
    witness: Term | None = None

    def __bool__(self):
        return self.is_zero

    def __str__(self):
        if self.is_zero:
            return "exact_zero"
        w = self.witness
        pp = " * ".join(f"({b})^({e})" for b, e in w.pp.factors) or "1"
        lg = f" * log({w.log})" if w.log is not None else ""
        return f"nonzero: ({w.coeff}) * {pp}{lg}"


def lv_ode_residual(e: LiouvillianExpr, ode) -> Residual:
    """Decide exactly whether ``e`` solves ``y'' + p1 y' + p0 y = 0``.

    ``ode`` supplies exact ``p1``/``p0`` rational functions of ``x``.
    """
    if not e.exact:
        raise ExactModeError("exact mode required: non-rational exponent")
    d1 = lv_differentiate(e)
    d2 = lv_differentiate(d1)
    res = (d2 + d1.scale(e.in_x(ode.p1)) + e.scale(e.in_x(ode.p0))).normalize()
    if not res.terms:
        return Residual(True)
    return Residual(False, res.terms[0])


def numeric_ode_residual(e: LiouvillianExpr, ode, points: Sequence, precision: int = 50) -> object:
    """Worst absolute value of ``e'' + p1 e' + p0 e`` over ``points``."""
    d1 = lv_differentiate(e)
    d2 = lv_differentiate(d1)
    worst = mpmath.mpf(0)
    for x in points:
        with mpmath.workdps(precision + 10):
            v = (
                lv_eval(d2, x, precision + 10)
                + ode.p1(to_mp(x)) * lv_eval(d1, x, precision + 10)
                + ode.p0(to_mp(x)) * lv_eval(e, x, precision + 10)
            )
            worst = max(worst, abs(v))
    return worst


def power_expansion(e: LiouvillianExpr) -> RationalFunction:
    """Collapse an expression whose exponents are all integers into a rational function of ``s``."""
    n = e.normalize()
    if not n.terms:
        return RationalFunction(0)
    if len(n.terms) != 1 or n.terms[0].pp.factors or n.terms[0].log is not None:
        raise ValueError("expression has non-integer exponents or logarithms")
    return n.terms[0].coeff
