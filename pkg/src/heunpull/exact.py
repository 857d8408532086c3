"""Exact polynomial and rational-function arithmetic over the rationals.

Coefficients are ``fractions.Fraction``; polynomials are stored lowest
degree first with trailing zeros stripped, so the zero polynomial is the
empty tuple.  Rational functions are normalized on construction (coprime,
monic denominator), which makes ``==`` an exact identity test.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _Rational
from typing import Iterable, Sequence

import mpmath

Rational = Fraction


class PoleError(ZeroDivisionError):
    """Evaluation hit a pole of a rational function."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: exactness must be requested explicitly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise TypeError(f"decimal literal {value!r} is not an exact rational")
        return Fraction(text)
    raise TypeError(f"cannot use {value!r} as an exact rational")


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_mp(value):
    """Convert an exact or mpmath number into the current mpmath context."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return mpmath.mpf(value)
    if isinstance(value, complex):
        return mpmath.mpc(value)
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return +value
    if isinstance(value, float):
        return mpmath.mpf(value)
    raise TypeError(f"cannot convert {value!r} to an mpmath number")


class Poly:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def linear(cls, root) -> "Poly":
        """The monic polynomial ``x - root``."""
        return cls((-as_fraction(root), 1))

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if is_exact(other):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                parts.append(f"{coef}{mono}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}{'*' + mono if mono else ''}")
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = o.degree
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / o.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c * inv
            quot[k - dq] = f
            for j, b in enumerate(o.coeffs):
                rem[k - dq + j] -= f * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def scale(self, c) -> "Poly":
        c = as_fraction(c)
        return Poly(c * a for a in self.coeffs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def compose(self, inner: "Poly") -> "Poly":
        """``self(inner(x))`` by Horner's scheme."""
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift_power(self, k: int) -> "Poly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return Poly((0,) * k + self.coeffs)

    def valuation(self) -> int:
        """Order of vanishing at ``x = 0``."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("valuation of the zero polynomial")

    def __call__(self, x):
        acc = Fraction(0) if is_exact(x) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if is_exact(x) else to_mp(c))
        return acc

    def integer_coeffs(self) -> tuple[list[int], Fraction]:
        """Primitive integer coefficients ``ints`` with ``self == scale * ints``."""
        if not self.coeffs:
            return [], Fraction(1)
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return [v // g for v in ints], Fraction(g, den)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = p, q
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


def poly_xgcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = p, q
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_invmod(a: Poly, f: Poly) -> Poly:
    """Inverse of ``a`` in ``Q[x]/(f)``."""
    g, s, _ = poly_xgcd(a % f, f)
    if g.degree != 0:
        raise ArithmeticError(f"{a} is not invertible modulo {f}")
    return s % f


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return Poly()
    return (p * q).exact_div(poly_gcd(p, q)).monic()


def poly_squarefree(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's squarefree decomposition.

    Returns monic, pairwise coprime, squarefree factors with multiplicities
    whose product is ``p`` up to the constant ``p.lc``.
    """
    if p.is_zero():
        raise ValueError("zero input")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    b = p.exact_div(g)
    c = dp.exact_div(g)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


def multiplicity_profile(p: Poly, target_degree: int) -> list[int]:
    """Root multiplicities of ``p``, plus ``target_degree - deg p`` for infinity.

    The result is sorted in decreasing order and sums to ``target_degree``.
    """
    if p.is_zero():
        raise ValueError("zero input")
    if target_degree < p.degree:
        raise ValueError(f"target degree {target_degree} below deg p = {p.degree}")
    counts: Counter[int] = Counter()
    for factor, mult in poly_squarefree(p):
        counts[mult] += factor.degree
    profile = [m for m, n in counts.items() for _ in range(n)]
    if target_degree > p.degree:
        profile.append(target_degree - p.degree)
    return sorted(profile, reverse=True)


class RationalFunction:
    """Normalized quotient ``num/den`` with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        self.num = num.scale(1 / lc)
        self.den = den.scale(1 / lc)

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(Poly.x())

    @staticmethod
    def coerce(value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return RationalFunction(value)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, (Poly, int, Fraction)):
            other = RationalFunction(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __add__(self, other):
        o = RationalFunction.coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFunction(self.num ** n, self.den ** n)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.den ** (-n), self.num ** (-n))

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def compose(self, inner) -> "RationalFunction":
        """``self(inner(x))`` for a rational function ``inner``."""
        h = RationalFunction.coerce(inner)
        m = self.degree
        if m <= 0:
            return self

        def homog(p: Poly) -> Poly:
            # sum_i p_i n^i d^(m-i)
            out = Poly()
            npow = Poly.const(1)
            dpows = [Poly.const(1)]
            for _ in range(m):
                dpows.append(dpows[-1] * h.den)
            for i in range(m + 1):
                if p[i]:
                    out = out + npow * dpows[m - i] * p[i]
                npow = npow * h.num
            return out

        return RationalFunction(homog(self.num), homog(self.den))

    def __call__(self, x):
        if is_exact(x):
            d = self.den(x)
            if d == 0:
                raise PoleError(f"pole of {self} at x = {x}")
            return self.num(x) / d
        return rf_eval(self, x)


@dataclass(frozen=True)
class MoebiusMap:
    """``x -> (a*x + b)/(c*x + d)`` with exact rational entries."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("singular Moebius map (ad - bc = 0)")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    def as_rational_function(self) -> RationalFunction:
        return RationalFunction(Poly((self.b, self.a)), Poly((self.d, self.c)))

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)


def rf_arith(op: str, f: RationalFunction, g: RationalFunction) -> RationalFunction:
    if op == "add":
        return RationalFunction.coerce(f) + g
    if op == "mul":
        return RationalFunction.coerce(f) * g
    if op == "div":
        return RationalFunction.coerce(f) / g
    raise ValueError(f"unknown operation {op!r}")


def rf_derivative(f: RationalFunction) -> RationalFunction:
    return RationalFunction.coerce(f).derivative()


def moebius_substitute(f: RationalFunction, m: MoebiusMap) -> RationalFunction:
    return RationalFunction.coerce(f).compose(m.as_rational_function())


def rf_eval(f: RationalFunction, point, precision: int = 50):
    """Evaluate at a complex point with ``precision`` significant digits."""
    f = RationalFunction.coerce(f)
    with mpmath.workdps(precision + 10):
        z = to_mp(point)
        d = f.den(z)
        scale = sum(abs(to_mp(c)) * abs(z) ** k for k, c in enumerate(f.den.coeffs))
        if abs(d) <= scale * mpmath.mpf(10) ** (-precision):
            raise PoleError(f"pole of {f} at (or within 1e-{precision} of) x = {point}")
        value = f.num(z) / d
    with mpmath.workdps(precision):
        return +value


def residue_class(f: RationalFunction, modulus: Poly) -> Poly:
    """Value of ``f`` at the roots of a squarefree ``modulus``, as a polynomial mod it.

    A constant result means ``f`` takes the same (rational) value at every root.
    """
    return (f.num * poly_invmod(f.den, modulus)) % modulus


def coprime_basis(polys: Sequence[Poly]) -> list[Poly]:
    """Pairwise coprime monic squarefree polynomials with the same roots as ``polys``.

    Each input's squarefree factors are split against one another, so every
    returned element has a constant multiplicity in each input.
    """
    basis: list[Poly] = []
    for p in polys:
        if p.degree <= 0:
            continue
        for factor, _ in poly_squarefree(p):
            pending = [factor]
            new_basis = []
            for b in basis:
                rest = []
                for q in pending:
                    g = poly_gcd(b, q)
                    if g.degree > 0:
                        new_basis.append(g)
                        b = b.exact_div(g)
                        q = q.exact_div(g)
                    if q.degree > 0:
                        rest.append(q)
                if b.degree > 0:
                    new_basis.append(b)
                pending = rest
            basis = new_basis + [q for q in pending if q.degree > 0]
    return [b.monic() for b in basis]


def multiplicity_in(p: Poly, factor: Poly) -> int:
    """Largest ``k`` with ``factor**k | p`` (``factor`` nonconstant)."""
    k = 0
    while p:
        q, r = divmod(p, factor)
        if r:
            break
        p, k = q, k + 1
    return k
