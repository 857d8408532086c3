"""Registry of the closed-form Heun / 2F1 identities as executable checks.

Every case is either *exact* (structural equality of polynomials, exact ODE
residuals, exact equation matching) or *numeric* (local series at 50 digits
against a closed form, compared pointwise on real sample points that stay
inside the series disc and away from branch cuts).
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import mpmath

from .coverings import cyclic_covering, dihedral_covering, dihedral_theta, nonbelyi_covering
from .exact import Poly, RationalFunction, to_mp
from .liouvillian import LiouvillianExpr, PowerProduct, lv_eval, lv_ode_residual
from .pullback import (
    PullbackSpec,
    heun_ode,
    hpg_ode,
    local_exponents,
    match_heun,
    singular_points,
    transform_ode,
)
from .series import (
    HeunParams,
    HpgParams,
    TolerancePolicy,
    TruncatedSeries,
    eval_truncated,
    heun_series,
    hpg_degenerate_closed,
    hpg_series,
    series_ode_residual,
)

F = Fraction
X = Poly.x()


class BindingError(ValueError):
    """A binding falls on a singular locus of the identity."""


class UnknownIdentity(KeyError):
    pass


@dataclass(frozen=True)
class Plan:
    points: int = 10
    precision: int = 50
    tolerance: Fraction = F(1, 10**10)
    seed: int = 0


PROFILES = {"quick": (3, 5), "full": (20, 10)}


@dataclass
class VerificationReport:
    id: str
    status: str
    mode: str
    samples: int
    worst_error: str | None = None
    witness: str | None = None
    binding: dict | None = None
    flags: list = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "id": self.id,
            "status": self.status,
            "mode": self.mode,
            "samples": self.samples,
            "worst_error": self.worst_error,
            "witness": self.witness,
            "binding": self.binding,
            "flags": list(self.flags),
        }
        if timing:
            d["runtime_ms"] = round(self.runtime_ms, 1)
        return d


@dataclass(frozen=True)
class IdentityCase:
    id: str
    mode: str
    lhs: str
    rhs: str
    domains: dict
    sample: Callable[[random.Random, int], list]
    run: Callable[[list, Plan], "Outcome"]
    validate: Callable[[dict], None] | None = None


@dataclass
class Outcome:
    ok: bool
    samples: int
    worst: object = None
    witness: str | None = None
    binding: dict | None = None
    flags: list = field(default_factory=list)


def _fmt_binding(b: dict) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in b.items()}


# ---------------------------------------------------------------------------
# sampling helpers


def random_rational(rng: random.Random, lo, hi, max_den: int = 12) -> Fraction:
    q = rng.randint(1, max_den)
    lo_n = int(mpmath.ceil(to_mp(F(lo)) * q))
    hi_n = int(mpmath.floor(to_mp(F(hi)) * q))
    return F(rng.randint(lo_n, hi_n), q)


def _avoid(values: Iterable, margin=F(1, 10)) -> bool:
    return all(abs(v) >= margin for v in values)


def _is_bad_c(c) -> bool:
    return F(c).denominator == 1 and c <= 0


def _draw(rng, n: int, make: Callable[[random.Random], dict], valid: Callable[[dict], None]) -> list:
    out = []
    guard = 0
    while len(out) < n:
        guard += 1
        if guard > 1000 * max(n, 1):
            raise RuntimeError("could not draw admissible bindings")
        b = make(rng)
        try:
            valid(b)
        except BindingError:
            continue
        if b not in out:
            out.append(b)
    return out


def sample_points(rng: random.Random, upper, n: int, lower=F(1, 100)) -> list:
    """``n`` rational points in ``(lower*upper, upper)`` quantized to 1e-6."""
    up = F(upper).limit_denominator(10**6) if isinstance(upper, Fraction) else F(str(mpmath.nstr(upper, 12)))
    pts = []
    while len(pts) < n:
        u = F(rng.randint(1, 10**6), 10**6) * up
        if u > lower * up and u not in pts:
            pts.append(u)
    return pts


# ---------------------------------------------------------------------------
# numeric machinery


def _rel(lhs, rhs):
    scale = max(abs(rhs), abs(lhs))
    if scale == 0:
        return mpmath.mpf(0)
    return abs(lhs - rhs) / scale


def heun_value(p: HeunParams, u, precision: int):
    s = heun_series(p, 0)
    return eval_truncated(s, u, TolerancePolicy(precision=precision)).value


def hpg_value(p: HpgParams, z, precision: int):
    s = hpg_series(p, 0)
    return eval_truncated(s, z, TolerancePolicy(precision=precision)).value


@dataclass(frozen=True)
class NumericSpec:
    """A pointwise identity ``lhs(b, u) == rhs(b, u)`` on ``u in (0, upper(b))``."""

    lhs: Callable
    rhs: Callable
    upper: Callable
    variants: dict = field(default_factory=dict)


def run_numeric(spec: NumericSpec, bindings: list, plan: Plan) -> Outcome:
    worst = mpmath.mpf(0)
    worst_b = None
    rng = random.Random(f"points:{plan.seed}")
    variant_worst = {k: mpmath.mpf(0) for k in spec.variants}
    n = 0
    with mpmath.workdps(plan.precision + 10):
        for b in bindings:
            for u in sample_points(rng, spec.upper(b), plan.points):
                lhs = spec.lhs(b, u, plan.precision)
                rhs = spec.rhs(b, u, plan.precision)
                err = _rel(lhs, rhs)
                n += 1
                if err > worst or worst_b is None:
                    worst, worst_b = err, dict(b, point=str(u))
                for k, alt in spec.variants.items():
                    variant_worst[k] = max(variant_worst[k], _rel(lhs, alt(b, u, plan.precision)))
        ok = worst <= to_mp(plan.tolerance)
    flags = []
    for k, v in variant_worst.items():
        status = "fails" if v > to_mp(plan.tolerance) else "also holds"
        flags.append(f"{k} {status} (worst rel err {mpmath.nstr(v, 3)})")
    return Outcome(ok, n, worst, None if ok else "relative error above tolerance",
                   _fmt_binding(worst_b or {}), flags)


def _lv_rhs(build: Callable[[dict], LiouvillianExpr], to_x: Callable = lambda b, u: u):
    cache: dict = {}

    def rhs(b, u, prec):
        key = tuple(sorted(b.items()))
        if key not in cache:
            cache[key] = build(b)
        return lv_eval(cache[key], to_x(b, u), prec)

    return rhs


def _pp(*pairs):
    return PowerProduct(tuple((Poly(base), e) for base, e in pairs))


# ---------------------------------------------------------------------------
# cyclic family (E(1, alpha, alpha))


def _ab_domain(rng):
    return {"a": random_rational(rng, -2, 2), "b": random_rational(rng, -2, 2)}


def _check_ab(b, extra=()):
    a, bb = b["a"], b["b"]
    if not _avoid([a, bb, a + bb, *extra]):
        raise BindingError(f"singular binding a={a}, b={bb} (need a, b, a+b nonzero)")


def _t_ok(t):
    if abs(t) < F(1, 20) or abs(t - 1) < F(1, 20):
        raise BindingError(f"t = {t} too close to 0 or 1")


def cyc1_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(1 + bb / a, -bb * (a + 1), a, -bb, 1 + a, -1)


def cyc2_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(1 + a / bb, -a * (bb + 1), -a, bb, 1 + bb, -1)


def cyc3_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(-a / bb, (bb * bb - a * a) * ((a - 1) / bb + 1), -a - bb, 2 - a - bb, 1 - a - bb, 1 - a)


def cyc4_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(-bb / a, 2 * (1 - bb / a), 2, 2 - a - bb, 3, 1 - a)


def _valid_heun(params_fn, extra=()):
    def valid(b):
        _check_ab(b, extra)
        try:
            p = params_fn(b)
        except (ValueError, ZeroDivisionError) as exc:
            raise BindingError(str(exc)) from None
        if _is_bad_c(p.c):
            raise BindingError(f"inadmissible c = {p.c}")
        _t_ok(p.t)
    return valid


def _radius(p: HeunParams):
    return F(4, 5) * min(F(1), abs(p.t))


def _cyc_numeric(params_fn, rhs_build, to_x=lambda b, u: u, extra_check=None):
    spec = NumericSpec(
        lhs=lambda b, u, prec: heun_value(params_fn(b), u, prec),
        rhs=_lv_rhs(rhs_build, to_x),
        upper=lambda b: _radius(params_fn(b)),
    )
    return spec


CYC1 = _cyc_numeric(
    cyc1_params,
    lambda b: LiouvillianExpr.power(_pp(((b["b"] / (b["a"] + b["b"]), b["a"] / (b["a"] + b["b"])), b["b"]))),
    to_x=lambda b, u: 1 - u,
)
CYC2 = _cyc_numeric(
    cyc2_params,
    lambda b: LiouvillianExpr.power(_pp(((b["a"] / (b["a"] + b["b"]), -b["a"] / (b["a"] + b["b"])), b["a"]))),
    to_x=lambda b, u: (u - 1) * b["b"] / b["a"],
)
# in the variable u = 1/x:  (1 - u)^a (1 + b u / a)^b
CYC3 = _cyc_numeric(
    cyc3_params,
    lambda b: LiouvillianExpr.power(_pp(((1, -1), b["a"]), ((1, b["b"] / b["a"]), b["b"]))),
)


def _cyc4_rhs(b):
    a, bb = b["a"], b["b"]
    return LiouvillianExpr.rational(1) - LiouvillianExpr.power(_pp(((1, -1), a), ((1, a / bb), bb)))


CYC4 = NumericSpec(
    lhs=lambda b, u, prec: to_mp(b["a"] * (b["a"] + b["b"]) / (2 * b["b"])) * to_mp(u) ** 2
    * heun_value(cyc4_params(b), u, prec),
    rhs=_lv_rhs(_cyc4_rhs),
    upper=lambda b: _radius(cyc4_params(b)),
)


def trivpbf_params(N: int, M: int, alpha) -> HeunParams:
    D = N + M
    return HeunParams(F(-M, N), 2 * (1 - F(M, N)), 2, 2 - D * alpha, 3, 1 - N * alpha)


def _nm_alpha_domain(rng):
    return {"N": rng.randint(1, 6), "M": rng.randint(1, 6), "alpha": random_rational(rng, -2, 2)}


def _valid_nm_alpha(b):
    if not _avoid([b["alpha"]]):
        raise BindingError("alpha must be nonzero (use CYC-LOG for alpha = 0)")


def _trivpbf_rhs(b, u, prec):
    N, M, al = b["N"], b["M"], b["alpha"]
    D = N + M
    phi = cyclic_covering(N, M).phi
    with mpmath.workdps(prec + 10):
        x = to_mp(u)
        ph = phi(x)
        return to_mp(F(2 * M, N * D)) * ph / x**2 * hpg_degenerate_closed(al, ph, prec + 10)


CYC_TRIV = NumericSpec(
    lhs=lambda b, u, prec: heun_value(trivpbf_params(b["N"], b["M"], b["alpha"]), u, prec),
    rhs=_trivpbf_rhs,
    upper=lambda b: F(4, 5) * min(F(1), F(b["M"], b["N"])),
)


def cyc_log_expr(N: int, M: int) -> LiouvillianExpr:
    """``-(2M/(N D x^2)) (N log(1-x) + M log(1 + N x/M))``."""
    D = N + M
    c = RationalFunction(Poly.const(F(-2 * M, N * D)), X**2)
    return (LiouvillianExpr.power(PowerProduct(), c * N, log=Poly((1, -1)))
            + LiouvillianExpr.power(PowerProduct(), c * M, log=Poly((1, F(N, M)))))


def check_cyc_log(N: int, M: int, plan: Plan, rng: random.Random) -> tuple[bool, str | None, object, int]:
    expr = cyc_log_expr(N, M)
    res = lv_ode_residual(expr, heun_ode(trivpbf_params(N, M, 0)))
    if not res:
        return False, f"log form is not a solution: {res}", None, 0
    worst_exact = mpmath.mpf(0)
    worst_limit = mpmath.mpf(0)
    tiny = F(1, 10**6)
    n = 0
    with mpmath.workdps(plan.precision + 10):
        for u in sample_points(rng, F(4, 5) * min(F(1), F(M, N)), plan.points):
            log_val = lv_eval(expr, u, plan.precision)
            series_val = heun_value(trivpbf_params(N, M, 0), u, plan.precision)
            worst_exact = max(worst_exact, _rel(series_val, log_val))
            limit_val = _trivpbf_rhs({"N": N, "M": M, "alpha": tiny}, u, plan.precision)
            worst_limit = max(worst_limit, _rel(limit_val, log_val))
            n += 1
    if worst_exact > to_mp(plan.tolerance):
        return False, f"alpha=0 series vs log form: {mpmath.nstr(worst_exact, 3)}", worst_exact, n
    if worst_limit > mpmath.mpf("1e-4"):
        return False, f"alpha=1e-6 limit vs log form: {mpmath.nstr(worst_limit, 3)}", worst_limit, n
    return True, None, max(worst_exact, worst_limit), n


def check_cyc_klein(N: int, M: int) -> str | None:
    """``phi == (N D / 2M) x^2 Hl(-M/N, 2(1-M/N); 2, 2-D; 3; 1-N; x)`` exactly."""
    D = N + M
    phi = cyclic_covering(N, M).phi
    s = heun_series(trivpbf_params(N, M, 1), D + 2)
    if not s.terminated:
        return "Heun series does not terminate"
    rhs = s.as_poly().shift_power(2).scale(F(N * D, 2 * M))
    if not phi.is_polynomial() or phi.num != rhs:
        return f"phi = {phi} but series side = {rhs}"
    return None


def psi_poly(n: int) -> Poly:
    """``(1 - (1-x)^n) / (n x)``, by exact division."""
    return (1 - Poly((1, -1)) ** n).exact_div(Poly((0, n)))


def _psi_upper(b):
    n = b["n"]
    # keep n x psi(x) = 1 - (1-x)^n <= 0.8 and x <= 0.8
    return min(F(4, 5), F(1) - F(str(mpmath.nstr(mpmath.power(mpmath.mpf("0.2"), mpmath.mpf(1) / n), 15))))


def _psi_rhs(b, u, prec):
    n, a = b["n"], b["a"]
    with mpmath.workdps(prec + 10):
        x = to_mp(u)
        ps = psi_poly(n)(x)
        return ps * hpg_value(HpgParams(1 - a, 1, 2), n * x * ps, prec + 10)


CYC_PSI = NumericSpec(
    lhs=lambda b, u, prec: hpg_value(HpgParams(1 - b["n"] * b["a"], 1, 2), u, prec),
    rhs=_psi_rhs,
    upper=_psi_upper,
    variants={"closed form psi*2F1 via log/power": lambda b, u, prec: psi_poly(b["n"])(to_mp(u))
              * hpg_degenerate_closed(b["a"], b["n"] * to_mp(u) * psi_poly(b["n"])(to_mp(u)), prec)},
)


def rem_pow1_params(b):
    return cyc1_params(b)


REM_POW1 = NumericSpec(
    lhs=lambda b, u, prec: heun_value(rem_pow1_params(b), u, prec),
    rhs=_lv_rhs(lambda b: LiouvillianExpr.power(_pp(((1, -1), b["b"]))),
                to_x=lambda b, u: u * b["a"] / (b["a"] + b["b"])),
    upper=lambda b: _radius(rem_pow1_params(b)),
)


def rem_pow2_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(a / (a - bb), a * bb * (a + 1) / (a - bb), a, bb, 1 + a, 1 + bb)


REM_POW2 = NumericSpec(
    lhs=lambda b, u, prec: heun_value(rem_pow2_params(b), u, prec),
    rhs=_lv_rhs(lambda b: LiouvillianExpr.power(_pp(((1, -1), -b["b"])))),
    upper=lambda b: _radius(rem_pow2_params(b)),
)


def _contig_lhs(b, u, prec):
    a, bb = b["a"], b["b"]
    with mpmath.workdps(prec + 10):
        x = to_mp(u)
        return (hpg_value(HpgParams(a, bb, a + 1), x, prec + 10)
                + to_mp(bb) * x / to_mp(a + 1) * hpg_value(HpgParams(a + 1, bb + 1, a + 2), x, prec + 10))


REM_CONTIG = NumericSpec(
    lhs=_contig_lhs,
    rhs=_lv_rhs(lambda b: LiouvillianExpr.power(_pp(((1, -1), -b["b"])))),
    upper=lambda b: F(4, 5),
)


def _valid_contig(b):
    a = b["a"]
    if _is_bad_c(a + 1) or _is_bad_c(a + 2):
        raise BindingError(f"inadmissible a = {a}")
    if not _avoid([b["b"]]):
        raise BindingError("b must be nonzero")


# ---------------------------------------------------------------------------
# P1 and the polynomial P15/P19/P20 instances


def p1_params(A, B, C) -> HeunParams:
    return HeunParams(-1, 0, 2 * A, 2 * B, 2 * C - 1, A + B - C + 1)


def _p1_domain(rng):
    return {"A": random_rational(rng, -2, 2), "B": random_rational(rng, -2, 2), "C": random_rational(rng, -2, 2)}


def _valid_p1(b):
    if _is_bad_c(b["C"]) or _is_bad_c(2 * b["C"] - 1):
        raise BindingError(f"inadmissible C = {b['C']}")


def check_p1_equation(A, B, C, expected: HeunParams | None = None):
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(A, B, C)), RationalFunction(X**2)))
    return match_heun(ode, expected or p1_params(A, B, C))


def _p1_run(bindings, plan):
    for b in bindings:
        rep = check_p1_equation(b["A"], b["B"], b["C"])
        if not rep:
            return Outcome(False, 0, None, rep.witness, _fmt_binding(b))
    spec = NumericSpec(
        lhs=lambda b, u, prec: heun_value(p1_params(b["A"], b["B"], b["C"]), u, prec),
        rhs=lambda b, u, prec: hpg_value(HpgParams(b["A"], b["B"], b["C"]), to_mp(u) ** 2, prec),
        upper=lambda b: F(4, 5),
    )
    out = run_numeric(spec, bindings, plan)
    out.flags.append(f"equation-level match for {len(bindings)} bindings")
    return out


QHAT1 = (F(9), F(18), F(-6))
QHAT2 = (F(-9), F(9), F(3, 2))


def _qhat(coeffs, n, a):
    return coeffs[0] * n * a + coeffs[1] * n * n + coeffs[2] * n


def _terminating_hpg(A, B, C) -> Poly:
    s = hpg_series(HpgParams(A, B, C), 0)
    if not s.terminated:
        s = hpg_series(HpgParams(A, B, C), 200)
    if not s.terminated:
        raise ValueError("hypergeometric series does not terminate")
    return s.as_poly()


def poly_case(which: str, n: int, a, qhat=None) -> tuple[HeunParams, Poly]:
    """Heun parameters and the exact right-hand polynomial of a P15/P19/P20 instance."""
    n = int(n)
    a = F(a)
    if which == "P15":
        params = HeunParams(F(1, 4), -9 * n * a / 4, -3 * n, 3 * a, F(1, 2), a - n + F(1, 2))
        h = _terminating_hpg(-n, a, F(1, 2))
        rhs = h.compose(X * Poly((-3, 4)) ** 2)
    elif which == "P19":
        params = HeunParams(9, _qhat(qhat or QHAT1, n, a), -3 * n, a - 2 * n, a - n + F(1, 3), 1 - 2 * n - 2 * a)
        h = _terminating_hpg(-n, a, a - n + F(1, 3))
        w = (X * Poly((-9, 1)) ** 2).scale(F(-1, 27))
        one_minus = Poly((1, -1))
        rhs = sum((w**k * one_minus ** (2 * n - 2 * k)).scale(c) for k, c in enumerate(h.coeffs))
        rhs = rhs if isinstance(rhs, Poly) else Poly.const(rhs)
    elif which == "P20":
        params = HeunParams(F(9, 8), _qhat(qhat or QHAT2, n, a), -4 * n, a - 3 * n, 3 * a - 3 * n - F(1, 2), a - n + F(1, 2))
        h = _terminating_hpg(-n, a, a - n + F(1, 2))
        w = (X**3 * Poly((-1, 1))).scale(F(64, -729))
        base = Poly((1, F(-8, 9)))
        rhs = sum((w**k * base ** (3 * n - 3 * k)).scale(c) for k, c in enumerate(h.coeffs))
        rhs = rhs if isinstance(rhs, Poly) else Poly.const(rhs)
    else:
        raise ValueError(which)
    return params, rhs


def check_poly_case(which: str, n: int, a, qhat=None, params: HeunParams | None = None) -> str | None:
    p, rhs = poly_case(which, n, a, qhat)
    p = params or p
    s = heun_series(p, rhs.degree + 2)
    got = s.as_poly()
    if got != rhs:
        k = next(i for i in range(max(len(got), len(rhs)) + 1) if got[i] != rhs[i])
        return f"coefficient of x^{k}: Heun {got[k]} vs 2F1 side {rhs[k]}"
    if not s.terminated:
        return "Heun series does not terminate"
    return None


def _valid_poly(which):
    def valid(b):
        n, a = b["n"], b["a"]
        try:
            p, _ = poly_case(which, n, a)
        except ValueError as exc:
            raise BindingError(str(exc)) from None
        if _is_bad_c(p.c):
            raise BindingError(f"inadmissible Heun c = {p.c}")
        cs = {"P15": F(1, 2), "P19": a - n + F(1, 3), "P20": a - n + F(1, 2)}
        if _is_bad_c(cs[which]):
            raise BindingError("inadmissible 2F1 lower parameter")
    return valid


def _poly_sampler(which):
    def sample(rng, count):
        out = []
        for n in range(1, 5):
            out += [dict(b, n=n) for b in _draw(rng, count, lambda r: {"n": n, "a": random_rational(r, -3, 3, 7)},
                                                _valid_poly(which))]
        return out
    return sample


def _poly_run(which):
    def run(bindings, plan):
        for b in bindings:
            w = check_poly_case(which, b["n"], b["a"], b.get("qhat"))
            if w:
                return Outcome(False, len(bindings), None, w, _fmt_binding(b))
        return Outcome(True, len(bindings))
    return run


# ---------------------------------------------------------------------------
# dihedral family (E(1/2, 1/2, alpha))


def theta_small(n: int) -> tuple[Poly, Poly]:
    """Split ``(1 - sqrt x)^n = theta1 - theta2 sqrt x`` by binomial expansion."""
    from math import comb

    c = [F(comb(n, k) * (-1) ** k) for k in range(n + 1)]
    return Poly(c[0::2]), -Poly(c[1::2])


def chebyshev(n: int) -> tuple[Poly, Poly]:
    """Exact ``T_n`` and ``U_{n-1}`` (``U_{-1} = 0``)."""
    t = [Poly.const(1), X]
    u = [Poly(), Poly.const(1)]  # U_{-1}, U_0
    for k in range(1, n):
        t.append(X.scale(2) * t[k] - t[k - 1])
        u.append(X.scale(2) * u[k] - u[k - 1])
    return t[n], u[n]


def _cheb_to_theta(p: Poly, deg: int) -> Poly:
    # sum_j p_j (1-x)^((deg - j)/2) over j of the parity of deg
    one_minus = Poly((1, -1))
    out = Poly()
    for j, c in enumerate(p.coeffs):
        if c:
            out = out + (one_minus ** ((deg - j) // 2)).scale(c)
    return out


def check_theta_small(n: int) -> str | None:
    t1, t2 = theta_small(n)
    h1 = _terminating_hpg(F(-n, 2), F(-(n - 1), 2), F(1, 2))
    h2 = _terminating_hpg(F(-(n - 1), 2), F(-(n - 2), 2), F(3, 2)).scale(n)
    if t1 != h1:
        return f"n={n}: theta1 {t1} vs 2F1 {h1}"
    if t2 != h2:
        return f"n={n}: theta2 {t2} vs 2F1 {h2}"
    return None


def check_chebyshev(n: int) -> str | None:
    t1, t2 = theta_small(n)
    if t1 * t1 - X * t2 * t2 != Poly((1, -1)) ** n:
        return f"n={n}: theta1^2 - x theta2^2 != (1-x)^n"
    T, U = chebyshev(n)
    if _cheb_to_theta(T, n) != t1:
        return f"n={n}: theta1 differs from homogenized T_n"
    if _cheb_to_theta(U, n - 1) != t2:
        return f"n={n}: theta2 differs from homogenized U_(n-1)"
    return None


def theta1_params(N: int, M: int) -> HeunParams:
    D = N + M
    return HeunParams(F(M * M, N * N), F(M * D, 4 * N), F(-D, 2), F(-(D - 1), 2), F(-1, 2), 1 - N)


def theta2_params(N: int, M: int) -> HeunParams:
    D = N + M
    q = F(3, 2) * (1 + F(M * M, N * N)) - F(5 * M * D, 4 * N)
    return HeunParams(F(M * M, N * N), q, F(-(D - 3), 2), F(-(D - 4), 2), F(5, 2), 1 - N)


def theta2_prefactor(N: int, M: int) -> Fraction:
    D = N + M
    return F(N * D * (M - N), 3 * M * M)


def check_dihedral_heun_poly(N: int, M: int, which: int, params: HeunParams | None = None,
                             prefactor: Fraction | None = None) -> str | None:
    """Theta_1 or Theta_2 against its Heun polynomial, exactly (series and ODE residual)."""
    pair = dihedral_theta(N, M)
    if which == 1:
        target, p, pref = pair.Theta1, params or theta1_params(N, M), F(1)
    else:
        target, p = pair.Theta2, params or theta2_params(N, M)
        pref = theta2_prefactor(N, M) if prefactor is None else prefactor
    poly_series = TruncatedSeries.from_poly(target)
    if not series_ode_residual(poly_series, heun_ode(p), target.degree + 4):
        return f"Theta{which} does not solve Hl{p.astuple()}"
    s = heun_series(p, target.degree + 2)
    got = s.as_poly().scale(pref)
    if got != target or not s.terminated:
        return f"Theta{which} = {target} but prefactor * Heun series = {got}"
    return None


def check_dihedral_n1(M: int) -> str | None:
    pair = dihedral_theta(1, M)
    arg = X.scale(F(1, M * M))
    h1 = _terminating_hpg(F(-M, 2), F(-(M + 1), 2), F(-1, 2)).compose(arg)
    h2 = _terminating_hpg(F(-(M - 2), 2), F(-(M - 3), 2), F(5, 2)).compose(arg).scale(F(M * M - 1, 3 * M * M))
    if pair.Theta1 != h1:
        return f"M={M}: Theta1 {pair.Theta1} vs 2F1 {h1}"
    if pair.Theta2 != h2:
        return f"M={M}: Theta2 {pair.Theta2} vs 2F1 {h2}"
    return None


def _dih_sum(b, ratio, sign, exp2_second):
    """``(1+s)^(-a)(1 - r s)^(-b) + sign * (1-s)^(-a)(1 + r s)^(exp2_second)`` in ``s = sqrt x``."""
    a, bb = b["a"], b["b"]
    first = LiouvillianExpr.power(_pp(((1, 1), -a), ((1, -ratio), -bb)), root_order=2)
    second = LiouvillianExpr.power(_pp(((1, -1), -a), ((1, ratio), exp2_second)), sign, root_order=2)
    return first + second


def dih_eval1_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(bb * bb / (a * a), -bb * (a + bb) / (4 * a), (a + bb) / 2, (a + bb + 1) / 2, F(-1, 2), 1 + a)


def dih_eval2_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams((a * a - bb * bb) / (a * a), (a + bb) ** 2 * (a + 1) / (4 * a), (a + bb) / 2,
                      (a + bb + 1) / 2, 1 + a, F(-1, 2))


def dih_eval3_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(bb * bb / (a * a), (5 * a * bb * (a + bb) + 6 * (a * a + bb * bb)) / (4 * a * a),
                      (a + bb + 3) / 2, (a + bb + 4) / 2, F(5, 2), 1 + a)


def dih_eval4_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(a * a / (bb * bb), ((a * a - bb * bb) ** 2 + a**3 + bb**3) / (4 * bb * bb),
                      (a + bb) / 2, (a + bb + 3) / 2, F(1, 2), 1 + a)


def dih_eval5_params(b):
    a, bb = b["a"], b["b"]
    return HeunParams(a * a / (bb * bb),
                      ((a * a - bb * bb) ** 2 + 3 * (a**3 + bb**3) + 2 * (a * a + bb * bb)) / (4 * bb * bb),
                      (a + bb + 1) / 2, (a + bb + 4) / 2, F(3, 2), 1 + a)


def _dih_valid(params_fn):
    def valid(b):
        _check_ab(b, extra=[b["a"] - b["b"]])
        p = params_fn(b)
        if _is_bad_c(p.c):
            raise BindingError(f"inadmissible c = {p.c}")
        _t_ok(p.t)
    return valid


def _dih_numeric(params_fn, rhs_build, to_x=lambda b, u: u, variants=None):
    return NumericSpec(
        lhs=lambda b, u, prec: heun_value(params_fn(b), u, prec),
        rhs=_lv_rhs(rhs_build, to_x),
        upper=lambda b: _radius(params_fn(b)),
        variants={k: _lv_rhs(v, to_x) for k, v in (variants or {}).items()},
    )


DIH_EVAL1 = _dih_numeric(
    dih_eval1_params,
    lambda b: _dih_sum(b, b["a"] / b["b"], 1, -b["b"]).scale(F(1, 2)),
    variants={"printed form (second factor exponent +b)":
              lambda b: _dih_sum(b, b["a"] / b["b"], 1, b["b"]).scale(F(1, 2))},
)
DIH_EVAL2 = _dih_numeric(
    dih_eval2_params,
    lambda b: LiouvillianExpr.power(
        _pp(((F(1, 2), F(1, 2)), -b["a"]),
            ((b["b"] / (b["b"] - b["a"]), -b["a"] / (b["b"] - b["a"])), -b["b"])),
        root_order=2),
    to_x=lambda b, u: 1 - u,
)
DIH_EVAL3 = _dih_numeric(
    dih_eval3_params,
    lambda b: _dih_sum(b, b["a"] / b["b"], -1, -b["b"]).scale(
        RationalFunction(Poly.const(3 * b["b"] ** 2 / (2 * b["a"] * (b["a"] ** 2 - b["b"] ** 2))), X**3)),
)
DIH_EVAL4 = _dih_numeric(
    dih_eval4_params,
    lambda b: _dih_sum(b, b["b"] / b["a"], 1, -b["b"]).scale(F(1, 2)),
    variants={"printed form (second factor exponent +b)":
              lambda b: _dih_sum(b, b["b"] / b["a"], 1, b["b"]).scale(F(1, 2))},
)
DIH_EVAL5 = _dih_numeric(
    dih_eval5_params,
    lambda b: _dih_sum(b, b["b"] / b["a"], -1, -b["b"]).scale(
        RationalFunction(Poly.const(b["a"] / (2 * (b["b"] ** 2 - b["a"] ** 2))), X)),
)


# ---------------------------------------------------------------------------
# equation-level pull-backs


def trivpbf_pullback(N: int, M: int, alpha):
    D = N + M
    phi = cyclic_covering(N, M).phi
    theta = PowerProduct(((phi.num, 1), (X, -2)))
    return transform_ode(PullbackSpec(hpg_ode(HpgParams(1 - alpha, 1, 2)), phi, theta))


def check_trivpbf(N: int, M: int, alpha, expected: HeunParams | None = None) -> str | None:
    ode = trivpbf_pullback(N, M, alpha)
    rep = match_heun(ode, expected or trivpbf_params(N, M, alpha))
    if not rep:
        return rep.witness
    D = N + M
    want = _sorted_diffs([F(2), N * alpha, M * alpha, D * alpha])
    got, others = _four_point_differences(ode, [F(0), F(1), F(-M, N)])
    if others:
        return f"extra singular points {[p.label() for p in others]}"
    if got != want:
        return f"exponent differences {got} != {want}"
    return None


def _sorted_diffs(values) -> list:
    return sorted((abs(v) for v in values), key=lambda v: (float(v), str(v)))


def _four_point_differences(ode, finite: list):
    """Exponent differences at ``finite`` and infinity, plus any singular points elsewhere.

    Points where a parameter makes the difference 1 may turn into ordinary
    points, so the exponents are computed at the four Heun points directly.
    """
    diffs = []
    for pt in [*finite, "inf"]:
        lo, hi = local_exponents(ode, pt)
        diffs.append(hi - lo)
    known = Poly.const(1)
    for pt in finite:
        known = known * Poly.linear(pt)
    others = [p for p in singular_points(ode, include_infinity=False) if (known % p.locus).degree >= 0]
    return _sorted_diffs(diffs), others


def nonbelyi_pullback(s, e):
    cov = nonbelyi_covering(s)
    theta = PowerProduct(((Poly((s, 2, -1)), -e),))
    return transform_ode(PullbackSpec(hpg_ode(HpgParams(e / 2, (e + 1) / 2, 1 + e)), cov.phi, theta))


def nonbelyi_params(e) -> HeunParams:
    return HeunParams(2, 0, 0, 2 * e, 1 + e, -1)


def check_nonbelyi(s, e, expected: HeunParams | None = None) -> str | None:
    rep = match_heun(nonbelyi_pullback(s, e), expected or nonbelyi_params(e))
    return None if rep else rep.witness


def dihedral_pullback(N: int, M: int, alpha, theta_exponent=None):
    cov, pair = dihedral_covering(N, M)
    src = hpg_ode(HpgParams(-alpha / 2, (1 - alpha) / 2, F(1, 2)))
    theta = PowerProduct() if theta_exponent is None else PowerProduct(((pair.Theta1, theta_exponent),))
    return transform_ode(PullbackSpec(src, cov.phi, theta)), pair


def check_dihedral_pullback(N: int, M: int, alpha) -> str | None:
    """Exponent differences {1/2, 3/2, N alpha, M alpha} at {inf, 0, 1, M^2/N^2}."""
    t = F(M * M, N * N)
    want = _sorted_diffs([F(1, 2), F(3, 2), N * alpha, M * alpha])
    # theta = Theta1^alpha: no singular points besides 0, 1, t, infinity
    ode, pair = dihedral_pullback(N, M, alpha, theta_exponent=alpha)
    got, others = _four_point_differences(ode, [F(0), F(1), t])
    if others:
        return f"theta=Theta1^alpha: extra singular points {[p.label() for p in others]}"
    if got != want:
        return f"theta=Theta1^alpha: exponent differences {got} != {want}"
    # theta = 1: the same plus difference-1 points at the roots of Theta1
    ode1, _ = dihedral_pullback(N, M, alpha)
    got, others = _four_point_differences(ode1, [F(0), F(1), t])
    if got != want:
        return f"theta=1: exponent differences {got} != {want}"
    roots = Poly.const(1)
    for p in others:
        if p.difference != 1:
            return f"theta=1: unexpected exponent difference {p.difference} at {p.label()}"
        roots = roots * p.locus
    if roots != pair.Theta1.monic():
        return f"theta=1: extra singular points {roots} are not the roots of Theta1"
    if pair.Theta2.degree > 0 and local_exponents(ode1, pair.Theta2.monic()) != (0, 1):
        return "theta=1: roots of Theta2 are not regular"
    return None


ALPHA_GRID = (F(1, 5), F(1, 7), F(2, 9))


def _exact_grid_run(items: Callable[[list], Iterable], check: Callable) -> Callable:
    def run(bindings, plan):
        n = 0
        for b in items(bindings):
            n += 1
            w = check(**b)
            if w:
                return Outcome(False, n, None, w, _fmt_binding(b))
        return Outcome(True, n)
    return run


def _numeric_run(spec: NumericSpec) -> Callable:
    return lambda bindings, plan: run_numeric(spec, bindings, plan)


def _no_bindings(rng, count):
    return [{}]


def _gensol_expr(a, b) -> LiouvillianExpr:
    """``C1 + C2 (x-1)^a (a x + b)^b`` with ``C1 = C2 = 1``."""
    return LiouvillianExpr.rational(1) + LiouvillianExpr.power(_pp(((-1, 1), a), ((b, a), b)))


def gensol_params(a, b) -> HeunParams:
    return HeunParams(-b / a, 0, 0, -a - b, -1, 1 - a)


def check_gensol(a, b) -> str | None:
    ode = heun_ode(gensol_params(a, b))
    for label, e in (("C1", LiouvillianExpr.rational(1)),
                     ("C2", LiouvillianExpr.power(_pp(((-1, 1), a), ((b, a), b)))),
                     ("C1+C2", _gensol_expr(a, b))):
        r = lv_ode_residual(e, ode)
        if not r:
            return f"{label}: {r}"
    return None


def _build_catalog() -> list[IdentityCase]:
    ab = {"a": "rational in (-2,2), nonzero", "b": "rational in (-2,2), nonzero", "a+b": "nonzero"}
    cases = []

    def numeric(cid, lhs, rhs, domains, spec, make, valid):
        cases.append(IdentityCase(cid, "numeric", lhs, rhs, domains,
                                  lambda rng, n: _draw(rng, n, make, valid), _numeric_run(spec), valid))

    numeric("CYC1", "Hl(1+b/a, -b(a+1); a, -b; 1+a; -1; 1-x)", "((a x + b)/(a+b))^b", ab, CYC1,
            _ab_domain, _valid_heun(cyc1_params))
    numeric("CYC2", "Hl(1+a/b, -a(b+1); -a, b; 1+b; -1; 1+a x/b)", "(a(1-x)/(a+b))^a", ab, CYC2,
            _ab_domain, _valid_heun(cyc2_params))
    numeric("CYC3", "Hl(-a/b, (b^2-a^2)((a-1)/b+1); -a-b, 2-a-b; 1-a-b; 1-a; 1/x)",
            "(1-1/x)^a (1+b/(a x))^b", ab, CYC3, _ab_domain, _valid_heun(cyc3_params))
    numeric("CYC4", "a(a+b)/(2b) x^2 Hl(-b/a, 2(1-b/a); 2, 2-a-b; 3; 1-a; x)",
            "1 - (1-x)^a (1 + a x/b)^b", ab, CYC4, _ab_domain, _valid_heun(cyc4_params))
    numeric("CYC-TRIV", "Hl(-M/N, 2(1-M/N); 2, 2-D alpha; 3; 1-N alpha; x)",
            "2M phi/(N D x^2) 2F1(1-alpha, 1; 2; phi)",
            {"N": "1..6", "M": "1..6", "alpha": "rational in (-2,2), nonzero"},
            CYC_TRIV, _nm_alpha_domain, _valid_nm_alpha)

    def log_run(bindings, plan):
        rng = random.Random(f"points:{plan.seed}")
        worst = mpmath.mpf(0)
        n = 0
        for b in bindings:
            ok, w, err, k = check_cyc_log(b["N"], b["M"], plan, rng)
            n += k
            if not ok:
                return Outcome(False, n, err, w, _fmt_binding(b))
            worst = max(worst, err)
        return Outcome(True, n, worst, flags=["exact residual of the log form vanishes"])

    cases.append(IdentityCase(
        "CYC-LOG", "exact_residual", "Hl(-M/N, 2(1-M/N); 2, 2; 3; 1; x)",
        "-(2M/(N D x^2)) (N log(1-x) + M log(1 + N x/M))", {"N": "1..6", "M": "1..6"},
        lambda rng, n: [{"N": N, "M": M} for N in range(1, 7) for M in range(1, 7)][: max(n, 3) * 2],
        log_run))
    cases.append(IdentityCase(
        "CYC-KLEIN", "exact_polynomial", "(N D/2M) x^2 Hl(-M/N, 2(1-M/N); 2, 2-D; 3; 1-N; x)", "phi(x)",
        {"N": "1..8", "M": "1..8"},
        lambda rng, n: [{"N": N, "M": M} for N in range(1, 9) for M in range(1, 9)],
        _exact_grid_run(lambda bs: bs, check_cyc_klein)))

    def psi_run(bindings, plan):
        for n in range(1, 11):
            p = psi_poly(n)
            if p.degree != n - 1:
                return Outcome(False, 0, None, f"psi_{n} has degree {p.degree}", {"n": n})
        out = run_numeric(CYC_PSI, bindings, plan)
        out.flags.insert(0, "psi(x) exact polynomial of degree n-1 for n = 1..10")
        return out

    cases.append(IdentityCase(
        "CYC-PSI", "numeric", "2F1(1-n a, 1; 2; x)", "psi(x) 2F1(1-a, 1; 2; n x psi(x))",
        {"n": "1..10", "a": "rational in (-3,3), nonzero"},
        lambda rng, n: _draw(rng, n, lambda r: {"n": r.randint(1, 10), "a": random_rational(r, -3, 3)},
                             lambda b: None if b["a"] != 0 else (_ for _ in ()).throw(BindingError("a = 0"))),
        psi_run))
    cases.append(IdentityCase(
        "CYC-GENSOL", "exact_residual", "Heun (a,b,c,d,t,q) = (0, -a-b, -1, 1-a, -b/a, 0)",
        "C1 + C2 (x-1)^a (a x + b)^b", ab,
        lambda rng, n: _draw(rng, n, _ab_domain, lambda b: _check_ab(b)),
        _exact_grid_run(lambda bs: [{"a": b["a"], "b": b["b"]} for b in bs], check_gensol)))
    numeric("REM-POW1", "Hl(1+b/a, -b(a+1); a, -b; 1+a; -1; (a+b) x/a)", "(1-x)^b", ab, REM_POW1,
            _ab_domain, _valid_heun(rem_pow1_params))
    numeric("REM-POW2", "Hl(a/(a-b), a b (a+1)/(a-b); a, b; 1+a; 1+b; x)", "(1-x)^(-b)",
            dict(ab, **{"a-b": "nonzero"}), REM_POW2, _ab_domain, _valid_heun(rem_pow2_params))
    numeric("REM-CONTIG", "2F1(a, b; a+1; x) + b x/(a+1) 2F1(a+1, b+1; a+2; x)", "(1-x)^(-b)",
            {"a": "rational in (-2,2), a+1, a+2 admissible", "b": "rational in (-2,2), nonzero"},
            REM_CONTIG, _ab_domain, _valid_contig)
    cases.append(IdentityCase(
        "P1", "numeric", "Hl(-1, 0; 2A, 2B; 2C-1; A+B-C+1; x)", "2F1(A, B; C; x^2)",
        {"A": "rational in (-2,2)", "B": "rational in (-2,2)", "C": "rational in (-2,2), C and 2C-1 admissible"},
        lambda rng, n: _draw(rng, n, _p1_domain, _valid_p1), _p1_run, _valid_p1))
    for which, lhs, rhs in (
        ("P15", "Hl(1/4, -9na/4; -3n, 3a; 1/2; a-n+1/2; x)", "2F1(-n, a; 1/2; x(4x-3)^2)"),
        ("P19", "Hl(9, q1; -3n, a-2n; a-n+1/3; 1-2n-2a; x)",
         "(1-x)^(2n) 2F1(-n, a; a-n+1/3; -x(x-9)^2/(27(x-1)^2))"),
        ("P20", "Hl(9/8, q2; -4n, a-3n; 3a-3n-1/2; a-n+1/2; x)",
         "(1-8x/9)^(3n) 2F1(-n, a; a-n+1/2; 64x^3(x-1)/(8x-9)^3)"),
    ):
        cases.append(IdentityCase(f"POLY-{which}", "exact_polynomial", lhs, rhs,
                                  {"n": "1..4", "a": "rational in (-3,3)"}, _poly_sampler(which), _poly_run(which),
                                  _valid_poly(which)))

    cases.append(IdentityCase(
        "DIH-THETA-SMALL", "exact_polynomial", "(1 - sqrt x)^n", "theta1(x) - theta2(x) sqrt x (terminating 2F1)",
        {"n": "1..10"}, lambda rng, n: [{"n": k} for k in range(1, 11)],
        _exact_grid_run(lambda bs: bs, check_theta_small)))
    cases.append(IdentityCase(
        "DIH-CHEB", "exact_polynomial", "theta1^2 - x theta2^2; homogenized T_n, U_(n-1)", "(1-x)^n; theta1, theta2",
        {"n": "1..10"}, lambda rng, n: [{"n": k} for k in range(1, 11)],
        _exact_grid_run(lambda bs: bs, check_chebyshev)))
    nm_grid = [{"N": N, "M": M} for M in range(2, 10) for N in range(1, M)]
    cases.append(IdentityCase(
        "DIH-THETA1", "exact_polynomial", "Theta1(x)", "Hl(M^2/N^2, M D/4N; -D/2, -(D-1)/2; -1/2; 1-N; x)",
        {"N<M": "1..9"}, lambda rng, n: list(nm_grid),
        _exact_grid_run(lambda bs: [dict(b, which=1) for b in bs], check_dihedral_heun_poly)))
    cases.append(IdentityCase(
        "DIH-THETA2", "exact_polynomial", "Theta2(x)",
        "N D (M-N)/(3M^2) Hl(M^2/N^2, 3/2(1+M^2/N^2) - 5MD/4N; -(D-3)/2, -(D-4)/2; 5/2; 1-N; x)",
        {"N<M": "1..9"}, lambda rng, n: list(nm_grid),
        _exact_grid_run(lambda bs: [dict(b, which=2) for b in bs], check_dihedral_heun_poly)))
    cases.append(IdentityCase(
        "DIH-N1", "exact_polynomial", "Theta1, Theta2 for N = 1",
        "2F1(-M/2, -(M+1)/2; -1/2; x/M^2), (M^2-1)/(3M^2) 2F1(-(M-2)/2, -(M-3)/2; 5/2; x/M^2)",
        {"M": "2..8"}, lambda rng, n: [{"M": M} for M in range(2, 9)],
        _exact_grid_run(lambda bs: bs, check_dihedral_n1)))
    dih_dom = dict(ab, **{"a-b": "nonzero"})
    numeric("DIH-EVAL1", "Hl(b^2/a^2, -b(a+b)/4a; (a+b)/2, (a+b+1)/2; -1/2; 1+a; x)",
            "[(1+sqrt x)^(-a)(1-(a/b)sqrt x)^(-b) + (1-sqrt x)^(-a)(1+(a/b)sqrt x)^(-b)]/2",
            dih_dom, DIH_EVAL1, _ab_domain, _dih_valid(dih_eval1_params))
    numeric("DIH-EVAL2", "Hl((a^2-b^2)/a^2, (a+b)^2(a+1)/4a; (a+b)/2, (a+b+1)/2; 1+a; -1/2; 1-x)",
            "((1+sqrt x)/2)^(-a) ((b - a sqrt x)/(b-a))^(-b)",
            dih_dom, DIH_EVAL2, _ab_domain, _dih_valid(dih_eval2_params))
    numeric("DIH-EVAL3", "Hl(b^2/a^2, (5ab(a+b)+6(a^2+b^2))/4a^2; (a+b+3)/2, (a+b+4)/2; 5/2; 1+a; x)",
            "3b^2 x^(-3/2)/(2a(a^2-b^2)) [(1+sqrt x)^(-a)(1-(a/b)sqrt x)^(-b) - (1-sqrt x)^(-a)(1+(a/b)sqrt x)^(-b)]",
            dih_dom, DIH_EVAL3, _ab_domain, _dih_valid(dih_eval3_params))
    numeric("DIH-EVAL4", "Hl(a^2/b^2, ((a^2-b^2)^2+a^3+b^3)/4b^2; (a+b)/2, (a+b+3)/2; 1/2; 1+a; x)",
            "[(1+sqrt x)^(-a)(1-(b/a)sqrt x)^(-b) + (1-sqrt x)^(-a)(1+(b/a)sqrt x)^(-b)]/2",
            dih_dom, DIH_EVAL4, _ab_domain, _dih_valid(dih_eval4_params))
    numeric("DIH-EVAL5",
            "Hl(a^2/b^2, ((a^2-b^2)^2+3(a^3+b^3)+2(a^2+b^2))/4b^2; (a+b+1)/2, (a+b+4)/2; 3/2; 1+a; x)",
            "a x^(-1/2)/(2(b^2-a^2)) [(1+sqrt x)^(-a)(1-(b/a)sqrt x)^(-b) - (1-sqrt x)^(-a)(1+(b/a)sqrt x)^(-b)]",
            dih_dom, DIH_EVAL5, _ab_domain, _dih_valid(dih_eval5_params))

    cases.append(IdentityCase(
        "PB-TRIVPBF", "exact_residual", "pull-back of E(1-alpha,1,2) by phi, theta = 2M phi/(N D x^2)",
        "Heun (-M/N, 2(1-M/N); 2, 2-D alpha; 3; 1-N alpha)", {"N": "1..6", "M": "1..6", "alpha": "1/5, 1/7, 2/9"},
        lambda rng, n: [{"N": N, "M": M, "alpha": al} for N in range(1, 7) for M in range(1, 7) for al in ALPHA_GRID],
        _exact_grid_run(lambda bs: bs, check_trivpbf)))

    def nb_sample(rng, n):
        grid = [{"s": F(1, 2), "e": F(1, 3)}, {"s": F(-3, 4), "e": F(2, 5)}, {"s": F(5, 2), "e": F(-1, 7)}]
        extra = _draw(rng, max(n - 3, 0),
                      lambda r: {"s": random_rational(r, -3, 3), "e": random_rational(r, -2, 2)},
                      lambda b: None if b["s"] not in (0,) and b["e"] != 0
                      else (_ for _ in ()).throw(BindingError("degenerate")))
        return grid + extra

    cases.append(IdentityCase(
        "PB-NONBELYI", "exact_residual",
        "pull-back of E(e/2,(e+1)/2,1+e) by phi_s, theta = (1+(2x-x^2)/s)^(-e)", "Heun (2, 0; 0, 2e; 1+e; -1)",
        {"s": "rational, s != 0", "e": "rational, nonzero"}, nb_sample,
        _exact_grid_run(lambda bs: bs, check_nonbelyi)))
    cases.append(IdentityCase(
        "PB-DIHEDRAL", "exact_residual", "pull-back of E(-alpha/2,(1-alpha)/2,1/2) by x^3 Theta2^2/Theta1^2",
        "<1/2, 3/2, N alpha, M alpha> at {inf, 0, 1, M^2/N^2}", {"N<M": "1..6", "alpha": "1/5, 1/7, 2/9"},
        lambda rng, n: [{"N": N, "M": M, "alpha": al} for M in range(2, 7) for N in range(1, M) for al in ALPHA_GRID],
        _exact_grid_run(lambda bs: bs, check_dihedral_pullback)))
    return cases


_CATALOG: list[IdentityCase] | None = None


def catalog() -> list[IdentityCase]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return list(_CATALOG)


def get_case(cid: str) -> IdentityCase:
    for c in catalog():
        if c.id == cid:
            return c
    raise UnknownIdentity(cid)


def default_bindings(case: IdentityCase, profile: str = "quick", seed: int = 0) -> list:
    nb, _ = PROFILES[profile]
    return case.sample(random.Random(f"{seed}:{case.id}"), nb)


def run_identity(cid: str, bindings=None, plan: Plan | None = None) -> VerificationReport:
    case = get_case(cid)
    plan = plan or Plan()
    if bindings is None:
        bindings = default_bindings(case, "quick", plan.seed)
    else:
        if isinstance(bindings, dict):
            bindings = [bindings]
        bindings = [{k: (F(v) if isinstance(v, (int, str)) and k not in ("N", "M", "n") else v)
                     for k, v in b.items()} for b in bindings]
        if case.validate is not None:
            for b in bindings:
                case.validate(b)
    t0 = time.perf_counter()
    out = case.run(list(bindings), plan)
    ms = (time.perf_counter() - t0) * 1000
    worst = None if out.worst is None else mpmath.nstr(out.worst, 3)
    return VerificationReport(case.id, "pass" if out.ok else "fail", case.mode, out.samples, worst,
                              out.witness, out.binding, out.flags, ms)


def run_all(profile: str = "quick", seed: int = 0, precision: int = 50, ids: Iterable[str] | None = None) -> list:
    nb, npts = PROFILES[profile]
    plan = Plan(points=npts, precision=precision, seed=seed)
    reports = []
    for case in catalog():
        if ids is not None and case.id not in ids:
            continue
        bindings = case.sample(random.Random(f"{seed}:{case.id}"), nb)
        reports.append(run_identity(case.id, bindings, plan))
    return sorted(reports, key=lambda r: r.id)


def reports_jsonl(reports: Iterable[VerificationReport], timing: bool = False) -> str:
    """One JSON object per line; runtimes are left out unless asked for, so output is byte-stable."""
    return "".join(json.dumps(r.to_dict(timing), sort_keys=True) + "\n" for r in reports)


def summary_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "status", "worst_error", "samples", "ms"])
    for r in reports:
        w.writerow([r.id, r.status, r.worst_error or "", r.samples, round(r.runtime_ms)])
    return buf.getvalue()
