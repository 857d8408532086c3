from fractions import Fraction as F

import mpmath
import pytest

from heunpull.exact import Poly, RationalFunction
from heunpull.liouvillian import (
    ExactModeError,
    LiouvillianExpr,
    PowerProduct,
    lv_differentiate,
    lv_eval,
    lv_ode_residual,
    numeric_ode_residual,
    pp_log_derivative,
)
from heunpull.pullback import heun_ode
from heunpull.series import BranchError, HeunParams

X = Poly.x()
x = RationalFunction.x()


def test_log_derivative_examples():
    a, b = F(2, 3), F(-5, 7)
    pp = PowerProduct.of((Poly((1, -1)), a), (Poly((1, a / b)), b))
    want = -a / (1 - x) + a * b / (b + a * x)
    assert pp_log_derivative(pp) == want
    assert pp_log_derivative(PowerProduct.of((X, F(1, 2)))) == 1 / (2 * x)
    assert pp_log_derivative(PowerProduct()) == RationalFunction(0)


def test_log_derivative_needs_exact_exponents():
    with pytest.raises(ExactModeError):
        pp_log_derivative(PowerProduct.of((X, mpmath.mpf("0.5"))))


def test_differentiate_examples():
    r = RationalFunction(X**2 + 1, X - 2)
    d = lv_differentiate(LiouvillianExpr.rational(r))
    assert d.normalize().terms[0].coeff == r.derivative()

    a, b = F(1, 2), F(1, 3)
    pp = PowerProduct.of((Poly((-1, 1)), a), (Poly((b, a)), b))
    e = LiouvillianExpr.power(pp)
    d = lv_differentiate(e)
    assert len(d.terms) == 1 and d.terms[0].pp == pp
    assert d.terms[0].coeff == pp_log_derivative(pp)

    d = lv_differentiate(LiouvillianExpr.power(PowerProduct(), log=Poly((1, -1))))
    assert d.is_zero() is False
    assert [t.log for t in d.terms] == [None]
    assert d.terms[0].coeff == -1 / (1 - x)


def test_differentiate_in_sqrt_variable():
    # d/dx of sqrt(x) is 1/(2 sqrt x); in s = sqrt(x) that is 1/(2s)
    e = LiouvillianExpr.rational(RationalFunction(X), root_order=2)
    d = lv_differentiate(e)
    assert d.terms[0].coeff == RationalFunction(Poly.const(F(1, 2)), X)


def test_eval_examples():
    a, b = F(3, 4), F(-2, 5)
    base = Poly((b / (a + b), a / (a + b)))
    e = LiouvillianExpr.power(PowerProduct.of((base, b)))
    with mpmath.workdps(50):
        assert abs(lv_eval(e, 1) - 1) < mpmath.mpf(10) ** -48
    dih = LiouvillianExpr.power(PowerProduct.of((Poly((1, 1)), -a), (Poly((1, -a / b)), -b)), root_order=2)
    assert lv_eval(dih, 0) == 1


def test_log_form_against_small_alpha():
    N = M = 1
    c = RationalFunction(Poly.const(F(-2 * M, N * 2)), X**2)
    e = (LiouvillianExpr.power(PowerProduct(), c * N, log=Poly((1, -1)))
         + LiouvillianExpr.power(PowerProduct(), c * M, log=Poly((1, 1))))
    with mpmath.workdps(50):
        v = lv_eval(e, F(1, 2))
        want = -4 * (mpmath.log(mpmath.mpf(1) / 2) + mpmath.log(mpmath.mpf(3) / 2))
        assert abs(v - want) < mpmath.mpf(10) ** -45
        # alpha -> 0 limit of 2 phi/(N D x^2) (1 - (1-phi)^alpha)/(alpha phi) with phi = x^2
        al = mpmath.mpf(10) ** -20
        phi = mpmath.mpf(1) / 4
        limit = mpmath.mpf(4) * (1 - (1 - phi) ** al) / al
        assert abs(v - limit) < mpmath.mpf(10) ** -15


def test_eval_branch_errors():
    e = LiouvillianExpr.power(PowerProduct.of((Poly((1, -1)), F(1, 3))))
    with pytest.raises(BranchError):
        lv_eval(e, 2)
    with pytest.raises(BranchError):
        lv_eval(LiouvillianExpr.rational(1, root_order=2), -1)


def _gensol_ode(a, b):
    # general solution C1 + C2 (x-1)^a (a x + b)^b: (t,q,a,b,c,d) = (-b/a, 0, 0, -a-b, -1, 1-a)
    return heun_ode(HeunParams(-b / a, 0, 0, -a - b, -1, 1 - a))


def test_ode_residual_examples():
    a, b = F(1, 2), F(1, 3)
    ode = _gensol_ode(a, b)
    e = LiouvillianExpr.power(PowerProduct.of((Poly((-1, 1)), a), (Poly((b, a)), b)))
    assert lv_ode_residual(e, ode)
    assert lv_ode_residual(LiouvillianExpr.rational(1), ode)
    res = lv_ode_residual(LiouvillianExpr.rational(x), ode)
    assert not res and res.witness is not None
    assert str(res).startswith("nonzero")


def test_numeric_residual_agrees():
    a, b = F(1, 2), F(1, 3)
    ode = _gensol_ode(a, b)
    e = LiouvillianExpr.power(PowerProduct.of((Poly((-1, 1)), a), (Poly((b, a)), b)))
    assert numeric_ode_residual(e, ode, [F(3, 2), F(5, 2)]) < mpmath.mpf(10) ** -40


def test_normalize_merges_integer_parts():
    e = LiouvillianExpr.power(PowerProduct.of((X + 1, F(5, 2)))) - LiouvillianExpr.power(
        PowerProduct.of((X + 1, F(1, 2))), (X + 1) ** 2)
    assert e.is_zero()
