from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunpull.exact import Poly
from heunpull.pullback import heun_ode
from heunpull.series import (
    BranchError,
    ConvergenceError,
    HeunParams,
    HpgParams,
    TolerancePolicy,
    TruncatedSeries,
    eval_truncated,
    heun_series,
    hpg_degenerate_closed,
    hpg_dihedral_closed,
    hpg_series,
    series_ode_residual,
)

THETA1_12 = HeunParams(4, F(3, 2), F(-3, 2), -1, F(-1, 2), 0)


def test_hpg_series_examples():
    s = hpg_series(HpgParams(-1, 1, 2), 5)
    assert s.terminated and s.as_poly() == Poly((1, F(-1, 2)))
    s = hpg_series(HpgParams(1, F(3, 2), F(1, 2)), 6)
    assert list(s.coefficients) == [2 * k + 1 for k in range(7)]
    s = hpg_series(HpgParams(0, F(2, 3), F(1, 5)), 4)
    assert s.terminated and s.as_poly() == Poly.const(1)


def test_hpg_series_rejects_bad_c():
    with pytest.raises(ValueError):
        hpg_series(HpgParams(1, 1, -2), 3)


def test_heun_series_examples():
    s = heun_series(THETA1_12, 10)
    assert s[1] == F(-3, 4)
    assert s.terminated and s.as_poly() == Poly((1, F(-3, 4)))
    s = heun_series(HeunParams(2, -2, 1, -1, 2, -1), 10)
    assert s.terminated and s.as_poly() == Poly((1, F(-1, 2)))
    s = heun_series(HeunParams(3, 0, 0, F(1, 3), F(1, 2), F(2, 7)), 5)
    assert s.terminated and s.as_poly() == Poly.const(1)


def test_heun_series_rejects_t_collisions():
    with pytest.raises(ValueError):
        HeunParams(1, 0, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        heun_series(HeunParams(2, 0, 1, 1, -1, 1), 3)


def test_eval_examples():
    s = heun_series(THETA1_12, 10)
    with mpmath.workdps(50):
        assert eval_truncated(s, F(1, 10)).value == mpmath.mpf(37) / 40
    generic = heun_series(HeunParams(F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(1, 5)), 10)
    assert eval_truncated(generic, 0).value == 1
    with pytest.raises(ConvergenceError, match="outside convergence region"):
        eval_truncated(generic, F(1, 2))


@pytest.mark.parametrize("params,z", [
    ((F(1, 3), F(1, 5), F(3, 7)), F(1, 2)),
    ((F(-5, 2), F(7, 4), F(1, 3)), F(-4, 5)),
    ((2, 3, F(9, 2)), F(17, 20)),
])
def test_hpg_against_mpmath(params, z):
    # independent oracle: mpmath's own 2F1
    with mpmath.workdps(60):
        got = eval_truncated(hpg_series(HpgParams(*params), 0), z).value
        want = mpmath.hyp2f1(*(mpmath.mpf(p.numerator) / p.denominator for p in map(F, params)),
                             mpmath.mpf(z.numerator) / z.denominator)
        assert abs(got - want) <= abs(want) * mpmath.mpf(10) ** -48


def test_heun_against_ode_integration():
    # independent oracle: Taylor integration of the Heun ODE itself
    p = HeunParams(F(-2), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(1, 5))
    t, q, a, b, c, d = (mpmath.mpf(v.numerator) / v.denominator for v in p.astuple())
    e = a + b - c - d + 1
    with mpmath.workdps(25):
        s = heun_series(p, 0)
        x0 = mpmath.mpf("0.1")
        y0 = eval_truncated(s, x0, TolerancePolicy(precision=25)).value
        h = mpmath.mpf(10) ** -12
        dy0 = (eval_truncated(s, x0 + h, TolerancePolicy(precision=25)).value
               - eval_truncated(s, x0 - h, TolerancePolicy(precision=25)).value) / (2 * h)

        def rhs(x, y):
            p1 = c / x + d / (x - 1) + e / (x - t)
            p0 = (a * b * x - q) / (x * (x - 1) * (x - t))
            return [y[1], -p1 * y[1] - p0 * y[0]]

        sol = mpmath.odefun(rhs, x0, [y0, dy0])
        x1 = mpmath.mpf("0.6")
        want = sol(x1)[0]
        got = eval_truncated(s, x1, TolerancePolicy(precision=25)).value
        assert abs(got - want) < mpmath.mpf(10) ** -9


def test_degenerate_closed_examples():
    with mpmath.workdps(50):
        assert hpg_degenerate_closed(2, F(1, 2)) == mpmath.mpf(3) / 4
        assert abs(hpg_degenerate_closed(0, F(1, 2)) - 2 * mpmath.log(2)) < mpmath.mpf(10) ** -48
        for z in (F(1, 3), F(-2), F(9, 10)):
            assert abs(hpg_degenerate_closed(1, z) - 1) < mpmath.mpf(10) ** -48
    with pytest.raises(BranchError):
        hpg_degenerate_closed(F(1, 2), 2)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=7),
       st.fractions(min_value=F(-4, 5), max_value=F(4, 5), max_denominator=20))
def test_degenerate_closed_matches_series(a, z):
    with mpmath.workdps(50):
        closed = hpg_degenerate_closed(a, z)
        series = eval_truncated(hpg_series(HpgParams(1 - a, 1, 2), 0), z).value
        assert abs(closed - series) <= abs(series) * mpmath.mpf(10) ** -45


def test_dihedral_closed_examples():
    assert hpg_dihedral_closed("upper", F(3, 7), 0) == 1
    with mpmath.workdps(50):
        assert hpg_dihedral_closed("half", -2, F(1, 4)) == mpmath.mpf(5) / 4
    assert hpg_dihedral_closed("half", F(2, 9), 0) == 1


@pytest.mark.parametrize("a", [F(1, 3), F(-5, 4), F(7, 2)])
def test_dihedral_closed_matches_series(a):
    z = F(2, 5)
    with mpmath.workdps(50):
        up = eval_truncated(hpg_series(HpgParams(a / 2, (a + 1) / 2, a + 1), 0), z).value
        half = eval_truncated(hpg_series(HpgParams(a / 2, (a + 1) / 2, F(1, 2)), 0), z).value
        assert abs(hpg_dihedral_closed("upper", a, z) - up) < mpmath.mpf(10) ** -45
        assert abs(hpg_dihedral_closed("half", a, z) - half) < mpmath.mpf(10) ** -45


def test_series_ode_residual_examples():
    p = HeunParams(F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(1, 5))
    assert series_ode_residual(heun_series(p, 22), heun_ode(p), 20)
    ode = heun_ode(THETA1_12)
    assert series_ode_residual(TruncatedSeries.from_poly(Poly((1, F(-3, 4)))), ode, 10)
    assert not series_ode_residual(TruncatedSeries.from_poly(Poly((1, 1))), ode, 10)


def test_mp_params_give_float_series():
    with mpmath.workdps(30):
        p = HeunParams(mpmath.mpf(-2), mpmath.mpf(1) / 3, 1, 1, 1, 1)
        s = heun_series(p, 5)
        assert not s.terminated
        assert isinstance(s[1], mpmath.mpf)
