from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunpull.coverings import cyclic_covering, dihedral_covering, nonbelyi_covering
from heunpull.exact import Poly, RationalFunction
from heunpull.liouvillian import PowerProduct
from heunpull.pullback import (
    IrregularSingularity,
    ODE,
    PullbackSpec,
    exponent_difference_multiset,
    heun_ode,
    hpg_ode,
    local_exponents,
    match_heun,
    singular_points,
    transform_ode,
)
from heunpull.series import HeunParams, HpgParams

X = Poly.x()
rat = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def test_hpg_ode_examples():
    assert hpg_ode(HpgParams(0, F(1, 3), F(1, 2))).p0.is_zero()
    ode = hpg_ode(HpgParams(F(1, 3), F(1, 5), F(1, 2)))
    assert ode.p1 == F(1, 2) / RationalFunction.x() + F(31, 30) / (RationalFunction.x() - 1)
    assert set(local_exponents(ode, 0)) == {0, F(1, 2)}
    assert set(local_exponents(ode, "inf")) == {F(1, 3), F(1, 5)}


def test_heun_ode_examples():
    p = HeunParams(F(-3), F(1, 7), 0, F(2, 5), F(1, 3), F(1, 4))
    assert heun_ode(p.replace(q=0)).p0.is_zero()
    ode = heun_ode(p)
    assert set(local_exponents(ode, 0)) == {0, 1 - p.c}
    assert set(local_exponents(ode, 1)) == {0, 1 - p.d}
    assert set(local_exponents(ode, p.t)) == {0, 1 - p.e}
    assert set(local_exponents(ode, "inf")) == {p.a, p.b}


def test_p1_transform():
    A, B, C = F(1, 3), F(1, 5), F(1, 2)
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(A, B, C)), RationalFunction(X**2)))
    expected = HeunParams(-1, 0, 2 * A, 2 * B, 2 * C - 1, A + B - C + 1)
    assert expected.astuple() == (-1, 0, F(2, 3), F(2, 5), 0, F(31, 30))
    assert match_heun(ode, expected)
    bad = match_heun(ode, expected.replace(q=1))
    assert not bad and "p0" in bad.witness


@settings(max_examples=15, deadline=None)
@given(rat, rat, rat.filter(lambda c: not (c.denominator == 1 and c <= 0)))
def test_p1_transform_generic(A, B, C):
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(A, B, C)), RationalFunction(X**2)))
    assert match_heun(ode, HeunParams(-1, 0, 2 * A, 2 * B, 2 * C - 1, A + B - C + 1))


def test_nonbelyi_transform():
    s, e = F(1, 2), F(1, 3)
    phi = nonbelyi_covering(s).phi
    theta = PowerProduct.of((Poly((s, 2, -1)), -e))  # (1 + (2x - x^2)/s)^(-e) up to a constant
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(e / 2, (e + 1) / 2, 1 + e)), phi, theta))
    assert match_heun(ode, HeunParams(2, 0, 0, 2 * e, 1 + e, -1))


def test_trivpbf_transform():
    N, M, al = 2, 1, F(1, 5)
    D = N + M
    phi = cyclic_covering(N, M).phi
    theta = PowerProduct.of((phi.num, 1), (X, -2))
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(1 - al, 1, 2)), phi, theta))
    assert match_heun(ode, HeunParams(F(-M, N), 2 * (1 - F(M, N)), 2, 2 - D * al, 3, 1 - N * al))
    assert exponent_difference_multiset(ode) == sorted([F(2), N * al, M * al, D * al])


def test_dihedral_exponents():
    N, M, al = 1, 2, F(1, 7)
    cov, _ = dihedral_covering(N, M)
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(-al / 2, (1 - al) / 2, F(1, 2))), cov.phi))
    diffs = {sp.label(): sp.difference for sp in singular_points(ode)}
    assert diffs["0"] == F(3, 2)
    assert diffs["1"] == N * al
    assert diffs["4"] == M * al
    assert diffs["inf"] == F(1, 2)
    # theta = 1 leaves difference-1 points at the roots of Theta1 (here x = 4/3)
    assert diffs["4/3"] == 1


def test_dihedral_theta2_roots_regular():
    cov, pair = dihedral_covering(2, 5)
    ode = transform_ode(PullbackSpec(hpg_ode(HpgParams(F(-1, 10), F(9, 20), F(1, 2))), cov.phi))
    assert local_exponents(ode, pair.Theta2.monic()) == (0, 1)


def test_heun_exponent_differences_formula():
    A, B, C = F(1, 3), F(-2, 5), F(3, 4)
    p = HeunParams(-1, 0, 2 * A, 2 * B, 2 * C - 1, A + B - C + 1)
    got = exponent_difference_multiset(heun_ode(p))
    want = sorted(abs(v) for v in p.exponent_differences())
    assert got == want


def test_irregular_detected():
    ode = ODE(RationalFunction(Poly.const(1), X**2), RationalFunction(0))
    with pytest.raises(IrregularSingularity):
        local_exponents(ode, 0)


def test_phi_must_be_nonconstant():
    with pytest.raises(ValueError):
        PullbackSpec(hpg_ode(HpgParams(1, 1, 1)), RationalFunction(3))


def test_cleared_form():
    P2, P1, P0 = heun_ode(HeunParams(2, 1, 1, 1, 1, 1)).cleared()
    assert P2 == X * (X - 1) * (X - 2)
    assert P0 == Poly((-1, 1))
