from fractions import Fraction as F
from math import comb

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunpull.coverings import (
    compose,
    critical_values_numeric,
    cyclic_covering,
    cyclic_power_map,
    dihedral_covering,
    dihedral_theta,
    nonbelyi_branch_value,
    nonbelyi_covering,
    passport,
)
from heunpull.exact import Poly, RationalFunction

X = Poly.x()


def test_cyclic_examples():
    c = cyclic_covering(1, 1)
    assert c.phi == RationalFunction(X**2)
    assert c.passport == {"0": [2], "1": [1, 1], "inf": [2]}
    c = cyclic_covering(2, 1)
    assert c.phi.num == Poly((0, 0, 3, -2))
    assert c.passport == {"0": [2, 1], "1": [2, 1], "inf": [3]}
    assert c.distinct_points == 5 and c.belyi
    c = cyclic_covering(2, 2)
    assert c.phi.num == Poly((0, 0, 2, 0, -1))
    assert c.phi == compose(RationalFunction(Poly((0, 2, -1))), RationalFunction(X**2))


def test_cyclic_rejects_nonpositive():
    with pytest.raises(ValueError):
        cyclic_covering(0, 2)


def test_dihedral_examples():
    cov, pair = dihedral_covering(1, 2)
    assert pair.Theta1 == Poly((1, F(-3, 4))) and pair.Theta2 == Poly.const(F(1, 4))
    assert cov.phi == RationalFunction(X**3, Poly((4, -3)) ** 2)
    assert cov.passport == {"0": [3], "1": [2, 1], "inf": [2, 1]}
    assert pair.to_dict()["t"] == "4"
    with pytest.raises(ValueError, match="degenerate covering"):
        dihedral_theta(3, 3)


def _binomial_split(N, M):
    # independent oracle: expand (1+s)^N (1 - N s/M)^M term by term
    coeffs = {}
    for i in range(N + 1):
        for j in range(M + 1):
            coeffs[i + j] = coeffs.get(i + j, 0) + comb(N, i) * comb(M, j) * F(-N, M) ** j
    return coeffs


@pytest.mark.parametrize("N,M", [(1, 3), (2, 5), (4, 3), (6, 1)])
def test_dihedral_theta_matches_binomials(N, M):
    pair = dihedral_theta(N, M)
    c = _binomial_split(N, M)
    assert c[1] == 0
    assert pair.Theta1 == Poly([c[k] for k in range(0, N + M + 1, 2)])
    assert pair.Theta2 == Poly([c[k] for k in range(3, N + M + 1, 2)])


def test_nonbelyi_examples():
    c = nonbelyi_covering(F(1, 3))
    assert not c.belyi
    assert c.extra_branch_values == [F(3, 4)]
    assert c.extra_branch[0].order == 2
    assert nonbelyi_covering(1).belyi
    assert nonbelyi_covering(-1).belyi
    with pytest.raises(ValueError):
        nonbelyi_covering(0)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-6, max_value=6, max_denominator=9).filter(lambda s: s not in (0, 1, -1)))
def test_nonbelyi_branch_value(s):
    c = nonbelyi_covering(s)
    assert len(c.extra_branch) == 1
    assert c.extra_branch[0].order == 2
    assert c.extra_branch[0].value == nonbelyi_branch_value(s)


def test_passport_examples():
    pp, extra, belyi = passport(RationalFunction(X**5))
    assert pp == {"0": [5], "1": [1] * 5, "inf": [5]} and belyi
    pp, _, belyi = passport(RationalFunction(Poly((0, 0, 3, -2))))
    assert pp == {"0": [2, 1], "1": [2, 1], "inf": [3]} and belyi
    s = F(1, 3)
    phi = RationalFunction(Poly((0, 2, -1)) * (4 * s), Poly((-s, -2, 1)) ** 2)
    _, extra, belyi = passport(phi)
    assert not belyi and len(extra) == 1


def test_extra_branch_agrees_with_numeric_critical_values():
    c = nonbelyi_covering(F(2, 5))
    crit = critical_values_numeric(c.phi)
    target = mpmath.mpf(c.extra_branch[0].value.numerator) / c.extra_branch[0].value.denominator
    assert any(v != mpmath.inf and abs(v - target) < mpmath.mpf(10) ** -10 for v in crit)


def test_compose_examples():
    h = RationalFunction(X**3 + 1, X - 2)
    assert compose(RationalFunction.x(), h) == h
    assert cyclic_power_map(2) == RationalFunction(Poly((0, 2, -1)))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_compose_degree_multiplies(j, k, n):
    g = cyclic_covering(j, k).phi
    h = RationalFunction(X**n + 1, X - 3) if n > 1 else RationalFunction(X + 2)
    assert compose(g, h).degree == g.degree * h.degree


def test_covering_json():
    d = cyclic_covering(2, 1).to_dict()
    assert d["phi"] == {"num": ["0", "0", "3", "-2"], "den": ["1"]}
    assert d["passport"] == {"0": [2, 1], "1": [2, 1], "inf": [3]}
    assert d["belyi"] is True
