import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from pointscatter.errors import DomainError
from pointscatter.greens import green_farfield_coeff, green_local_expansion, green_plus, helmholtz_residual

energies = st.floats(min_value=0.05, max_value=25.0)


@given(energies, st.floats(min_value=1e-3, max_value=50.0))
def test_closed_forms(E, r):
    k = math.sqrt(E)
    assert green_plus(1, r, E) == pytest.approx(cmath.exp(1j * k * r) / (2j * k), rel=1e-14)
    assert green_plus(2, r, E) == pytest.approx(-0.25j * special.hankel1(0, k * r), rel=1e-12, abs=1e-14)
    assert green_plus(3, r, E) == pytest.approx(-cmath.exp(1j * k * r) / (4 * math.pi * r), rel=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("E", [0.5, 1.0, 4.0])
def test_solves_helmholtz_away_from_origin(d, E):
    x = np.full(d, 0.9)
    assert helmholtz_residual(d, x, E, 1e-3) < 1e-5


@pytest.mark.parametrize("E", [0.3, 1.0, 7.0])
def test_local_expansion_d3(E):
    loc = green_local_expansion(3, E)
    r = 1e-7
    assert green_plus(3, r, E) - loc.singular_coeff / r == pytest.approx(loc.regular_coeff, abs=1e-7)


@pytest.mark.parametrize("E", [0.3, 1.0, 7.0])
def test_local_expansion_d2(E):
    loc = green_local_expansion(2, E)
    r = 1e-6
    assert green_plus(2, r, E) - loc.singular_coeff * math.log(r) == pytest.approx(loc.regular_coeff, abs=1e-9)


@pytest.mark.parametrize("E", [0.3, 1.0, 7.0])
def test_local_expansion_d1(E):
    loc = green_local_expansion(1, E)
    k = math.sqrt(E)
    h = 1e-7
    # G(x) = e^{ik|x|}/(2ik): value at 0 and jump of the derivative
    jump = (green_plus(1, h, E) - green_plus(1, 2 * h, E)) / (-h) * 2
    assert loc.regular_coeff == pytest.approx(1 / (2j * k))
    assert jump == pytest.approx(loc.singular_coeff, abs=1e-5)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_farfield_coefficient(d):
    k, R = 1.3, 1e6
    got = green_plus(d, R, k * k) * R ** ((d - 1) / 2) * cmath.exp(-1j * k * R)
    assert got == pytest.approx(green_farfield_coeff(d, k), rel=1e-6)


def test_domain_errors():
    with pytest.raises(DomainError):
        green_plus(4, 1.0, 1.0)
    with pytest.raises(DomainError):
        green_plus(3, 0.0, 1.0)
    with pytest.raises(DomainError):
        green_plus(2, 1.0, -1.0)
    with pytest.raises(DomainError):
        helmholtz_residual(3, [1e-3, 0, 0], 1.0, 1e-3)
