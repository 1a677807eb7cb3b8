import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from casimirkt.specfun import (
    CROSSOVER,
    OVERFLOW_ARGUMENT,
    _ap_kernel_asymptotic,
    _ap_kernel_series,
    ap_kernel,
    ap_kernel_weighted,
    bessel_i0,
    bessel_i1,
    bessel_i2,
    struve_l1,
)

mp.mp.dps = 40
GRID = [0.0, 1e-8, 1e-3, 0.1, 0.5, 1.0, 2.0, math.pi, 5.0, 10.0, 20.0, 24.9, 25.1, 40.0, 100.0, 300.0]


def rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def mp_kernel(x):
    z = mp.pi * x
    return mp.pi * x**2 / 4 - x * mp.besseli(1, z) / 2 - mp.struvel(1, z)


def test_spot_values():
    assert bessel_i1(0.0) == 0.0
    assert bessel_i1(1.0) == pytest.approx(0.565159, abs=1e-6)
    assert bessel_i1(2.0) == pytest.approx(1.590637, abs=1e-6)
    assert struve_l1(0.0) == 0.0
    assert struve_l1(1.0) == pytest.approx(0.226764, abs=1e-6)
    assert ap_kernel(0.0) == 0.0


@pytest.mark.parametrize("x", GRID)
def test_bessel_against_mpmath(x):
    for fn, nu in ((bessel_i0, 0), (bessel_i1, 1), (bessel_i2, 2)):
        assert rel(fn(x), float(mp.besseli(nu, x))) <= 1e-10


@pytest.mark.parametrize("x", GRID)
def test_struve_against_mpmath(x):
    assert rel(struve_l1(x), float(mp.struvel(1, x))) <= 1e-10


def test_struve_small_argument():
    for x in (1e-6, 1e-4, 1e-3):
        assert struve_l1(x) == pytest.approx(2 * x * x / (3 * math.pi), rel=1e-5)


@pytest.mark.parametrize("x", [1e-5, 0.01, 0.3, 1.0, 2.0, 5.0, 7.9, 8.1, 20.0, 50.0])
def test_ap_kernel_against_mpmath(x):
    assert rel(ap_kernel(x), float(mp_kernel(x))) <= 1e-10


def test_ap_kernel_composed_at_one():
    expected = math.pi / 4 - bessel_i1(math.pi) / 2 - struve_l1(math.pi)
    assert ap_kernel(1.0) == pytest.approx(expected, rel=1e-13)


def test_ap_kernel_small_x_behaviour():
    for x in (1e-6, 1e-4):
        assert ap_kernel(x) == pytest.approx(-2 * math.pi * x * x / 3, rel=1e-6)


def test_branch_agreement_at_crossover():
    # both representations at the same argument, just above and below the switch
    for z in (CROSSOVER - 1e-6, CROSSOVER, CROSSOVER + 1e-6):
        x = z / math.pi
        a, b = _ap_kernel_series(x), _ap_kernel_asymptotic(x)
        assert abs(a - b) <= 1e-9 * abs(b)


def test_weighted_kernel_decays_and_is_finite():
    xs = np.linspace(0, 50, 501)
    vals = [ap_kernel_weighted(x) for x in xs]
    assert all(math.isfinite(v) for v in vals)
    assert abs(ap_kernel_weighted(50.0)) < 1e-60
    for x in (0.2, 1.0, 3.0, 7.0):
        ref = mp_kernel(x) / mp.expm1(2 * mp.pi * x)
        assert rel(ap_kernel_weighted(x), float(ref)) <= 1e-10


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_i1(-1.0)
    with pytest.raises(OverflowError):
        bessel_i1(OVERFLOW_ARGUMENT + 1)
    with pytest.raises(OverflowError):
        struve_l1(OVERFLOW_ARGUMENT + 1)
    with pytest.raises(ValueError):
        ap_kernel(-0.1)


def test_full_output_reports_error():
    res = bessel_i1(3.0, full_output=True)
    assert res.value == bessel_i1(3.0)
    assert 0 < res.est_rel_err < 1e-12


@hsettings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 200.0))
def test_recurrence(x):
    lhs = bessel_i0(x) - bessel_i2(x)
    rhs = 2 * bessel_i1(x) / x
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
