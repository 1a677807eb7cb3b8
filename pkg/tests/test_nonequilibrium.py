import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate as sp_integrate

from casimirkt.nonequilibrium import (
    SMALL_T,
    NoneqPoint,
    delta_E,
    delta_E_zero,
    delta_E_zero_struve,
    inner_integral,
    noneq_curve,
    ratio_noneq,
)
from casimirkt.numerics import DivergentTailError, QuadSettings

# cell-pairing sum of a scipy brute-force double integral, with the central
# cell split at n = 0 (computed once and frozen)
DELTA_E_AT_2 = 0.0023519312


def brute_inner(n, t):
    def along_z(p):
        eps = math.hypot(p, n * math.pi)
        z0 = n * math.pi * t / eps if eps else 0.0
        pts = [z0] if 0 < z0 < 1 else None
        f = lambda z: p * eps * math.exp(-math.hypot(p * t, eps * z - n * math.pi * t))
        return sp_integrate.quad(f, 0, 1, points=pts, epsabs=1e-13, epsrel=1e-12, limit=200)[0]

    return sp_integrate.quad(along_z, 0, np.inf, epsabs=1e-11, epsrel=1e-10, limit=400)[0]


def test_inner_integral_closed_form():
    assert inner_integral(0.0, 1.0) == pytest.approx(math.sqrt(2), rel=1e-12)


@pytest.mark.parametrize("n, t", [(0.0, 0.3), (1.0, 0.5), (-2.0, 0.5), (0.4, 1.0),
                                  (-0.7, 2.0), (3.0, 4.0), (6.0, 0.2)])
def test_inner_integral_against_scipy(n, t):
    assert inner_integral(n, t) == pytest.approx(brute_inner(n, t), rel=1e-9)


def test_fast_and_adaptive_routes_agree():
    s = QuadSettings(abs_tol=1e-9, rel_tol=1e-8)
    for n, t in [(0.5, 0.7), (-1.0, 1.3)]:
        assert inner_integral(n, t, s, method="adaptive") == \
            pytest.approx(inner_integral(n, t), rel=1e-6)


def test_inner_integral_properties():
    ns = np.linspace(-8, 8, 81)
    for t in (0.1, 0.5, 1.0, 3.0):
        assert np.all(inner_integral(ns, t) >= 0)
    for t in (0.5, 1.0):
        assert abs(inner_integral(1.0, t) - inner_integral(-1.0, t)) > 1e-3
    assert inner_integral(1.0, 200.0) < 1e-6 * inner_integral(1.0, 1.0)
    with pytest.raises(DivergentTailError):
        inner_integral(1.0, 0.0)
    with pytest.raises(ValueError):
        inner_integral(1.0, 1.0, method="simpson")


def test_delta_E_against_brute_force_value():
    res = delta_E(2.0)
    assert res.value == pytest.approx(DELTA_E_AT_2, abs=2e-9)
    assert res.error < 1e-6


def test_delta_E_zero_closed_form():
    # (sum - int) over all integers of (1 + pi|n|) exp(-pi|n|); the integral is 4/pi
    s = 1 + 2 * mp.nsum(lambda n: (1 + mp.pi * n) * mp.exp(-mp.pi * n), [1, mp.inf])
    oracle = float(-(s - 4 / mp.pi) / (2 * mp.pi))
    res = delta_E_zero()
    assert res.value == pytest.approx(oracle, abs=1e-12)
    assert res.value == pytest.approx(-0.0180949126, abs=1e-10)


def test_struve_form_value():
    f = lambda x: (mp.pi * x**2 / 4 - x * mp.besseli(1, mp.pi * x) / 2
                   - mp.struvel(1, mp.pi * x)) / mp.expm1(2 * mp.pi * x)
    oracle = float(-2 * mp.pi * mp.quad(f, [0, 1, 5, mp.inf]))
    assert delta_E_zero_struve().value == pytest.approx(oracle, rel=1e-9)


def test_small_time_approaches_closed_form():
    e0 = delta_E_zero().value
    gaps = [abs(delta_E(t).value - e0) for t in (0.2, 0.1, 0.05, 0.02)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 5e-5


def test_late_time_decay():
    assert abs(delta_E(40.0).value) < abs(delta_E(10.0).value) < abs(delta_E(2.0).value)


def test_ratio_identity_and_limits():
    p = ratio_noneq(1.5)
    assert p.R == 1 - (240 / math.pi**2) * (3 * p.delta_E_script + p.dDelta * p.t_over_a)
    zero = ratio_noneq(0.0)
    assert zero.dDelta == 0.0
    assert zero.R == pytest.approx(1 - 720 / math.pi**2 * delta_E_zero().value, abs=1e-14)
    assert abs(ratio_noneq(10.0).R - 1) < 0.01
    with pytest.raises(ValueError):
        ratio_noneq(-1.0)


def test_small_t_policy_warns():
    with pytest.warns(RuntimeWarning):
        p = ratio_noneq(SMALL_T / 2)
    assert p.delta_E_script == delta_E_zero().value


def test_derivative_against_finite_difference():
    t = 2.0
    h = 1e-3
    slope = (delta_E(t + h).value - delta_E(t - h).value) / (2 * h)
    assert ratio_noneq(t).dDelta == pytest.approx(slope, abs=1e-5)


def test_curve_deterministic_and_worker_independent():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        a = noneq_curve(0.0, 1.0, 3)
        b = noneq_curve(0.0, 1.0, 3)
        c = noneq_curve(0.0, 1.0, 3, workers=2)
    assert a == b == c
    assert a[0].R == ratio_noneq(0.0).R
    assert a[1] == ratio_noneq(0.5)
    for p in a:
        assert isinstance(p, NoneqPoint)
        assert p.R == 1 - (240 / math.pi**2) * (3 * p.delta_E_script + p.dDelta * p.t_over_a)


def test_curve_argument_checks():
    with pytest.raises(ValueError):
        noneq_curve(1.0, 0.5, 10)
    with pytest.raises(ValueError):
        noneq_curve(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        noneq_curve(0.0, 1.0, 3, workers=0)
