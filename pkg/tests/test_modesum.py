import math
import time

import mpmath as mp
import numpy as np
import pytest

from casimirkt.modesum import (
    ModeFunction,
    RegularizationError,
    abel_plana_diff,
    sum_minus_integral_bilateral,
    sum_minus_integral_halfline,
    vacuum_energy_variation,
    vacuum_force,
)
from casimirkt.numerics import QuadSettings

TIGHT = QuadSettings(abs_tol=1e-13, rel_tol=1e-11)


def test_constant_and_linear_vanish():
    for g in (lambda n: np.full_like(n, 2.5), lambda n: 3.0 * n - 1.0):
        res = sum_minus_integral_bilateral(ModeFunction(g))
        assert abs(res.value) < 1e-12


def test_gaussian_bilateral():
    oracle = float(mp.nsum(lambda n: mp.exp(-n**2), [-mp.inf, mp.inf]) - mp.sqrt(mp.pi))
    assert oracle == pytest.approx(1.8310e-4, rel=2e-3)
    res = sum_minus_integral_bilateral(ModeFunction(lambda n: np.exp(-n * n)), TIGHT)
    assert res.value == pytest.approx(oracle, rel=1e-9)


def test_even_parity_path_matches_generic():
    g = lambda n: np.exp(-0.3 * n * n) * np.cos(n)
    generic = sum_minus_integral_bilateral(ModeFunction(g), TIGHT).value
    even = sum_minus_integral_bilateral(ModeFunction(g, parity="even"), TIGHT).value
    assert even == pytest.approx(generic, abs=1e-11)


def test_odd_parity_is_zero():
    assert sum_minus_integral_bilateral(ModeFunction(lambda n: n**3, parity="odd")).value == 0.0


def test_halfline_geometric():
    res = sum_minus_integral_halfline(ModeFunction(lambda n: np.exp(-n)), TIGHT)
    assert res.value == pytest.approx(1 / (1 - math.exp(-1)) - 1, rel=1e-10)


def test_halfline_zero():
    assert sum_minus_integral_halfline(ModeFunction(lambda n: np.zeros_like(n))).value == 0.0


def test_halfline_bose_cubic_two_ways():
    g = lambda n: np.where(n > 0, n**3 / np.expm1(np.maximum(n, 1e-300)), 0.0)
    direct = math.fsum(k**3 / math.expm1(k) for k in range(1, 200)) - math.pi**4 / 15
    res = sum_minus_integral_halfline(ModeFunction(g), TIGHT)
    assert res.value == pytest.approx(direct, abs=1e-8)


def test_kinked_function():
    # |n| exp(-n^2): kink at 0 handled by the adaptive central cell
    g = ModeFunction(lambda n: np.abs(n) * np.exp(-n * n), kinks=(0.0,))
    oracle = float(2 * mp.nsum(lambda n: n * mp.exp(-n**2), [1, mp.inf]) - 1)
    assert sum_minus_integral_bilateral(g, TIGHT).value == pytest.approx(oracle, abs=1e-10)


def test_non_decaying_cells_raise():
    with pytest.raises(RegularizationError):
        sum_minus_integral_bilateral(ModeFunction(lambda n: n * n))


def test_abel_plana_zero_kernel():
    assert abel_plana_diff(lambda y: 0.0 * y, 0.0).value == 0.0


def test_abel_plana_cubic():
    res = abel_plana_diff(lambda y: 2 * y**3, 0.0, TIGHT)
    assert res.value == pytest.approx(1 / 120, abs=1e-12)


def test_abel_plana_matches_cell_pairing():
    # (1 + n) exp(-n): kernel i[g(iy) - g(-iy)] = 2 sin y - 2 y cos y
    g = ModeFunction(lambda n: (1 + n) * np.exp(-n))
    cells = sum_minus_integral_halfline(g, TIGHT).value
    ap = abel_plana_diff(lambda y: 2 * np.sin(y) - 2 * y * np.cos(y), 1.0, TIGHT).value
    assert cells == pytest.approx(ap, abs=1e-10)


def test_vacuum():
    t0 = time.perf_counter()
    value = vacuum_energy_variation()
    assert time.perf_counter() - t0 < 1.0
    assert value == pytest.approx(-math.pi**2 / 720, abs=1e-12)
    assert vacuum_force() == pytest.approx(-math.pi**2 / 240, abs=1e-12)
    assert f"{vacuum_force():.7f}" == "-0.0411234"
    assert vacuum_force(2.0) == pytest.approx(vacuum_force() / 16)


def test_mode_function_validates_parity():
    with pytest.raises(ValueError):
        ModeFunction(lambda n: n, parity="sideways")
