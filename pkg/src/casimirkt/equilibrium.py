r"""Casimir force between ideal plates immersed in an equilibrium photon gas.

Everything depends on the single combination ``x = aT``. The force ratio
to the vacuum value is

.. math:: R(x) = 1 + 240 \sum_{n \ge 1} \frac{n^3}{e^{n\pi/x} - 1} - 16 x^4 .

For ``x > 1`` the two large terms cancel, and the ratio is evaluated through
the modular transformation of the Eisenstein series ``E_4``,

.. math:: R(x) = 3840\, x^4 \sum_{m \ge 1} \frac{m^3}{e^{4\pi m x} - 1},

which is free of cancellation and converges faster the larger ``x`` gets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import EQUILIBRIUM_SETTINGS, Estimate, QuadSettings, integrate_semi_infinite

__all__ = [
    "VACUUM_FORCE_A4",
    "EquilibriumPoint",
    "thermal_force",
    "ratio_eq",
    "force_ratio",
    "energy_density",
    "eq_curve",
]

VACUUM_FORCE_A4 = -math.pi**2 / 240.0

# above this aT the direct series cancels too much and the dual sum takes over
_DIRECT_LIMIT_RATIO = 1.0
_DIRECT_LIMIT_FORCE = 50.0


@dataclass(frozen=True)
class EquilibriumPoint:
    aT: float
    R: float
    F_T_a4: float

    def __post_init__(self):
        if self.aT < 0:
            raise ValueError("aT must be >= 0")


def _bose_cubic_sum(beta: float) -> float:
    """``sum_{n>=1} n^3 / (exp(n beta) - 1)``, stopping at relative term size 1e-17."""
    terms = []
    total = 0.0
    n = 0
    while True:
        n += 1
        arg = n * beta
        if arg > 700.0:  # remaining terms are below e^-700
            break
        term = n**3 / math.expm1(arg)
        terms.append(term)
        total += term
        # terms rise until n beta ~ 3, so only stop on the decaying side
        if arg > 3.0 and term < 1e-17 * total:
            break
    return math.fsum(terms)


def _check_aT(aT):
    aT = float(aT)
    if not aT >= 0:
        raise ValueError(f"aT must be >= 0, got {aT}")
    return aT


def thermal_force(aT: float) -> float:
    """Thermal part of the force per area, ``F_T a^4``.

    ``pi^2 x^4 / 15 - pi^2 sum n^3 / (exp(n pi / x) - 1)`` with ``x = aT``,
    summed directly for ``x <= 50`` and from the dual series beyond.
    """
    x = _check_aT(aT)
    if x == 0:
        return 0.0
    if x <= _DIRECT_LIMIT_FORCE:
        return math.pi**2 * x**4 / 15.0 - math.pi**2 * _bose_cubic_sum(math.pi / x)
    return VACUUM_FORCE_A4 * (_ratio_dual(x) - 1.0)


def _ratio_dual(x):
    return 3840.0 * x**4 * _bose_cubic_sum(4.0 * math.pi * x)


def ratio_eq(aT: float) -> float:
    """Ratio ``R(aT)`` of the equilibrium force to the vacuum force.

    Examples
    --------
    >>> ratio_eq(0.0)
    1.0
    >>> round(ratio_eq(0.25), 8)
    0.93833699
    """
    x = _check_aT(aT)
    if x == 0:
        return 1.0
    if x <= _DIRECT_LIMIT_RATIO:
        return 1.0 + 240.0 * _bose_cubic_sum(math.pi / x) - 16.0 * x**4
    return _ratio_dual(x)


def force_ratio(a: float, T: float) -> float:
    """``R`` for plate separation ``a`` and temperature ``T``; only ``a * T`` matters."""
    if a <= 0:
        raise ValueError("plate separation must be positive")
    if T < 0:
        raise ValueError("temperature must be >= 0")
    return ratio_eq(a * T)


def energy_density(T: float, settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                   full_output: bool = False):
    """Photon energy density ``2 int d^3p / (2 pi)^3 eps f`` by radial quadrature.

    Two polarizations and isotropy reduce it to
    ``(1 / pi^2) int_0^inf eps^3 / (exp(eps / T) - 1) d eps``.
    """
    T = float(T)
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")

    def integrand(e):
        e = np.asarray(e, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            val = e**3 / np.expm1(e / T)
        return np.where(e > 0, val, 0.0)

    res = integrate_semi_infinite(integrand, 0.0, settings, scale=T)
    est = Estimate(res.value / math.pi**2, res.error / math.pi**2,
                   res.evaluations, res.converged)
    return est if full_output else est.value


def eq_curve(aT_min: float, aT_max: float, samples: int) -> list[EquilibriumPoint]:
    """Ratio sampled on a uniform grid, in increasing ``aT``.

    ``aT_min == aT_max`` gives a single point.
    """
    aT_min, aT_max = _check_aT(aT_min), _check_aT(aT_max)
    if aT_min == aT_max:
        grid = [aT_min]
    else:
        if aT_min > aT_max:
            raise ValueError("need aT_min < aT_max")
        if samples < 2:
            raise ValueError("need at least 2 samples")
        grid = np.linspace(aT_min, aT_max, int(samples)).tolist()
    return [EquilibriumPoint(x, ratio_eq(x), thermal_force(x)) for x in grid]
