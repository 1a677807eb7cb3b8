r"""Modified Bessel and Struve functions of low order.

Ascending power series are used up to :data:`CROSSOVER` (in the argument
``z``); above it, ``I_nu`` comes from its Hankel expansion and the Struve
function from the asymptotic expansion of the difference

.. math:: \mathbf{L}_1(z) - I_1(z) \sim \frac{1}{\pi}\sum_k (-1)^{k+1}
          \frac{\Gamma(k+1/2)}{\Gamma(3/2-k)} \left(\frac{z}{2}\right)^{-2k},

which stays O(1) while both functions grow like ``e^z``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

__all__ = [
    "SpecfunResult",
    "CROSSOVER",
    "OVERFLOW_ARGUMENT",
    "bessel_i0",
    "bessel_i1",
    "bessel_i2",
    "struve_l1",
    "ap_kernel",
    "ap_kernel_weighted",
]

CROSSOVER = 25.0
OVERFLOW_ARGUMENT = 700.0
_EPS = 2.220446049250313e-16


class SpecfunResult(NamedTuple):
    value: float
    est_rel_err: float


def _check_arg(x):
    x = float(x)
    if not x >= 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    if x > OVERFLOW_ARGUMENT:
        raise OverflowError(
            f"argument {x} beyond {OVERFLOW_ARGUMENT}; use the scaled forms")
    return x


def _i_series(nu, z):
    """sum_k (z/2)^(2k+nu) / (k! (k+nu)!), terms generated by ratio."""
    half = 0.5 * z
    term = half**nu / math.factorial(nu)
    total = term
    q = half * half
    k = 0
    while term > _EPS * 0.25 * total:
        k += 1
        term *= q / (k * (k + nu))
        total += term
    return SpecfunResult(total, (k + 2) * _EPS)


def _i_scaled_asymptotic(nu, z):
    """e^{-z} I_nu(z) from the Hankel expansion; valid for z >= CROSSOVER."""
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if abs(nxt) >= abs(term) or abs(nxt) < _EPS * abs(total):
            break
        term = nxt
        total += term
    return SpecfunResult(total / math.sqrt(2.0 * math.pi * z),
                         max(abs(nxt / total), 4 * _EPS))


def _i_result(nu, x):
    if x <= CROSSOVER:
        return _i_series(nu, x)
    s = _i_scaled_asymptotic(nu, x)
    return SpecfunResult(s.value * math.exp(x), s.est_rel_err + 2 * _EPS)


def bessel_i0(x: float) -> float:
    """Modified Bessel function I_0(x) for x >= 0."""
    return _i_result(0, _check_arg(x)).value


def bessel_i1(x: float, full_output: bool = False):
    """Modified Bessel function of the first kind, I_1(x), for x >= 0.

    Parameters
    ----------
    x : float
        Argument, ``0 <= x <= OVERFLOW_ARGUMENT``.
    full_output : bool
        Return a :class:`SpecfunResult` with the truncation estimate instead
        of a bare float.

    Raises
    ------
    OverflowError
        If ``x`` exceeds :data:`OVERFLOW_ARGUMENT`.
    """
    res = _i_result(1, _check_arg(x))
    return res if full_output else res.value


def bessel_i2(x: float) -> float:
    """Modified Bessel function I_2(x) for x >= 0."""
    return _i_result(2, _check_arg(x)).value


def _l1_series(z):
    # (z/2)^(2k+2) / (Gamma(k+3/2) Gamma(k+5/2)); leading term 2 z^2 / (3 pi)
    q = 0.25 * z * z
    term = 2.0 * z * z / (3.0 * math.pi)
    total = term
    k = 0
    while term > _EPS * 0.25 * total:
        term *= q / ((k + 1.5) * (k + 2.5))
        total += term
        k += 1
    return SpecfunResult(total, (k + 2) * _EPS)


def _l1_minus_i1(z):
    """Asymptotic L_1(z) - I_1(z), truncated at its smallest term."""
    zz = z * z
    term = -2.0
    total = term
    k = 0
    while True:
        nxt = term * (4 * k * k - 1) / zz
        k += 1
        if abs(nxt) >= abs(term) or abs(nxt) < _EPS * abs(total):
            break
        term = nxt
        total += term
    return total / math.pi, abs(nxt) / math.pi


def struve_l1(x: float, full_output: bool = False):
    """Modified Struve function L_1(x) for x >= 0.

    Raises
    ------
    OverflowError
        If ``x`` exceeds :data:`OVERFLOW_ARGUMENT`.
    """
    x = _check_arg(x)
    if x == 0:
        res = SpecfunResult(0.0, 0.0)
    elif x <= CROSSOVER:
        res = _l1_series(x)
    else:
        i1 = _i_result(1, x)
        d, d_err = _l1_minus_i1(x)
        value = i1.value + d
        res = SpecfunResult(value, i1.est_rel_err + (d_err + _EPS * abs(d)) / value)
    return res if full_output else res.value


def ap_kernel(x: float) -> float:
    r"""Bracketed combination :math:`\pi x^2/4 - x I_1(\pi x)/2 - \mathbf{L}_1(\pi x)`.

    Below the crossover the cancelling ``pi x^2 / 4`` is removed analytically
    from the I_1 series, so small ``x`` keeps full relative accuracy; the
    kernel behaves as ``-2 pi x^2 / 3`` near the origin.
    """
    x = float(x)
    if not x >= 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    z = math.pi * x
    _check_arg(z)
    if z == 0:
        return 0.0
    if z <= CROSSOVER:
        return _ap_kernel_series(x)
    return _ap_kernel_asymptotic(x)


def _ap_kernel_series(x):
    z = math.pi * x
    tail = _i_series(1, z).value - 0.5 * z
    return -0.5 * x * tail - _l1_series(z).value


def _ap_kernel_asymptotic(x):
    z = math.pi * x
    i1 = math.exp(z) * _i_scaled_asymptotic(1, z).value
    d, _ = _l1_minus_i1(z)
    return 0.25 * math.pi * x * x - (0.5 * x + 1.0) * i1 - d


def ap_kernel_weighted(x: float) -> float:
    """``ap_kernel(x) / (exp(2 pi x) - 1)``, finite for every ``x >= 0``.

    Large arguments use the scaled Bessel expansion so that neither the
    kernel nor the Bose factor overflows; the limit at ``x = 0`` is 0.
    """
    x = float(x)
    if not x >= 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    z = math.pi * x
    if z == 0:
        return 0.0
    if z <= CROSSOVER:
        return ap_kernel(x) / math.expm1(2.0 * z)
    e2 = math.exp(-2.0 * z)
    bose = e2 / (1.0 - e2)
    i1e = _i_scaled_asymptotic(1, z).value
    d, _ = _l1_minus_i1(z)
    growing = (0.5 * x + 1.0) * i1e * math.exp(-z) / (1.0 - e2)
    return (0.25 * math.pi * x * x - d) * bose - growing
