r"""Casimir force in a freely streaming photon gas released at ``t = 0``.

With all lengths in units of the plate separation ``a`` and ``t`` meaning
``t / a``, the dimensionless energy variation is

.. math:: \Delta\mathcal E(t) = \frac{1}{2\pi}
          \Big(\sum_{n=-\infty}^{\infty} - \int dn\Big)\, g(n, t),

.. math:: g(n, t) = \int_0^\infty dp \int_0^1 dz\; p\,\epsilon\,
          e^{-\sqrt{p^2 t^2 + (\epsilon z - n\pi t)^2}},
          \qquad \epsilon = \sqrt{p^2 + n^2\pi^2},

and the force ratio is ``R = 1 - (240/pi^2) (3 dE + t dE/dt)``.

For the quadrature, substitute ``z = z0 + (p t / eps) sinh w`` with
``z0 = n pi t / eps`` and ``q = p t``. The square root becomes
``q cosh w`` and

.. math:: g = t^{-2} \int_0^\infty dq\, q^2 \int_{w_0(q)}^{w_1(q)}
          \cosh w\, e^{-q\cosh w}\, dw,

with ``w0 = asinh(-m/q)``, ``w1 = asinh((sqrt(q^2 + m^2)/t - m)/q)`` and
``m = n pi t``. The kink of the original z-integrand sits at ``w = 0`` and
no longer needs special treatment, so a fixed tensor Gauss-Legendre rule
evaluates ``g`` for a whole vector of ``n`` at once.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .modesum import ModeFunction, abel_plana_diff, sum_minus_integral_bilateral
from .numerics import (
    NONEQUILIBRIUM_SETTINGS,
    DivergentTailError,
    Estimate,
    QuadSettings,
    integrate_2d,
    integrate_semi_infinite,
)
from .specfun import ap_kernel_weighted

__all__ = [
    "SMALL_T",
    "NoneqPoint",
    "inner_integral",
    "delta_E",
    "delta_E_zero",
    "delta_E_zero_struve",
    "ratio_noneq",
    "derivative_step",
    "noneq_curve",
]

SMALL_T = 0.05
_FORCE_FACTOR = 240.0 / math.pi**2

# tensor Gauss-Legendre rule for the fast route; q = L u / (1 - u)
_GL_ORDER = 64
_Q_SCALE = 2.0


@lru_cache(maxsize=4)
def _gl_rule(order):
    x, w = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (x + 1.0)
    q = _Q_SCALE * u / (1.0 - u)
    dq = _Q_SCALE / (1.0 - u) ** 2 * 0.5 * w
    return q, dq, x, w


@dataclass(frozen=True)
class NoneqPoint:
    """One sample of the non-equilibrium curve.

    ``R`` is computed from the other stored fields, so
    ``R == 1 - (240/pi^2) (3 delta_E_script + dDelta t_over_a)`` holds exactly.
    """

    t_over_a: float
    delta_E_script: float
    dDelta: float
    R: float
    err: float = 0.0

    @classmethod
    def build(cls, t, dE, dD, err=0.0):
        return cls(t, dE, dD, _ratio_from(t, dE, dD), err)


def _ratio_from(t, dE, dD):
    return 1.0 - _FORCE_FACTOR * (3.0 * dE + dD * t)


def _check_t(t):
    t = float(t)
    if not t > 0:
        raise DivergentTailError(
            f"the mode integral diverges for t/a <= 0 (got {t}); use delta_E_zero")
    return t


def _inner_fast(n, t, order=_GL_ORDER):
    n = np.atleast_1d(np.asarray(n, dtype=float))
    q, dq, xw, ww = _gl_rule(order)
    qq = q[None, :, None]
    m = (n * math.pi * t)[:, None, None]
    w0 = np.arcsinh(-m / qq)
    w1 = np.arcsinh((np.sqrt(qq * qq + m * m) / t - m) / qq)
    half = 0.5 * (w1 - w0)
    w = half * xw[None, None, :] + 0.5 * (w1 + w0)
    c = np.cosh(w)
    with np.errstate(under="ignore"):
        inner = np.sum(ww * c * np.exp(-qq * c), axis=2) * half[..., 0]
    return inner @ (dq * q * q) / t**2


def _inner_adaptive(n, t, settings):
    eps_of = lambda p: math.hypot(p, n * math.pi)

    def f(p, z):
        eps = eps_of(p)
        return p * eps * math.exp(-math.hypot(p * t, eps * z - n * math.pi * t))

    def kink(p):
        eps = eps_of(p)
        if eps == 0:
            return ()
        z0 = n * math.pi * t / eps
        return (z0,) if 0 < z0 < 1 else ()

    return integrate_2d(f, (0.0, math.inf), (0.0, 1.0), settings, y_points=kink)


def inner_integral(n, t_over_a: float,
                   settings: QuadSettings = NONEQUILIBRIUM_SETTINGS,
                   method: str = "fast"):
    """Double momentum integral ``g(n, t)`` at real mode index ``n``.

    Parameters
    ----------
    n : float or array_like
        Mode index; arrays are accepted by the fast route.
    t_over_a : float
        Scaled time, must be positive.
    method : {"fast", "adaptive"}
        ``"fast"`` uses the fixed 64 x 64 rule after the hyperbolic
        substitution (about 1e-12 relative). ``"adaptive"`` integrates the
        original form with nested adaptive quadrature at ``settings`` and is
        kept as an independent check; it accepts scalar ``n`` only.

    Raises
    ------
    DivergentTailError
        If ``t_over_a <= 0``.
    """
    t = _check_t(t_over_a)
    if method == "fast":
        out = _inner_fast(n, t)
        return float(out[0]) if np.ndim(n) == 0 else out
    if method == "adaptive":
        return _inner_adaptive(float(n), t, settings).value
    raise ValueError(f"unknown method {method!r}")


def delta_E(t_over_a: float, settings: QuadSettings = NONEQUILIBRIUM_SETTINGS) -> Estimate:
    """Regularized energy variation at positive ``t / a``.

    The error combines the truncation change of the mode sum and the
    accumulated cell quadrature error.
    """
    t = _check_t(t_over_a)
    g = ModeFunction(lambda n: _inner_fast(n, t), parity="none", kinks=(0.0,))
    res = sum_minus_integral_bilateral(g, settings)
    scale = 1.0 / (2.0 * math.pi)
    return Estimate(res.value * scale, (res.tail_error + res.quad_error) * scale,
                    max(res.n_truncation, 1))


def _zero_kernel(y):
    y = np.asarray(y, dtype=float)
    return 2.0 * np.sin(np.pi * y) - 2.0 * np.pi * y * np.cos(np.pi * y)


def delta_E_zero(settings: QuadSettings = QuadSettings(abs_tol=1e-13, rel_tol=1e-11)) -> Estimate:
    r"""Closed form of the ``t -> 0+`` limit of :func:`delta_E`.

    As ``t -> 0`` the time-rescaled integrand reduces to
    ``h(n) = (1 + pi |n|) exp(-pi |n|)``, and

    .. math:: \Delta\mathcal E(0) = -\frac{1}{2\pi}
              \Big(\sum_{-\infty}^{\infty} - \int\Big) h(n).

    The half-line difference follows from Abel-Plana with the kernel
    ``i[h(iy) - h(-iy)] = 2 sin(pi y) - 2 pi y cos(pi y)``, so
    ``Delta E(0) = -(1/pi) int_0^inf K(y) / (exp(2 pi y) - 1) dy``.
    """
    half = abel_plana_diff(_zero_kernel, 1.0, settings)
    bilateral = 2.0 * half.value - 1.0
    return Estimate(-bilateral / (2.0 * math.pi), half.error / math.pi,
                    half.evaluations, half.converged)


def delta_E_zero_struve(settings: QuadSettings = QuadSettings(abs_tol=1e-13, rel_tol=1e-11)) -> Estimate:
    r"""``-2 pi int_0^inf [pi x^2/4 - x I_1(pi x)/2 - L_1(pi x)] / (e^{2 pi x} - 1) dx``.

    A Bessel-Struve representation of the ``t = 0`` energy variation. It
    evaluates to about ``+0.1775`` and does not agree with the direct
    ``t -> 0+`` limit (:func:`delta_E_zero`); it is kept for comparison and
    not used by :func:`ratio_noneq`.
    """
    res = integrate_semi_infinite(ap_kernel_weighted, 0.0, settings)
    return Estimate(-2.0 * math.pi * res.value, 2.0 * math.pi * res.error,
                    res.evaluations, res.converged)


def derivative_step(t_over_a: float) -> float:
    """Base step for ``d(Delta E)/dt``: ``max(0.01, 0.02 t)``."""
    return max(0.01, 0.02 * t_over_a)


def _stencil(t):
    h = derivative_step(t)
    return (t - h, t + h, t - h / 2, t + h / 2)


def _derivative_from(values, t):
    """2-level Richardson from the values at ``_stencil(t)``."""
    h = derivative_step(t)
    lo, hi, lo2, hi2 = values
    d1 = (hi.value - lo.value) / (2 * h)
    d2 = (hi2.value - lo2.value) / h
    der = (4 * d2 - d1) / 3
    noise = (4 * (hi2.error + lo2.error) / h + (hi.error + lo.error) / (2 * h)) / 3
    return der, abs(d2 - der) + noise


def ratio_noneq(t_over_a: float, settings: QuadSettings = NONEQUILIBRIUM_SETTINGS) -> NoneqPoint:
    """Force ratio at one time.

    ``t = 0`` uses :func:`delta_E_zero` and drops the derivative term,
    whose weight vanishes. For ``0 < t < SMALL_T`` the same value is
    reported with a :class:`RuntimeWarning`.
    """
    t = float(t_over_a)
    if not t >= 0:
        raise ValueError(f"t/a must be >= 0, got {t}")
    if t < SMALL_T:
        if t > 0:
            warnings.warn(f"t/a = {t} < {SMALL_T}: reporting the t = 0 limit",
                          RuntimeWarning, stacklevel=2)
        e0 = delta_E_zero()
        return NoneqPoint.build(t, e0.value, 0.0, _FORCE_FACTOR * 3 * e0.error)
    centre = delta_E(t, settings)
    der, der_err = _derivative_from([delta_E(s, settings) for s in _stencil(t)], t)
    err = _FORCE_FACTOR * (3 * centre.error + t * der_err)
    return NoneqPoint.build(t, centre.value, der, err)


def _delta_E_task(args):
    t, settings = args
    return delta_E(t, settings)


def _resolve_workers(workers):
    if workers is None:
        workers = int(os.environ.get("CASIMIR_WORKERS", "1"))
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def noneq_curve(t_min: float, t_max: float, samples: int,
                settings: QuadSettings = NONEQUILIBRIUM_SETTINGS,
                workers: int | None = None) -> list[NoneqPoint]:
    """Force ratio on a uniform grid of ``t / a``.

    Every abscissa needed by the centre values and derivative stencils is
    collected into one sorted set, evaluated once (optionally across
    ``workers`` processes; default from ``CASIMIR_WORKERS``, else 1) and
    the points are assembled in grid order, so the output does not depend
    on the worker count.
    """
    t_min, t_max = float(t_min), float(t_max)
    if not 0 <= t_min < t_max:
        raise ValueError("need 0 <= t_min < t_max")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    workers = _resolve_workers(workers)
    grid = np.linspace(t_min, t_max, int(samples)).tolist()
    needed = set()
    for t in grid:
        if t >= SMALL_T:
            needed.add(t)
            needed.update(_stencil(t))
    abscissae = sorted(needed)
    tasks = [(t, settings) for t in abscissae]
    if workers == 1 or len(tasks) < 2:
        results = list(map(_delta_E_task, tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_delta_E_task, tasks))
    table = dict(zip(abscissae, results))

    points = []
    e0 = None
    for t in grid:
        if t < SMALL_T:
            if e0 is None:
                e0 = delta_E_zero()
            if t > 0:
                warnings.warn(f"t/a = {t} < {SMALL_T}: reporting the t = 0 limit",
                              RuntimeWarning, stacklevel=2)
            points.append(NoneqPoint.build(t, e0.value, 0.0, _FORCE_FACTOR * 3 * e0.error))
            continue
        centre = table[t]
        der, der_err = _derivative_from([table[s] for s in _stencil(t)], t)
        err = _FORCE_FACTOR * (3 * centre.error + t * der_err)
        points.append(NoneqPoint.build(t, centre.value, der, err))
    return points
