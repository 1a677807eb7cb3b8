r"""Regularized differences between discrete mode sums and their integrals.

Cavity modes sit at ``p_z = n pi / a``. The quantities of interest are
differences :math:`(\sum_n - \int dn)\, g(n)` in which the sum and the
integral may diverge separately. The default regularizer pairs every
integer ``n`` with its unit cell ``[n - 1/2, n + 1/2]``,

.. math:: d(n) = g(n) - \int_{n-1/2}^{n+1/2} g(\nu)\, d\nu,

and sums the cell differences, which only needs ``g`` on the real axis.
The truncated sum is completed with the leading Euler-Maclaurin tail
``[g'(N + 1/2) - g'(-N - 1/2)] / 24`` and ``N`` doubles until the result
settles. Abel-Plana is available for kernels that are known analytically
along the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .numerics import (
    EQUILIBRIUM_SETTINGS,
    Estimate,
    QuadSettings,
    _NODES,
    _WG15,
    _WK15,
    _vectorize,
    integrate_1d,
    integrate_semi_infinite,
)

__all__ = [
    "ModeFunction",
    "RegularizedDiff",
    "RegularizationError",
    "sum_minus_integral_bilateral",
    "sum_minus_integral_halfline",
    "abel_plana_diff",
    "vacuum_energy_variation",
    "vacuum_force",
]

N_START = 16
N_MAX = 2**15


class RegularizationError(ArithmeticError):
    """The cell differences do not decay, so the regularized sum is undefined."""


@dataclass(frozen=True)
class ModeFunction:
    """Summand ``g(n)`` of a mode sum, evaluable at real ``n``.

    Parameters
    ----------
    eval : callable
        ``g``; numpy-vectorized callables are evaluated a whole level at a
        time.
    parity : {"even", "odd", "none"}
        Known symmetry under ``n -> -n``.
    decay_hint : float, optional
        Scale in ``n`` beyond which ``g`` is smooth and slowly varying; the
        truncation starts above it.
    kinks : tuple of float
        Points where ``g`` is not smooth; cells containing one are integrated
        adaptively with the kink as a break point.
    """

    eval: Callable
    parity: Literal["even", "odd", "none"] = "none"
    decay_hint: float | None = None
    kinks: tuple = field(default=())

    def __post_init__(self):
        if self.parity not in ("even", "odd", "none"):
            raise ValueError(f"unknown parity {self.parity!r}")


@dataclass(frozen=True)
class RegularizedDiff:
    value: float
    tail_error: float
    n_truncation: int
    quad_error: float = 0.0

    def __post_init__(self):
        if not self.tail_error >= 0:
            raise ValueError("tail_error must be >= 0")

    def __float__(self):
        return float(self.value)


class _Cells:
    """Cell differences of one mode function, computed on demand and cached."""

    def __init__(self, g: ModeFunction, settings: QuadSettings):
        self.g = g
        self.fv = _vectorize(g.eval)
        self.settings = settings
        self.diff = {}
        self.qerr = {}

    def _kinked(self, lo, hi):
        return [k for k in self.g.kinks if lo <= k <= hi]

    def cell_integrals(self, lo_edges):
        """GK15 integrals over ``[e, e + 1]`` for each left edge ``e``."""
        lo_edges = np.asarray(lo_edges, dtype=float)
        x = (lo_edges[:, None] + 0.5) + 0.5 * _NODES[None, :]
        y = self.fv(x.ravel()).reshape(x.shape)
        if not np.all(np.isfinite(y)):
            raise FloatingPointError("mode function returned a non-finite value")
        k15 = 0.5 * (y @ _WK15)
        g7 = 0.5 * (y @ _WG15)
        return k15, np.abs(k15 - g7)

    def adaptive(self, lo, hi):
        res = integrate_1d(self.g.eval, lo, hi, self.settings.tighter(100),
                           points=self._kinked(lo, hi))
        return res.value, res.error

    def ensure(self, ns):
        todo = [n for n in ns if n not in self.diff]
        if not todo:
            return
        smooth = [n for n in todo if not self._kinked(n - 0.5, n + 0.5)]
        rough = [n for n in todo if n not in set(smooth)]
        vals = self.fv(np.asarray(todo, dtype=float))
        gval = dict(zip(todo, vals))
        if smooth:
            ints, errs = self.cell_integrals(np.asarray(smooth, dtype=float) - 0.5)
            for n, i, e in zip(smooth, ints, errs):
                self.diff[n] = gval[n] - i
                self.qerr[n] = e
        for n in rough:
            i, e = self.adaptive(n - 0.5, n + 0.5)
            self.diff[n] = gval[n] - i
            self.qerr[n] = e

    def slope(self, n_mid):
        """Centred estimate of g' at a half-integer."""
        lo, hi = self.fv(np.array([n_mid - 0.5, n_mid + 0.5]))
        return hi - lo


def _levels(g, settings):
    n = N_START
    if g.decay_hint is not None:
        while n < 4 * g.decay_hint and n < N_MAX:
            n *= 2
    growth = max(2, int(round(settings.tail_cutoff_growth)))
    while n <= N_MAX:
        yield n
        n *= growth


def _escalate(cells, settings, partial, tail, label):
    """Drive ``N`` up until successive truncations agree."""
    previous = None
    history = []
    for n in _levels(cells.g, settings):
        value, qerr = partial(n)
        corrected = value + tail(n)
        edge = max(abs(cells.diff.get(n, 0.0)), abs(cells.diff.get(-n, 0.0)))
        if previous is not None:
            change = abs(corrected - previous[1])
            target = settings.target(corrected)
            decaying = edge <= target or edge <= 0.5 * previous[2]
            history.append(edge)
            if change <= target and decaying:
                return RegularizedDiff(float(corrected), float(change), n, float(qerr))
            if len(history) >= 3 and min(history[-3:]) >= 0.5 * history[-3] \
                    and edge > target:
                raise RegularizationError(
                    f"{label}: cell differences stay at {edge:.3e} out to n={n}")
        previous = (n, corrected, edge)
    raise RegularizationError(f"{label}: no convergence up to n={N_MAX}")


def sum_minus_integral_bilateral(g: ModeFunction,
                                 settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                                 tail_correction: bool = True) -> RegularizedDiff:
    r"""Regularized :math:`(\sum_{n=-\infty}^{\infty} - \int_{-\infty}^{\infty} dn)\, g`.

    Raises
    ------
    RegularizationError
        If the outermost cell differences do not shrink as ``N`` grows.
    """
    if g.parity == "odd":
        return RegularizedDiff(0.0, 0.0, 0)
    if g.parity == "even":
        half = sum_minus_integral_halfline(g, settings, tail_correction)
        g0 = float(_vectorize(g.eval)(np.zeros(1))[0])
        return RegularizedDiff(2 * half.value - g0, 2 * half.tail_error,
                               half.n_truncation, 2 * half.quad_error)
    cells = _Cells(g, settings)

    def partial(n):
        ns = range(-n, n + 1)
        cells.ensure(ns)
        return (math.fsum(cells.diff[k] for k in ns),
                math.fsum(cells.qerr[k] for k in ns))

    def tail(n):
        if not tail_correction:
            return 0.0
        return (cells.slope(n + 0.5) - cells.slope(-n - 0.5)) / 24.0

    return _escalate(cells, settings, partial, tail, "bilateral mode sum")


def sum_minus_integral_halfline(g: ModeFunction,
                                settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                                tail_correction: bool = True) -> RegularizedDiff:
    r"""Regularized :math:`(\sum_{n=0}^{\infty} - \int_0^{\infty} dn)\, g`.

    The ``n = 0`` term carries full weight. The leading half cell
    ``[0, 1/2]`` is integrated on its own, then unit cells follow.
    """
    cells = _Cells(g, settings)
    fv = cells.fv
    g0 = float(fv(np.zeros(1))[0])
    if cells._kinked(0.0, 0.5):
        first, first_err = cells.adaptive(0.0, 0.5)
    else:
        x = 0.25 + 0.25 * _NODES
        y = fv(x)
        first = 0.25 * (_WK15 @ y)
        first_err = abs(first - 0.25 * (_WG15 @ y))
    head = g0 - first

    def partial(n):
        ns = range(1, n + 1)
        cells.ensure(ns)
        return (head + math.fsum(cells.diff[k] for k in ns),
                first_err + math.fsum(cells.qerr[k] for k in ns))

    def tail(n):
        return cells.slope(n + 0.5) / 24.0 if tail_correction else 0.0

    return _escalate(cells, settings, partial, tail, "half-line mode sum")


def abel_plana_diff(g_imag_kernel: Callable[[float], float], g0: float,
                    settings: QuadSettings = EQUILIBRIUM_SETTINGS) -> Estimate:
    r"""Abel-Plana form of :math:`(\sum_{n=0}^{\infty} - \int_0^{\infty} dn)\, g`.

    Parameters
    ----------
    g_imag_kernel : callable
        ``K(y) = i [g(iy) - g(-iy)]``, supplied by the caller.
    g0 : float
        ``g(0)``.

    Returns
    -------
    Estimate
        ``g0 / 2 + int_0^inf K(y) / (exp(2 pi y) - 1) dy``.
    """
    kv = _vectorize(g_imag_kernel)

    def weighted(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(over="ignore"):
            bose = 1.0 / np.expm1(2.0 * np.pi * y)
        return kv(y) * bose

    res = integrate_semi_infinite(weighted, 0.0, settings)
    return Estimate(0.5 * g0 + res.value, res.error, res.evaluations, res.converged)


_VACUUM_SETTINGS = QuadSettings(abs_tol=1e-14, rel_tol=1e-12)


def vacuum_energy_variation() -> float:
    """Dimensionless vacuum energy shift ``a^3 * Delta E_vac`` between ideal plates.

    With the zero-point occupation 1/2 each mode contributes
    ``(1/2pi) int_0^inf p eps dp``, whose ``n``-dependent finite part is
    ``-(n pi)^3 / 3``. The remaining ``(sum - int) n^3`` is taken by
    Abel-Plana (kernel ``2 y^3``), giving ``-pi^2 / 720``.
    """
    zeta_m3 = abel_plana_diff(lambda y: 2.0 * y**3, 0.0, _VACUUM_SETTINGS).value
    return -(math.pi**2 / 6.0) * zeta_m3


def vacuum_force(a: float = 1.0) -> float:
    """Vacuum Casimir force per unit area, ``-d(Delta E_vac / a^3)/da``."""
    if a <= 0:
        raise ValueError("plate separation must be positive")
    return 3.0 * vacuum_energy_variation() / a**4
