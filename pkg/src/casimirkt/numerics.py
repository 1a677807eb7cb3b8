"""Adaptive quadrature and numerical differentiation with error estimates.

All integrators accept either scalar or numpy-vectorized integrands; a
vectorized integrand is called once per Gauss-Kronrod panel, which is what
makes the nested integrals in :mod:`casimirkt.nonequilibrium` affordable.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadSettings",
    "Estimate",
    "DivergentTailError",
    "integrate_1d",
    "integrate_semi_infinite",
    "integrate_2d",
    "differentiate",
    "EQUILIBRIUM_SETTINGS",
    "NONEQUILIBRIUM_SETTINGS",
]

_EPS = np.finfo(float).eps
_MAX_PANELS = 4000

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# full 15-point node set on [-1, 1] and the matching weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[[9, 11, 13]] = _WG[2::-1]
_WG15[7] = _WG[3]


class DivergentTailError(ArithmeticError):
    """Raised when a semi-infinite integrand does not decay."""


@dataclass(frozen=True)
class QuadSettings:
    """Tolerances and limits shared by the integrators.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Target accuracy; an integral is accepted once the estimated error is
        below ``max(abs_tol, rel_tol * |value|)``.
    max_depth : int
        Maximum bisection depth of a single panel.
    tail_cutoff_growth : float
        Growth factor of successive cutoffs when a semi-infinite integral
        falls back to escalating truncation, and of the mode-sum truncation.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 1e-7
    max_depth: int = 40
    tail_cutoff_growth: float = 2.0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.tail_cutoff_growth <= 1:
            raise ValueError("tail_cutoff_growth must exceed 1")

    def tighter(self, factor: float = 10.0) -> "QuadSettings":
        return QuadSettings(self.abs_tol / factor, self.rel_tol / factor,
                            self.max_depth, self.tail_cutoff_growth)

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


EQUILIBRIUM_SETTINGS = QuadSettings(abs_tol=1e-9, rel_tol=1e-7)
NONEQUILIBRIUM_SETTINGS = QuadSettings(abs_tol=1e-6, rel_tol=1e-5)


@dataclass(frozen=True)
class Estimate:
    """A numerical result with its error estimate.

    ``converged`` is False when the requested tolerance was not met; ``value``
    then holds the best estimate available. ``one_sided`` marks derivatives
    taken with a forward stencil at a domain edge.
    """

    value: float
    error: float
    evaluations: int
    converged: bool = True
    one_sided: bool = False

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError(f"error estimate must be >= 0, got {self.error}")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")

    def __float__(self):
        return float(self.value)


def _vectorize(f):
    """Return a callable mapping a 1-d array to an array of f values."""
    state = {}

    def call(x):
        mode = state.get("mode")
        if mode is None:
            try:
                y = np.asarray(f(x), dtype=float)
                if y.shape == x.shape:
                    state["mode"] = "array"
                    return y
            except (TypeError, ValueError):
                pass
            state["mode"] = "scalar"
        elif mode == "array":
            return np.asarray(f(x), dtype=float)
        return np.array([float(f(float(xi))) for xi in x])

    return call


def _check_finite(y, x):
    bad = ~np.isfinite(y)
    if bad.any():
        i = int(np.argmax(bad))
        raise FloatingPointError(f"integrand returned {y[i]} at x={x[i]!r}")


def _gk15(fv, a, b):
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre + half * _NODES
    y = fv(x)
    _check_finite(y, x)
    resk = half * (_WK15 @ y)
    resg = half * (_WG15 @ y)
    resabs = abs(half) * (_WK15 @ np.abs(y))
    resasc = abs(half) * (_WK15 @ np.abs(y - resk / (b - a)))
    err = abs(resk - resg)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    return resk, err


def integrate_1d(f: Callable, lo: float, hi: float,
                 settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                 points: Sequence[float] = ()) -> Estimate:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature on ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Integrand; vectorized callables are detected and called per panel.
    lo, hi : float
        Finite limits with ``lo < hi``.
    settings : QuadSettings
    points : sequence of float
        Interior break points (kinks, cusps) used as initial panel edges.

    Returns
    -------
    Estimate
        ``converged`` is False if every remaining panel reached ``max_depth``
        or the panel budget ran out before the tolerance was met.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integrate_1d needs finite limits")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    fv = _vectorize(f)
    edges = [lo] + sorted(p for p in points if lo < p < hi) + [hi]
    heap = []
    total = err = 0.0
    evals = 0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _gk15(fv, a, b)
        evals += 15
        total += v
        err += e
        heapq.heappush(heap, (-e, a, b, v, 0))
    frozen = []
    while True:
        if err <= settings.target(total):
            converged = True
            break
        if not heap or len(heap) + len(frozen) >= _MAX_PANELS:
            converged = False
            break
        neg_e, a, b, v, depth = heapq.heappop(heap)
        if depth >= settings.max_depth:
            frozen.append((neg_e, a, b, v, depth))
            continue
        m = 0.5 * (a + b)
        v1, e1 = _gk15(fv, a, m)
        v2, e2 = _gk15(fv, m, b)
        evals += 30
        total += v1 + v2 - v
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, a, m, v1, depth + 1))
        heapq.heappush(heap, (-e2, m, b, v2, depth + 1))
    # re-sum to shed the drift of the running total
    total = math.fsum(h[3] for h in heap) + math.fsum(h[3] for h in frozen)
    err = math.fsum(-h[0] for h in heap) + math.fsum(-h[0] for h in frozen)
    return Estimate(total, err, evals, converged)


def integrate_semi_infinite(f: Callable, lo: float,
                            settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                            scale: float = 1.0) -> Estimate:
    """Integrate ``f`` over ``[lo, inf)``.

    The default route maps ``x = lo + scale * u / (1 - u)`` onto ``u in
    [0, 1)``. If that fails to converge (slow decay turns into an endpoint
    singularity at ``u = 1``) the integral is rebuilt from panels
    ``[lo + c_k, lo + c_{k+1}]`` with cutoffs growing by
    ``settings.tail_cutoff_growth`` until the panels become negligible.

    Raises
    ------
    DivergentTailError
        If the panel contributions stop shrinking.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    fv = _vectorize(f)

    def mapped(u):
        u = np.asarray(u, dtype=float)
        s = 1.0 - u
        with np.errstate(over="ignore", under="ignore"):
            return fv(lo + scale * u / s) * scale / (s * s)

    try:
        res = integrate_1d(mapped, 0.0, 1.0, settings)
        if res.converged:
            return res
    except FloatingPointError:
        pass
    return _escalating_truncation(fv, lo, settings, scale)


def _escalating_truncation(fv, lo, settings, scale):
    growth = settings.tail_cutoff_growth
    total, err, evals = 0.0, 0.0, 0
    converged = True
    cut_lo, cut_hi = 0.0, scale
    history = []
    for _ in range(400):
        piece = integrate_1d(fv, lo + cut_lo, lo + cut_hi, settings.tighter(4))
        total += piece.value
        err += piece.error
        evals += piece.evaluations
        converged &= piece.converged
        history.append(abs(piece.value))
        if len(history) > 3 and abs(piece.value) <= 0.25 * settings.target(total):
            return Estimate(total, err + abs(piece.value), evals, converged)
        if len(history) >= 8 and history[-1] >= 0.9 * history[-4] and history[-1] > 0:
            raise DivergentTailError(
                f"tail contributions are not shrinking past x={lo + cut_hi:g} "
                f"(last panel {history[-1]:.3e})")
        cut_lo, cut_hi = cut_hi, cut_hi * growth
        if not math.isfinite(lo + cut_hi):
            break
    raise DivergentTailError("semi-infinite integral did not settle before overflow")


def _domain_integral(f, domain, settings, points=()):
    lo, hi = domain
    if math.isinf(hi):
        return integrate_semi_infinite(f, lo, settings)
    return integrate_1d(f, lo, hi, settings, points=points)


def integrate_2d(f: Callable[[float, float], float],
                 x_domain: tuple[float, float], y_domain: tuple[float, float],
                 settings: QuadSettings = EQUILIBRIUM_SETTINGS,
                 y_points: Callable[[float], Sequence[float]] | None = None) -> Estimate:
    """Nested integral of ``f(x, y)``; ``y`` is the inner variable.

    Either domain may have ``hi = inf``. The inner integrals run at a tenth
    of the outer tolerance. ``y_points(x)`` optionally supplies inner break
    points for each outer abscissa (finite inner domains only).
    """
    inner_settings = settings.tighter(10)
    count = [0]
    inner_ok = [True]

    def outer(x):
        pts = y_points(x) if y_points is not None else ()
        r = _domain_integral(lambda y: f(x, y), y_domain, inner_settings, pts)
        count[0] += r.evaluations
        inner_ok[0] &= r.converged
        return r.value

    res = _domain_integral(outer, x_domain, settings)
    return Estimate(res.value, res.error, max(count[0], 1),
                    res.converged and inner_ok[0])


def differentiate(f: Callable[[float], float], x: float, h0: float | None = None,
                  levels: int = 3, lower: float | None = None) -> Estimate:
    """Richardson-extrapolated derivative of ``f`` at ``x``.

    Central differences at steps ``h0, h0/2, ...`` are combined in a Neville
    tableau. When ``lower`` is given and the stencil would cross it, a
    forward stencil is used instead and the result is flagged ``one_sided``.
    The error is the spread between the last two extrapolation orders.
    """
    if levels < 2:
        raise ValueError("Richardson extrapolation needs at least 2 levels")
    if h0 is None:
        h0 = max(1e-3, 1e-2 * abs(x))
    if h0 <= 0:
        raise ValueError("step must be positive")

    one_sided = lower is not None and x - h0 < lower
    steps = [h0 / 2**k for k in range(levels)]
    seen = []

    def ev(z):
        y = float(f(z))
        if not math.isfinite(y):
            raise FloatingPointError(f"f({z!r}) = {y}")
        seen.append(abs(y))
        return y

    if one_sided:
        f0 = ev(x)
        base = [(ev(x + h) - f0) / h for h in steps]
        order_factor = 2.0
    else:
        base = [(ev(x + h) - ev(x - h)) / (2 * h) for h in steps]
        order_factor = 4.0
    table = [base]
    for j in range(1, levels):
        prev = table[-1]
        c = order_factor**j
        table.append([prev[k] + (prev[k] - prev[k - 1]) / (c - 1)
                      for k in range(1, len(prev))])
    best = table[-1][-1]
    err = abs(best - table[-2][-1])
    # cancellation floor of the finest difference quotient
    err = max(err, 8 * _EPS * max(seen) / steps[-1])
    return Estimate(best, err, len(seen), True, one_sided)
