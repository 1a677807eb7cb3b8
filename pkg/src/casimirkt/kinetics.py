r"""Photon distributions, tensor structures and residuals of the scalar kinetic equations.

Conventions: natural units, metric ``diag(+1, -1, -1, -1)``,
:math:`\epsilon^{0123} = +1` (so :math:`\epsilon_{0123} = -1`). Vectors are
stored contravariant. Gradients ``d_mu f = df/dx^mu`` are covariant. The
structure tensors :math:`C^\pm_{\mu\nu}` are returned with lower indices and
the energy-momentum density :math:`t^{\mu\nu}` with upper indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import differentiate

__all__ = [
    "METRIC",
    "LEVI_CIVITA",
    "FourVector",
    "OnShellMomentum",
    "DistributionField",
    "SingularFrameError",
    "REST_FRAME",
    "equilibrium_distribution",
    "free_stream",
    "free_streaming_distribution",
    "partial_derivative",
    "transport_residual",
    "wave_residual",
    "frame_constraint_residual",
    "axial_constraint_residual",
    "c_plus",
    "c_minus",
    "energy_momentum_density",
    "currents",
]

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

FD_STEP = 1e-4
FD_LEVELS = 3
# second differences lose h^-2 to cancellation, so they start from a wider step
FD_STEP_SECOND = 1e-2


def _levi_civita():
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


# upper-index symbol with eps^{0123} = +1
LEVI_CIVITA = _levi_civita()
# lowering all four indices flips the overall sign
_LEVI_CIVITA_LOWER = -LEVI_CIVITA


class SingularFrameError(ZeroDivisionError):
    """Raised when ``p . u`` vanishes and the structure tensors blow up."""


@dataclass(frozen=True)
class FourVector:
    """Contravariant four-vector ``(x^0, x^1, x^2, x^3)``."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float).reshape(-1)
        if c.shape != (4,):
            raise ValueError("a four-vector needs exactly 4 components")
        object.__setattr__(self, "components", c)

    @classmethod
    def of(cls, x0, x1, x2, x3):
        return cls(np.array([x0, x1, x2, x3], dtype=float))

    @property
    def time(self):
        return self.components[0]

    @property
    def space(self):
        return self.components[1:]

    def lower(self) -> np.ndarray:
        return METRIC @ self.components

    def dot(self, other: "FourVector") -> float:
        return float(self.components @ METRIC @ other.components)

    def shifted(self, mu: int, h: float) -> "FourVector":
        c = self.components.copy()
        c[mu] += h
        return FourVector(c)


REST_FRAME = FourVector.of(1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class OnShellMomentum:
    """Photon three-momentum; the energy is ``|p|`` by construction."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if p.shape != (3,):
            raise ValueError("three-momentum needs 3 components")
        object.__setattr__(self, "p", p)

    @classmethod
    def of(cls, px, py, pz):
        return cls(np.array([px, py, pz], dtype=float))

    @property
    def energy(self) -> float:
        return float(math.sqrt(self.p @ self.p))

    def four(self) -> FourVector:
        return FourVector(np.concatenate([[self.energy], self.p]))


@dataclass(frozen=True)
class DistributionField:
    """Scalar phase-space field ``f(x, p)`` with an optional analytic x-gradient.

    ``gradient(x, p)`` returns the covariant components ``df/dx^mu``.
    """

    func: Callable[[FourVector, OnShellMomentum], float]
    gradient: Callable[[FourVector, OnShellMomentum], np.ndarray] | None = None
    name: str = ""

    def __call__(self, x: FourVector, p: OnShellMomentum) -> float:
        return self.func(x, p)


def equilibrium_distribution(T: float) -> DistributionField:
    """Bose-Einstein occupation ``1 / (exp(eps_p / T) - 1)`` in the rest frame."""
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")

    def func(x, p):
        arg = p.energy / T
        # beyond ~709 expm1 overflows; the occupation is e^{-arg} there
        return 1.0 / math.expm1(arg) if arg < 700.0 else math.exp(-arg)

    def gradient(x, p):
        return np.zeros(4)

    return DistributionField(func, gradient, f"bose-einstein(T={T:g})")


def free_stream(initial: Callable[[np.ndarray, OnShellMomentum], float],
                t0: float = 0.0) -> DistributionField:
    """Collisionless evolution of ``initial(x0, p)`` given at time ``t0``.

    The value at ``(t, x)`` is the initial value at the foot of the
    characteristic, ``x - p (t - t0) / eps_p``.
    """
    def func(x, p):
        foot = x.space - p.p * (x.time - t0) / p.energy
        return initial(foot, p)

    return DistributionField(func, None, "free-stream")


def free_streaming_distribution() -> DistributionField:
    """``exp(-|eps_p x - p t|)``: free streaming of ``exp(-eps_p |x0|)`` from ``t = 0``.

    The analytic gradient is undefined on the characteristic through the
    origin, where the field has a cusp; NaNs are returned there.
    """
    def func(x, p):
        v = p.energy * x.space - p.p * x.time
        return math.exp(-math.sqrt(v @ v))

    def gradient(x, p):
        v = p.energy * x.space - p.p * x.time
        r = math.sqrt(v @ v)
        if r == 0:
            return np.full(4, np.nan)
        f = math.exp(-r)
        return np.concatenate([[f * (v @ p.p) / r], -f * p.energy * v / r])

    return DistributionField(func, gradient, "free-streaming")


def partial_derivative(f: DistributionField, x: FourVector, p: OnShellMomentum,
                       mu: int, h: float = FD_STEP):
    """Richardson estimate of ``df/dx^mu`` as a :class:`~casimirkt.numerics.Estimate`."""
    return differentiate(lambda s: f(x.shifted(mu, s), p), 0.0, h, FD_LEVELS)


def _gradient_fd(f, x, p):
    ests = [partial_derivative(f, x, p, mu) for mu in range(4)]
    return np.array([e.value for e in ests]), np.array([e.error for e in ests])


def _second_partial(f, x, p, mu, h=FD_STEP_SECOND, levels=FD_LEVELS):
    f0 = f(x, p)
    row = []
    for k in range(levels):
        hk = h / 2**k
        row.append((f(x.shifted(mu, hk), p) - 2 * f0 + f(x.shifted(mu, -hk), p)) / hk**2)
    for j in range(1, levels):
        c = 4.0**j
        row = [row[k] + (row[k] - row[k - 1]) / (c - 1) for k in range(1, len(row))]
    return row[-1]


def transport_residual(f: DistributionField, x: FourVector, p: OnShellMomentum) -> float:
    """``p^mu d_mu f = eps_p df/dt + p . grad f``, by finite differences."""
    grad, _ = _gradient_fd(f, x, p)
    return float(p.four().components @ grad)


def wave_residual(f: DistributionField, x: FourVector, p: OnShellMomentum) -> float:
    """d'Alembertian ``(d_t^2 - laplacian) f`` by second differences."""
    d2 = [_second_partial(f, x, p, mu) for mu in range(4)]
    return float(d2[0] - d2[1] - d2[2] - d2[3])


def frame_constraint_residual(f: DistributionField, x: FourVector, p: OnShellMomentum,
                              u: FourVector = REST_FRAME) -> np.ndarray:
    """Components ``p_mu (u . d) f - (p . u) d_mu f`` for ``mu = 0..3``."""
    grad, _ = _gradient_fd(f, x, p)
    p4 = p.four()
    u_dot_grad = u.components @ grad
    return p4.lower() * u_dot_grad - p4.dot(u) * grad


def axial_constraint_residual(f_minus: DistributionField, x: FourVector,
                              p: OnShellMomentum, u: FourVector = REST_FRAME) -> np.ndarray:
    """``eps_{mu nu sigma rho} d^nu p^sigma u^rho f_minus`` with constant p and u."""
    grad, _ = _gradient_fd(f_minus, x, p)
    grad_up = METRIC @ grad
    return np.einsum("mnsr,n,s,r->m", _LEVI_CIVITA_LOWER, grad_up,
                     p.four().components, u.components)


def _frame_checks(p: FourVector, u: FourVector):
    pu = p.dot(u)
    if pu == 0 or abs(pu) < 1e-300:
        raise SingularFrameError("p . u = 0; the structure tensor is singular")
    scale = p.components @ p.components
    if abs(p.dot(p)) > 1e-9 * max(scale, 1e-300):
        raise ValueError("momentum is not on the light cone (p^2 != 0)")
    if abs(u.dot(u) - 1.0) > 1e-9:
        raise ValueError("frame vector must satisfy u^2 = 1")
    return pu


def c_plus(p: FourVector, u: FourVector = REST_FRAME) -> np.ndarray:
    """Symmetric structure tensor, lower indices.

    ``C+_{mu nu} = p_mu p_nu / (p.u)^2 - (p_mu u_nu + p_nu u_mu) / (p.u) + g_{mu nu}``,
    transverse to both ``p`` and ``u`` for on-shell ``p`` and ``u^2 = 1``.
    """
    pu = _frame_checks(p, u)
    pl, ul = p.lower(), u.lower()
    return np.outer(pl, pl) / pu**2 - (np.outer(pl, ul) + np.outer(ul, pl)) / pu + METRIC


def c_minus(p: FourVector, u: FourVector = REST_FRAME) -> np.ndarray:
    """Antisymmetric structure tensor, lower indices, as the real coefficient of ``i``.

    ``C-_{mu nu} = i eps_{mu nu sigma rho} p^sigma u^rho / (2 p.u)``; the
    returned array omits the factor ``i``.
    """
    pu = _frame_checks(p, u)
    return np.einsum("mnsr,s,r->mn", _LEVI_CIVITA_LOWER,
                     p.components, u.components) / (2.0 * pu)


def energy_momentum_density(p: FourVector, fval: float) -> np.ndarray:
    """Phase-space energy-momentum density ``t^{mu nu} = 2 p^mu p^nu f``."""
    if fval < 0:
        raise ValueError("occupation number must be non-negative")
    return 2.0 * fval * np.outer(p.components, p.components)


def currents(p: FourVector, f_plus_grad, f_minus_val: float):
    """Vector current ``d_mu f_+`` (covariant) and axial current ``p^mu f_-``."""
    j = np.asarray(f_plus_grad, dtype=float).reshape(4)
    j5 = p.components * f_minus_val
    return j.copy(), j5
