"""Seeded self-checks of the kinetic structures and the equilibrium formulas.

Each group samples random on-shell momenta and space-time points from a
``numpy.random.Generator`` and records the largest residual seen, so a
report is reproducible from its seed alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kinetics as kt
from .equilibrium import VACUUM_FORCE_A4, ratio_eq, thermal_force

__all__ = ["GroupResult", "TOLERANCES", "verify", "random_momentum", "random_point"]

TOLERANCES = {
    "tensor_transversality": 1e-10,
    "transport_residual": 1e-6,
    "equilibrium_residuals": 1e-10,
    "energy_momentum_symmetry": 1e-13,
    "characteristic_invariance": 1e-13,
    "path_agreement": 1e-10,
}


@dataclass(frozen=True)
class GroupResult:
    group: str
    max_residual: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def random_momentum(rng: np.random.Generator) -> kt.OnShellMomentum:
    return kt.OnShellMomentum(rng.normal(size=3))


def random_point(rng: np.random.Generator) -> kt.FourVector:
    return kt.FourVector(np.concatenate([rng.uniform(0, 2, 1), rng.uniform(-1, 1, 3)]))


def _off_cusp_point(rng, p):
    # keep away from the characteristic through the origin, where the
    # free-streaming field is not differentiable
    while True:
        x = random_point(rng)
        v = p.energy * x.space - p.p * x.time
        if math.sqrt(v @ v) > 0.05:
            return x


def _transversality(rng, n):
    worst = 0.0
    u = kt.REST_FRAME
    for _ in range(n):
        p = random_momentum(rng).four()
        for c in (kt.c_plus(p, u), kt.c_minus(p, u)):
            worst = max(worst, np.max(np.abs(p.components @ c)),
                        np.max(np.abs(u.components @ c)))
    return worst


def _transport(rng, n):
    f = kt.free_streaming_distribution()
    worst = 0.0
    for _ in range(n):
        p = random_momentum(rng)
        x = _off_cusp_point(rng, p)
        worst = max(worst, abs(kt.transport_residual(f, x, p)))
    return worst


def _equilibrium(rng, n):
    worst = 0.0
    for _ in range(n):
        f = kt.equilibrium_distribution(rng.uniform(0.2, 5.0))
        p = random_momentum(rng)
        x = random_point(rng)
        worst = max(worst,
                    abs(kt.transport_residual(f, x, p)),
                    abs(kt.wave_residual(f, x, p)),
                    np.max(np.abs(kt.frame_constraint_residual(f, x, p))),
                    np.max(np.abs(kt.axial_constraint_residual(f, x, p))))
    return worst


def _tensor_symmetry(rng, n):
    worst = 0.0
    for _ in range(n):
        p = random_momentum(rng).four()
        fval = rng.uniform(0, 10)
        t = kt.energy_momentum_density(p, fval)
        scale = max(np.max(np.abs(t)), 1e-300)
        trace = np.sum(kt.METRIC * t)
        worst = max(worst, np.max(np.abs(t - t.T)) / scale, abs(trace) / scale)
    return worst


def _characteristics(rng, n):
    f = kt.free_streaming_distribution()
    worst = 0.0
    for _ in range(n):
        p = random_momentum(rng)
        x = random_point(rng)
        foot = kt.FourVector(np.concatenate([[0.0], x.space - p.p * x.time / p.energy]))
        worst = max(worst, abs(f(x, p) - f(foot, p)))
    return worst


def _paths(points=(0.1, 0.5, 1.0, 2.0, 4.0)):
    return max(abs(ratio_eq(x) - (VACUUM_FORCE_A4 + thermal_force(x)) / VACUUM_FORCE_A4)
               for x in points)


def verify(seed: int = 42, samples: int = 1000) -> list[GroupResult]:
    """Run every check group and return one result per group, in fixed order."""
    rng = np.random.default_rng(seed)
    runs = [
        ("tensor_transversality", lambda: _transversality(rng, samples), samples),
        ("transport_residual", lambda: _transport(rng, samples), samples),
        ("equilibrium_residuals", lambda: _equilibrium(rng, samples), samples),
        ("energy_momentum_symmetry", lambda: _tensor_symmetry(rng, samples), samples),
        ("characteristic_invariance", lambda: _characteristics(rng, samples), samples),
        ("path_agreement", _paths, 5),
    ]
    return [GroupResult(name, float(fn()), TOLERANCES[name], n) for name, fn, n in runs]
