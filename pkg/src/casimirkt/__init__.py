"""Casimir forces between ideal plates in vacuum and in photon gases described by kinetic theory."""

from .equilibrium import energy_density, eq_curve, ratio_eq, thermal_force
from .modesum import vacuum_energy_variation, vacuum_force
from .nonequilibrium import delta_E, delta_E_zero, noneq_curve, ratio_noneq
from .numerics import EQUILIBRIUM_SETTINGS, NONEQUILIBRIUM_SETTINGS, Estimate, QuadSettings

__version__ = "0.1.0"

__all__ = [
    "Estimate",
    "QuadSettings",
    "EQUILIBRIUM_SETTINGS",
    "NONEQUILIBRIUM_SETTINGS",
    "vacuum_energy_variation",
    "vacuum_force",
    "thermal_force",
    "ratio_eq",
    "energy_density",
    "eq_curve",
    "delta_E",
    "delta_E_zero",
    "ratio_noneq",
    "noneq_curve",
]
