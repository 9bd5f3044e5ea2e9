"""chargedrop: equilibrium and instability energetics of charged liquid drops.

A perfectly conducting charged drop is never truly protected by surface
tension: sharp enough protrusions always lower the sum of surface and
electrostatic energy.  This package provides the closed-form trial-shape
energies quantifying that instability, the activation-barrier landscape for
spheroidal protrusions (with optional external field), the exponentially
small smooth-perturbation construction, a boundary-element capacitance
solver used as an independent numerical oracle, and the screened
(Debye-Huckel) ball problem showing how finite screening restores
well-posedness.
"""

from .core import (
    CODATA,
    METHANOL,
    WATER,
    DropletSpec,
    Liquid,
    PhysicalConstants,
    Scales,
    ball_energy_conductor,
    ball_energy_uniform,
    debye_radius,
    ion_density_for_debye_radius,
    rayleigh_charge,
    thermal_energy,
)
from .errors import DomainError, NumericalError, StateError

__version__ = "0.1.0"

__all__ = [
    "CODATA",
    "WATER",
    "METHANOL",
    "PhysicalConstants",
    "Liquid",
    "DropletSpec",
    "Scales",
    "rayleigh_charge",
    "debye_radius",
    "ion_density_for_debye_radius",
    "ball_energy_conductor",
    "ball_energy_uniform",
    "thermal_energy",
    "DomainError",
    "NumericalError",
    "StateError",
    "__version__",
]
