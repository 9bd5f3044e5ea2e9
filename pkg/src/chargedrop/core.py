"""Problem parameters, physical constants, and the spherical reference energies.

Two reference models are evaluated on a ball of radius R carrying charge Q:

* perfect conductor: E = 4*pi*sigma*R^2 + Q^2 / (8*pi*eps0*R)
* uniformly charged ball: E = 4*pi*sigma*R^2 + 3*Q^2 / (20*pi*eps0*R)

All public inputs are SI.  Internally energies are computed in units of
sigma*R^2 with charges in units of the critical charge Q_R, which keeps
intermediates O(1) instead of spreading over ~30 decades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import DomainError

__all__ = [
    "PhysicalConstants",
    "CODATA",
    "Liquid",
    "WATER",
    "METHANOL",
    "DropletSpec",
    "Scales",
    "rayleigh_charge",
    "debye_radius",
    "ion_density_for_debye_radius",
    "ball_energy_conductor",
    "ball_energy_uniform",
    "thermal_energy",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used throughout; injectable so tests can use round numbers."""

    eps0: float = 8.8541878128e-12  # vacuum permittivity, F/m
    kB: float = 1.380649e-23        # Boltzmann constant, J/K
    e_charge: float = 1.602176634e-19  # elementary charge, C

    def __post_init__(self):
        for name in ("eps0", "kB", "e_charge"):
            if not getattr(self, name) > 0:
                raise DomainError(f"PhysicalConstants.{name} must be > 0")


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class Liquid:
    """Material parameters of the conducting liquid.

    ion_density_n0 is the mean density of free ions per species (1/m^3);
    together with epsilon_r and temperature it fixes the Debye radius.
    """

    sigma: float            # surface tension, N/m
    epsilon_r: float = 80.0
    temperature: float = 293.0  # K
    ion_density_n0: float = 6.02e25  # ~0.1 mol/l of a 1:1 electrolyte

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("Liquid.sigma must be > 0")
        if not self.epsilon_r >= 1:
            raise DomainError("Liquid.epsilon_r must be >= 1")
        if not self.temperature > 0:
            raise DomainError("Liquid.temperature must be > 0")
        if not self.ion_density_n0 > 0:
            raise DomainError("Liquid.ion_density_n0 must be > 0")


WATER = Liquid(sigma=0.073, epsilon_r=80.0, temperature=293.0)
METHANOL = Liquid(sigma=0.023, epsilon_r=33.0, temperature=293.0)


def rayleigh_charge(R, sigma, constants: PhysicalConstants = CODATA):
    """Critical charge Q_R = 8*pi*sqrt(eps0*sigma*R^3) of a spherical drop.

    Above Q_R the sphere is linearly unstable to small elongations.
    """
    if not R > 0:
        raise DomainError("radius must be > 0")
    if not sigma > 0:
        raise DomainError("surface tension must be > 0")
    return 8.0 * math.pi * math.sqrt(constants.eps0 * sigma * R**3)


def debye_radius(liquid: Liquid, constants: PhysicalConstants = CODATA):
    """Screening length r_D = sqrt(eps0*eps_r*kB*T / (2*n0*e^2)) in meters."""
    num = constants.eps0 * liquid.epsilon_r * constants.kB * liquid.temperature
    den = 2.0 * liquid.ion_density_n0 * constants.e_charge**2
    return math.sqrt(num / den)


def ion_density_for_debye_radius(r_D, epsilon_r=1.0, temperature=293.0,
                                 constants: PhysicalConstants = CODATA):
    """Invert the Debye-radius formula for the per-species ion density."""
    if not r_D > 0:
        raise DomainError("Debye radius must be > 0")
    return constants.eps0 * epsilon_r * constants.kB * temperature / (
        2.0 * constants.e_charge**2 * r_D**2)


@dataclass(frozen=True)
class DropletSpec:
    """One problem instance: a drop of radius_R carrying total charge charge_Q."""

    radius_R: float
    liquid: Liquid
    charge_Q: float
    constants: PhysicalConstants = field(default=CODATA)

    def __post_init__(self):
        if not self.radius_R > 0:
            raise DomainError("DropletSpec.radius_R must be > 0")
        if self.charge_Q < 0:
            raise DomainError("DropletSpec.charge_Q must be >= 0")

    @classmethod
    def from_charge_fraction(cls, radius_R, liquid: Liquid, fraction,
                             constants: PhysicalConstants = CODATA):
        """Build a spec charged to `fraction` of the Rayleigh limit."""
        if fraction < 0:
            raise DomainError("charge fraction must be >= 0")
        Q = fraction * rayleigh_charge(radius_R, liquid.sigma, constants)
        return cls(radius_R, liquid, Q, constants)

    @property
    def volume(self):
        """Drop volume (4/3)*pi*R^3; derived, never stored."""
        return 4.0 / 3.0 * math.pi * self.radius_R**3

    @property
    def rayleigh_limit(self):
        return rayleigh_charge(self.radius_R, self.liquid.sigma, self.constants)

    @property
    def charge_fraction(self):
        return self.charge_Q / self.rayleigh_limit

    def with_charge_fraction(self, fraction):
        if fraction < 0:
            raise DomainError("charge fraction must be >= 0")
        return replace(self, charge_Q=fraction * self.rayleigh_limit)


@dataclass(frozen=True)
class Scales:
    """Natural units of a droplet problem: length R, energy sigma*R^2, charge Q_R."""

    length_unit: float
    energy_unit: float
    charge_unit: float

    @classmethod
    def from_spec(cls, spec: DropletSpec):
        R = spec.radius_R
        return cls(length_unit=R,
                   energy_unit=spec.liquid.sigma * R**2,
                   charge_unit=spec.rayleigh_limit)

    def length(self, x):
        return x / self.length_unit

    def energy(self, e):
        return e / self.energy_unit

    def charge(self, q):
        return q / self.charge_unit

    def length_si(self, x):
        return x * self.length_unit

    def energy_si(self, e):
        return e * self.energy_unit

    def charge_si(self, q):
        return q * self.charge_unit


def ball_energy_conductor(spec: DropletSpec):
    """Energy of the spherical drop in the perfect-conductor model (J).

    In scale units this is 4*pi + 8*pi*(Q/Q_R)^2, which is how it is
    evaluated before converting back to joules.
    """
    scales = Scales.from_spec(spec)
    x = scales.charge(spec.charge_Q)
    return scales.energy_si(4.0 * math.pi + 8.0 * math.pi * x**2)


def ball_energy_uniform(spec: DropletSpec):
    """Energy of the spherical drop with the charge frozen uniform in the bulk (J).

    The Coulomb term is 6/5 of the conductor value: 3*Q^2/(20*pi*eps0*R).
    """
    scales = Scales.from_spec(spec)
    x = scales.charge(spec.charge_Q)
    return scales.energy_si(4.0 * math.pi + 9.6 * math.pi * x**2)


def thermal_energy(temperature, constants: PhysicalConstants = CODATA):
    """kB*T in joules, the unit barrier heights are quoted in."""
    if not temperature > 0:
        raise DomainError("temperature must be > 0")
    return constants.kB * temperature
