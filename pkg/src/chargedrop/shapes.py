"""Closed-form energies of the two trial families that undercut the charged ball.

1. A ball of shrunk radius R' with a prolate-spheroid protrusion of equatorial
   radius r and full height h touching it at a point.  The energy of a split
   charge (q on the spheroid, Q-q on the ball) is an explicit upper bound:
   surface + ball self-energy + spheroid self-energy + an interaction bound.

2. A ball with a long slender cylindrical tentacle of radius r and height h,
   using the slender-body capacitance 2*pi*eps0*h / (ln(2h/r) - 1).  At the
   optimal radius r(h) the energy drops below the ball energy once
   h/(2R) outgrows ln(h^3 Q_R^2 / (4 R^3 Q^2)).

All returned energies are joules; internally everything is evaluated in
units of sigma*R^2 (see core.Scales).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import CODATA, DropletSpec, PhysicalConstants, Scales
from .errors import DomainError

__all__ = [
    "SpheroidProtrusion",
    "EnergyBreakdown",
    "shrunk_ball_radius",
    "spheroid_volume",
    "spheroid_surface_area",
    "spheroid_capacitance",
    "spheroid_capacitance_radius",
    "interaction_bound",
    "config_energy_bound",
    "tentacle_energy_bound",
    "optimal_tentacle_radius",
    "tentacle_energy_deficit",
    "SLENDERNESS_RATIO",
]

# Validity guard for the slender-cylinder capacitance: require r < h * ratio.
SLENDERNESS_RATIO = 0.1

# Below this relative gap h - 2r the closed forms are 0/0; switch to series.
_NEAR_SPHERE_GAP = 1e-6


@dataclass(frozen=True)
class SpheroidProtrusion:
    """Prolate spheroid with equatorial radius r and full height (major axis) h."""

    r: float
    h: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError("SpheroidProtrusion.r must be > 0")
        if self.h < 2.0 * self.r:
            raise DomainError("oblate spheroid not supported: need h >= 2r")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Four-term energy decomposition of the ball+protrusion configuration (J)."""

    surf: float
    ball: float
    ell: float
    interaction: float
    total: float


def _eccentricity(p: SpheroidProtrusion):
    # factored (h-2r)(h+2r) avoids cancellation near the sphere limit
    return math.sqrt((p.h - 2.0 * p.r) * (p.h + 2.0 * p.r)) / p.h


def _near_sphere(p: SpheroidProtrusion):
    return (p.h - 2.0 * p.r) < _NEAR_SPHERE_GAP * p.h


def shrunk_ball_radius(R, p: SpheroidProtrusion):
    """Ball radius R' = R * cbrt(1 - h r^2 / (2 R^3)) conserving total volume.

    The protrusion volume (2/3)*pi*h*r^2 is exactly the deficit
    (4/3)*pi*(R^3 - R'^3).
    """
    if not R > 0:
        raise DomainError("R must be > 0")
    deficit = p.h * p.r**2 / (2.0 * R**3)
    if deficit >= 1.0:
        raise DomainError("protrusion too large: its volume exceeds the drop volume")
    return R * (1.0 - deficit) ** (1.0 / 3.0)


def spheroid_volume(p: SpheroidProtrusion):
    """Volume (2/3)*pi*h*r^2 of the prolate spheroid."""
    return 2.0 * math.pi / 3.0 * p.h * p.r**2


def spheroid_surface_area(p: SpheroidProtrusion):
    """Surface area pi*(2r^2 + r*h^2*arcsin(e)/sqrt(h^2-4r^2)), e the eccentricity.

    Equals 4*pi*r^2 in the h -> 2r limit, evaluated there by a series in e.
    """
    r, h = p.r, p.h
    e = _eccentricity(p)
    if _near_sphere(p):
        arcsin_over_e = 1.0 + e**2 / 6.0 + 3.0 * e**4 / 40.0
    else:
        arcsin_over_e = math.asin(e) / e
    # r*h^2*arcsin(e)/sqrt(h^2-4r^2) == r*h*arcsin(e)/e
    return math.pi * (2.0 * r**2 + r * h * arcsin_over_e)


def spheroid_capacitance_radius(p: SpheroidProtrusion):
    """Capacitance of the spheroid expressed as a length, C / (4*pi*eps0).

    The closed form is sqrt(h^2-4r^2) / ln[h*(sqrt(h^2-4r^2)+h)/(2r^2) - 1];
    the log argument equals (1+e)/(1-e), so the denominator is 2*atanh(e).
    At h = 2r this limits to r.
    """
    h = p.h
    e = _eccentricity(p)
    if _near_sphere(p):
        return 0.5 * h * (1.0 - e**2 / 3.0 - 4.0 * e**4 / 45.0)
    return 0.5 * h * e / math.atanh(e)


def spheroid_capacitance(p: SpheroidProtrusion, constants: PhysicalConstants = CODATA):
    """Capacitance of the prolate spheroid in farads."""
    return 4.0 * math.pi * constants.eps0 * spheroid_capacitance_radius(p)


def interaction_bound(q, Qball, Rprime, h, constants: PhysicalConstants = CODATA):
    """Upper bound q*Qball/(8*pi*eps0) * (1/R' + 1/(R'+h)) for the ball-spheroid
    interaction energy (J); asymptotically sharp for h << R'."""
    if not Rprime > 0:
        raise DomainError("Rprime must be > 0")
    if h < 0:
        raise DomainError("h must be >= 0")
    return q * Qball / (8.0 * math.pi * constants.eps0) * (1.0 / Rprime + 1.0 / (Rprime + h))


def _scaled_charge_quadratic(spec: DropletSpec, p: SpheroidProtrusion):
    """Coefficients of the scaled split-charge energy.

    With x = q/Q_R the total energy in units sigma*R^2 is
    a*x^2 + b*x + c; returns (a, b, c) together with the scaled geometry
    (rp, cl) = (R'/R, capacitance radius / R).
    """
    R = spec.radius_R
    scales = Scales.from_spec(spec)
    X = scales.charge(spec.charge_Q)
    rp = shrunk_ball_radius(R, p) / R
    cl = spheroid_capacitance_radius(p) / R
    h = p.h / R
    area = spheroid_surface_area(p) / R**2

    eight_pi = 8.0 * math.pi
    a = eight_pi * (1.0 / cl - 1.0 / (rp + h))
    b = eight_pi * X * (1.0 / (rp + h) - 1.0 / rp)
    c = 4.0 * math.pi * rp**2 + area + eight_pi * X**2 / rp
    return a, b, c, rp, cl


def config_energy_bound(spec: DropletSpec, p: SpheroidProtrusion, q):
    """Energy upper bound for the ball+spheroid configuration with charge split q.

    Places charge q on the spheroid (equilibrium density) and Q - q on the
    ball, and bounds the cross term by interaction_bound.  Returns the
    four-term breakdown; breakdown.total is the quantity to minimize in q.
    """
    Q = spec.charge_Q
    if q < 0 or q > Q:
        raise DomainError("protrusion charge must satisfy 0 <= q <= Q")
    R = spec.radius_R
    scales = Scales.from_spec(spec)
    sigma = spec.liquid.sigma

    Rp = shrunk_ball_radius(R, p)
    surf = 4.0 * math.pi * sigma * Rp**2 + sigma * spheroid_surface_area(p)

    x = scales.charge(q)
    X = scales.charge(Q)
    rp = Rp / R
    cl = spheroid_capacitance_radius(p) / R
    h = p.h / R
    eight_pi = 8.0 * math.pi
    ball = scales.energy_si(eight_pi * (X - x) ** 2 / rp)
    ell = scales.energy_si(eight_pi * x**2 / cl)
    inter = scales.energy_si(eight_pi * x * (X - x) * (1.0 / rp + 1.0 / (rp + h)))
    return EnergyBreakdown(surf=surf, ball=ball, ell=ell, interaction=inter,
                           total=surf + ball + ell + inter)


def tentacle_energy_bound(spec: DropletSpec, r, h,
                          max_slenderness=SLENDERNESS_RATIO):
    """Energy bound 4*pi*sigma*R^2 + 2*pi*sigma*r*h + Q^2/(4*pi*eps0*h)*(ln(2h/r)-1)
    for a ball with a slender charged tentacle (J); the o(1) term of the
    slender-body capacitance is dropped.
    """
    R = spec.radius_R
    if not (r > 0 and h > 0):
        raise DomainError("tentacle dimensions must be > 0")
    if r >= max_slenderness * h:
        raise DomainError(
            f"slender-body asymptotics invalid: need r < {max_slenderness}*h")
    if math.pi * r**2 * h >= spec.volume:
        raise DomainError("tentacle volume exceeds the drop volume")
    scales = Scales.from_spec(spec)
    X = scales.charge(spec.charge_Q)
    rt, ht = r / R, h / R
    scaled = (4.0 * math.pi + 2.0 * math.pi * rt * ht
              + 16.0 * math.pi * X**2 / ht * (math.log(2.0 * ht / rt) - 1.0))
    return scales.energy_si(scaled)


def optimal_tentacle_radius(spec: DropletSpec, h):
    """Radius r(h) = 8*Q^2*R^3 / (Q_R^2*h^2) minimizing the tentacle bound at fixed h."""
    if not h > 0:
        raise DomainError("h must be > 0")
    if not spec.charge_Q > 0:
        raise DomainError("optimal tentacle radius requires Q > 0")
    X = spec.charge_fraction
    return 8.0 * X**2 * spec.radius_R**3 / h**2


def tentacle_energy_deficit(spec: DropletSpec, h,
                            max_slenderness=SLENDERNESS_RATIO):
    """E(tentacle at optimal radius) - E(ball), in joules.

    Evaluates -Q^2/(4*pi*eps0*h) * { h/(2R) - ln(h^3*Q_R^2/(4*R^3*Q^2)) };
    a negative value certifies the tentacle beats the ball.  Raises
    DomainError where the optimal radius violates the slenderness guard.
    """
    r = optimal_tentacle_radius(spec, h)
    if r >= max_slenderness * h:
        raise DomainError(
            f"slender-body asymptotics invalid at h={h!r}: r(h) >= {max_slenderness}*h")
    if math.pi * r**2 * h >= spec.volume:
        raise DomainError("tentacle volume exceeds the drop volume")
    R = spec.radius_R
    scales = Scales.from_spec(spec)
    X = scales.charge(spec.charge_Q)
    ht = h / R
    bracket = 0.5 * ht - math.log(ht**3 / (4.0 * X**2))
    return scales.energy_si(-16.0 * math.pi * X**2 / ht * bracket)
