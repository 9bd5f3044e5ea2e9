"""Energy barrier against growing a spheroidal protrusion on a charged drop.

The split-charge bound of shapes.config_energy_bound is quadratic in the
protrusion charge q, so the optimal q is the clamped vertex of a parabola.
delta_E(r, h) is that minimum relative to the spherical drop; scanning it
over h gives the activation barrier (interior maximum at h_max) and the
instability height h0 where the protrusion becomes energetically favorable.

An external field of magnitude E along the protrusion axis adds -q*R*|E| to
the energy; by default it enters the q-minimization (it is linear in q, so
the closed form survives).  The looser convention of evaluating the field
term at the zero-field optimum is available via field_after_qopt=True.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rootfind import bisect_root, golden_max
from .core import DropletSpec, Scales, ball_energy_conductor
from .errors import DomainError, NumericalError
from .shapes import SpheroidProtrusion, _scaled_charge_quadratic

__all__ = [
    "BarrierScanResult",
    "optimal_protrusion_charge",
    "delta_E",
    "scan_barrier",
    "external_field_correction",
]

# Beyond this multiple of R the touching-protrusion geometry is meaningless.
MAX_HEIGHT_OVER_R = 10.0


def _scaled_field_slope(spec: DropletSpec, field):
    """Field term -q*R*|E| expressed per unit q/Q_R in units of sigma*R^2."""
    scales = Scales.from_spec(spec)
    return scales.charge_unit * spec.radius_R * field / scales.energy_unit


def _charge_quadratic(spec: DropletSpec, p: SpheroidProtrusion, field):
    """Scaled quadratic a*x^2 + b*x + c in x = q/Q_R, field term included in b."""
    if field < 0:
        raise DomainError("field magnitude must be >= 0")
    a, b, c, _, _ = _scaled_charge_quadratic(spec, p)
    if a <= 0:
        raise NumericalError(
            "decomposition invalid: charge quadratic is not convex "
            f"(leading coefficient {a!r}); geometry outside the model's regime")
    return a, b - _scaled_field_slope(spec, field), c


def optimal_protrusion_charge(spec: DropletSpec, p: SpheroidProtrusion, field=0.0):
    """Charge q* in [0, Q] minimizing the configuration energy (with field term).

    The minimizer is the vertex -b/(2a) of the charge quadratic, clamped to
    the admissible interval.
    """
    a, b, _ = _charge_quadratic(spec, p, field)
    X = spec.charge_fraction
    x_opt = min(max(-b / (2.0 * a), 0.0), X)
    return x_opt * Scales.from_spec(spec).charge_unit


def delta_E(spec: DropletSpec, r, h, field=0.0, field_after_qopt=False):
    """min_q [config energy - q*R*|E|] - E(ball), in joules.

    Positive means the spherical drop is energetically protected at this
    protrusion size.  With field_after_qopt the charge is optimized at zero
    field and the field term added afterwards.
    """
    p = SpheroidProtrusion(r=r, h=h)
    scales = Scales.from_spec(spec)
    X = spec.charge_fraction
    if field_after_qopt:
        a, b, c = _charge_quadratic(spec, p, 0.0)
        x = min(max(-b / (2.0 * a), 0.0), X)
        total = a * x**2 + b * x + c - _scaled_field_slope(spec, field) * x
    else:
        a, b, c = _charge_quadratic(spec, p, field)
        x = min(max(-b / (2.0 * a), 0.0), X)
        total = a * x**2 + b * x + c
    return scales.energy_si(total) - ball_energy_conductor(spec)


@dataclass(frozen=True)
class BarrierScanResult:
    """Outcome of a barrier scan over protrusion heights at fixed radius r.

    h0 is None when delta_E does not change sign within the scanned range.
    interior_maximum is False when the grid argmax sits on a boundary, in
    which case h_max/deltaE_max report the boundary sample unrefined.
    """

    r: float
    h_samples: np.ndarray
    deltaE_samples: np.ndarray
    h_max: float
    deltaE_max: float
    q_at_hmax: float
    h0: float | None
    field_magnitude: float
    interior_maximum: bool


def scan_barrier(spec: DropletSpec, r, h_min, h_max_range, n_samples=64,
                 field=0.0, field_after_qopt=False):
    """Sample delta_E on a log-spaced h grid and locate its maximum and root.

    The grid argmax is refined by golden-section search (relative tolerance
    1e-6 in h); a sign change beyond the maximum is refined by bisection
    (relative tolerance 1e-9).  Purely deterministic.
    """
    if n_samples < 16:
        raise DomainError("scan_barrier needs n_samples >= 16")
    if not h_min >= 2.0 * r * (1.0 + 1e-9):
        raise DomainError("h_min must exceed 2r (oblate protrusions excluded)")
    if not h_max_range > h_min:
        raise DomainError("empty height range")
    if h_max_range > MAX_HEIGHT_OVER_R * spec.radius_R:
        raise DomainError(
            f"height range beyond {MAX_HEIGHT_OVER_R}*R: the touching-protrusion "
            "geometry is not meaningful there")

    h_grid = np.geomspace(h_min, h_max_range, n_samples)
    f = lambda h: delta_E(spec, r, h, field=field, field_after_qopt=field_after_qopt)
    dE = np.array([f(h) for h in h_grid])

    i_max = int(np.argmax(dE))
    interior = 0 < i_max < n_samples - 1
    if interior:
        t_max = golden_max(lambda t: f(math.exp(t)),
                           math.log(h_grid[i_max - 1]), math.log(h_grid[i_max + 1]),
                           xtol=1e-6)
        h_at_max = math.exp(t_max)
        dE_max = f(h_at_max)
        if dE_max < dE[i_max]:  # refinement can only improve on the grid value
            h_at_max, dE_max = h_grid[i_max], dE[i_max]
    else:
        h_at_max, dE_max = h_grid[i_max], dE[i_max]

    h0 = None
    sign = np.sign(dE)
    for i in range(max(i_max, 0), n_samples - 1):
        if sign[i] > 0 and sign[i + 1] <= 0:
            h0 = bisect_root(f, h_grid[i], h_grid[i + 1], rtol=1e-9)
            break

    q_at_hmax = optimal_protrusion_charge(
        spec, SpheroidProtrusion(r=r, h=h_at_max),
        field=0.0 if field_after_qopt else field)
    return BarrierScanResult(r=r, h_samples=h_grid, deltaE_samples=dE,
                             h_max=h_at_max, deltaE_max=dE_max,
                             q_at_hmax=q_at_hmax, h0=h0,
                             field_magnitude=field, interior_maximum=interior)


def external_field_correction(q, R, field):
    """Leading-order energy shift -q*R*|E| of a protrusion of charge q in a field."""
    if q < 0 or R < 0 or field < 0:
        raise DomainError("q, R and field must be >= 0")
    return -q * R * field
