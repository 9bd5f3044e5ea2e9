"""Smooth localized perturbations of a charged sphere that lower its energy.

The perturbed drop is the subgraph of rho = R + phi(theta) in spherical
coordinates: a slender spike of height delta and exponentially small base
radius r = delta*exp(-R/delta) on the polar axis, surrounded by a shallow
ring-shaped depression of depth h at chord radius ~r' = (r*R*delta^2)^(1/4)
that restores the volume.  The scaled energy-difference bracket

    (delta*Q_R^2/(R*Q^2) + 1) * (delta/R) * e^(-R/delta)
        - (delta/R)^(5/2) * e^(-R/(2*delta))

is negative for every sufficiently small delta: however small the charge,
sharp enough spikes pay for themselves.  Only sign and scaling carry
meaning; the bracket holds up to unnamed universal constants, and the
dimensional prefactor Q^2/(eps0*R) is reported separately.

Exponentials like e^(-R/delta) underflow doubles for delta/R < ~0.0014, so
everything is evaluated in log space and log-magnitude forms are exposed
alongside the float values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from ._rootfind import bisect_root
from .core import DropletSpec
from .errors import DomainError, StateError

__all__ = [
    "PerturbationParams",
    "InnerRadii",
    "inner_radii",
    "cutoff_eta",
    "phi_delta",
    "perturbed_volume",
    "solve_depression_depth",
    "solved_params",
    "delta_E0_bracket",
    "delta_E0_bracket_log",
    "delta_E0_prefactor",
    "instability_threshold_delta",
]


@dataclass(frozen=True)
class InnerRadii:
    """Spike base radius r and depression radius r', with authoritative logs.

    r underflows the smallest positive double for delta/R < ~0.0014; the
    float fields are then 0.0 and log_r / log_rprime (natural logs of the
    value in meters) remain exact.
    """

    r: float
    rprime: float
    log_r: float
    log_rprime: float


@dataclass(frozen=True)
class PerturbationParams:
    """Geometry of one spike-plus-ring perturbation.

    The protrusion axis is fixed to the north pole, which makes phi
    axisymmetric and every integral one-dimensional.  depression_depth_h is
    solved from volume conservation (solve_depression_depth), not supplied.
    """

    delta: float
    R: float
    depression_depth_h: float | None = None

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("PerturbationParams.R must be > 0")
        if not 0 < self.delta < 0.5 * self.R:
            raise DomainError("need 0 < delta < R/2 for the spike construction")

    @property
    def radii(self) -> InnerRadii:
        return inner_radii(self.R, self.delta)


def inner_radii(R, delta) -> InnerRadii:
    """Inner length scales r = delta*e^(-R/delta), r' = (r*R*delta^2)^(1/4).

    Computed in log space; satisfies r < r' < delta for delta < R/2.
    """
    if not (R > 0 and 0 < delta < R):
        raise DomainError("need 0 < delta < R")
    log_r = math.log(delta) - R / delta
    log_rp = 0.25 * (log_r + math.log(R) + 2.0 * math.log(delta))
    # exp underflows to 0.0 below ~exp(-745); the log fields stay exact
    r = math.exp(log_r) if log_r > -745.0 else 0.0
    rp = math.exp(log_rp) if log_rp > -745.0 else 0.0
    return InnerRadii(r=r, rprime=rp, log_r=log_r, log_rprime=log_rp)


def _bump(s):
    """exp(-1/s) for s > 0, zero otherwise; the C-infinity mollifier piece."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    mask = s > 0
    out[mask] = np.exp(-1.0 / s[mask])
    return out


def cutoff_eta(t):
    """Smooth non-increasing step: 1 for t <= 1, 0 for t >= 2.

    eta(t) = f(2-t) / (f(2-t) + f(t-1)) with f(s) = exp(-1/s) for s > 0.
    Accepts scalars or arrays.
    """
    t_arr = np.asarray(t, dtype=float)
    hi = _bump(2.0 - t_arr)
    lo = _bump(t_arr - 1.0)
    out = hi / (hi + lo)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def phi_delta(theta, params: PerturbationParams):
    """Signed radial displacement at polar angle theta from the spike axis.

    phi = delta*eta(R*c/r) - h*eta(2*R*c/r')*(1 - eta(2*R*c/r')) with
    c = 2*sin(theta/2) the chord distance on the unit sphere.  Requires
    solved params (depression depth set).
    """
    if params.depression_depth_h is None:
        raise StateError("params not solved: call solve_depression_depth first")
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr < -1e-12) or np.any(theta_arr > math.pi + 1e-12):
        raise DomainError("theta must lie in [0, pi]")
    radii = params.radii
    if radii.r == 0.0:
        raise DomainError("delta too small: spike radius underflows direct evaluation")
    chord = 2.0 * np.sin(0.5 * theta_arr)
    spike = params.delta * cutoff_eta(params.R * chord / radii.r)
    u = cutoff_eta(2.0 * params.R * chord / radii.rprime)
    out = spike - params.depression_depth_h * u * (1.0 - u)
    return float(out) if np.isscalar(theta) or theta_arr.ndim == 0 else out


def _support_intervals(params: PerturbationParams):
    """Theta intervals containing the spike and the depression ring."""
    radii = params.radii
    R = params.R
    theta_spike = 2.0 * math.asin(min(radii.r / R, 1.0))
    theta_ring0 = 2.0 * math.asin(min(radii.rprime / (4.0 * R), 1.0))
    theta_ring1 = 2.0 * math.asin(min(radii.rprime / (2.0 * R), 1.0))
    if theta_spike >= theta_ring0:
        return [(0.0, theta_ring1)]
    return [(0.0, theta_spike), (theta_ring0, theta_ring1)]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(400)


def _volume_correction(params: PerturbationParams, adaptive=False):
    """(|Omega| - (4/3)*pi*R^3) / R^3, integrated over the perturbation support.

    The integrand is a smooth bump on each support interval, so a fixed
    400-point Gauss-Legendre rule per interval is converged to round-off;
    adaptive=True switches to scipy's adaptive quadrature as a cross-check.
    """
    R = params.R

    def integrand(theta):
        f = phi_delta(theta, params) / R
        return 2.0 * math.pi / 3.0 * ((1.0 + f) ** 3 - 1.0) * np.sin(theta)

    total = 0.0
    for a, b in _support_intervals(params):
        if adaptive:
            val, _ = quad(integrand, a, b, epsabs=1e-16, epsrel=1e-11, limit=200)
        else:
            theta = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
            val = 0.5 * (b - a) * float(np.sum(_GL_WEIGHTS * integrand(theta)))
        total += val
    return total


def perturbed_volume(params: PerturbationParams, adaptive=False):
    """Volume of the perturbed drop in m^3 (params must be solved)."""
    R = params.R
    return (4.0 * math.pi / 3.0 + _volume_correction(params, adaptive=adaptive)) * R**3


def solve_depression_depth(params: PerturbationParams):
    """Depression depth h >= 0 restoring |Omega| = (4/3)*pi*R^3.

    Bisection on h in [0, r']; the solved h always satisfies h < r'/2.
    """
    radii = params.radii
    if radii.r == 0.0:
        raise DomainError("delta too small: spike volume is below float resolution")

    def err(h):
        return _volume_correction(replace(params, depression_depth_h=h))

    lo, hi = 0.0, radii.rprime
    if not (err(lo) > 0.0 and err(hi) < 0.0):
        raise DomainError(
            "perturbation inconsistent: volume error does not change sign on [0, r']")
    h = bisect_root(err, lo, hi, rtol=1e-13)
    if not h < 0.5 * radii.rprime:
        raise DomainError("perturbation inconsistent: solved depth not << r'")
    return h


def solved_params(R, delta) -> PerturbationParams:
    """PerturbationParams with the depression depth solved in."""
    params = PerturbationParams(delta=delta, R=R)
    return replace(params, depression_depth_h=solve_depression_depth(params))


def _bracket_logs(charge_fraction, x):
    """Natural logs of the two bracket terms at delta/R = x."""
    coef = x / charge_fraction**2 + 1.0
    L_pos = math.log(coef) + math.log(x) - 1.0 / x
    L_neg = 2.5 * math.log(x) - 0.5 / x
    return L_pos, L_neg


def delta_E0_bracket(spec: DropletSpec, delta):
    """Dimensionless energy-difference bracket at spike height delta.

    Negative means the spike-plus-ring perturbation beats the sphere.  The
    two exponentially disparate terms are combined in log space (stable for
    delta/R >= 0.002); the dimensional prefactor is delta_E0_prefactor.
    """
    sign, log_mag = delta_E0_bracket_log(spec, delta)
    if log_mag < -745.0:
        return 0.0
    return sign * math.exp(log_mag)


def delta_E0_bracket_log(spec: DropletSpec, delta):
    """(sign, log-magnitude) form of delta_E0_bracket, usable at any delta/R."""
    if not 0 < delta < spec.radius_R:
        raise DomainError("need 0 < delta < R")
    if not spec.charge_Q > 0:
        raise DomainError("the bracket requires Q > 0")
    x = delta / spec.radius_R
    L_pos, L_neg = _bracket_logs(spec.charge_fraction, x)
    if L_pos >= L_neg:
        sign, L_max, L_min = 1.0, L_pos, L_neg
    else:
        sign, L_max, L_min = -1.0, L_neg, L_pos
    # |e^a - e^b| = e^max * (1 - e^(min-max))
    diff = -math.expm1(L_min - L_max)
    if diff == 0.0:
        return 0.0, -math.inf
    return sign, L_max + math.log(diff)


def delta_E0_prefactor(spec: DropletSpec):
    """Dimensional scale Q^2/(eps0*R) multiplying the bracket, in joules."""
    return spec.charge_Q**2 / (spec.constants.eps0 * spec.radius_R)


def instability_threshold_delta(spec: DropletSpec):
    """Spike height delta* where the bracket changes sign, by bisection.

    Searches [0.002R, R] with relative tolerance 1e-9 after verifying the
    bracket is negative at the left end and positive at the right end.
    """
    if not spec.charge_Q > 0:
        raise DomainError("threshold search requires Q > 0")
    R = spec.radius_R
    lo, hi = 0.002 * R, R * (1.0 - 1e-12)

    def f(delta):
        sign, _ = delta_E0_bracket_log(spec, delta)
        return sign

    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo < 0.0 < f_hi):
        raise DomainError(
            "bracket does not change sign on [0.002R, R]: "
            f"sign({lo!r})={f_lo!r}, sign({hi!r})={f_hi!r}")
    return bisect_root(f, lo, hi, rtol=1e-9)
