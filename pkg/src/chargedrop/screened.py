"""Minimal-energy radial charge profile in a ball under Debye screening.

Minimizes the screened electrostatic functional over volumetric radial
densities rho(s) carrying total charge Q in a ball of radius R:

    (eps0/2) * Int |grad v|^2  +  (r_D^2 / (2*eps0)) * Int_B rho^2,
    -eps0 * laplace(v) = rho,   Int_B rho = Q,

the dielectrically matched (epsilon_r = 1) case.  The rho^2 penalty is what
finite screening adds to the perfect-conductor energy: it forbids surface
concentration and selects the unique profile rho(s) = A*sinh(s/r_D)/s.  For
r_D << R the energy approaches the conductor value Q^2/(8*pi*eps0*R); for
r_D >> R it approaches the uniform-ball value 3*Q^2/(20*pi*eps0*R).

Discretization: rho is piecewise constant on spherical shells.  Both the
Coulomb quadratic form (shell-shell kernel 1/max(s,t)) and the penalty are
integrated exactly for such densities, so the discrete minimum is the true
functional minimized over a nested family of spaces: refining the grid
dyadically can only lower the energy, and the discrete Euler-Lagrange
identity  <v>_cell + (r_D^2/eps0)*rho = const  holds to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lapack

from .core import CODATA, DropletSpec, debye_radius
from .errors import DomainError, NumericalError

__all__ = [
    "RadialChargeProfile",
    "ScreenedEnergyResult",
    "boundary_graded_edges",
    "refine_edges",
    "solve_screened_ball",
    "minimize_screened_ball",
    "screened_vs_conductor_gap",
    "cell_average_potential",
    "gradient_form_energy",
    "analytic_profile",
]

_MAX_CONDITION = 1e12


@dataclass(frozen=True)
class RadialChargeProfile:
    """Piecewise-constant radial density: value rho[k] on shell (edges[k], edges[k+1]).

    grid holds the cell midpoints; cell_volumes the exact shell volumes, so
    total charge is rho @ cell_volumes with no quadrature error.
    """

    grid: np.ndarray
    rho: np.ndarray
    edges: np.ndarray

    @property
    def cell_volumes(self):
        return 4.0 * math.pi / 3.0 * np.diff(self.edges**3)

    def total_charge(self):
        return float(self.rho @ self.cell_volumes)


@dataclass(frozen=True)
class ScreenedEnergyResult:
    """Charge-dependent energy split: electrostatic + entropic penalty (J)."""

    electrostatic: float
    entropic: float
    total: float


def boundary_graded_edges(R, r_D, n):
    """Cell edges on [0, R], geometrically clustered so the boundary cell
    is at most r_D/4 (the minimizer varies on the screening scale there)."""
    if n < 4:
        raise DomainError("need at least 4 cells")
    uniform = R / n
    w_last = min(r_D / 4.0, uniform)
    if w_last >= uniform * (1.0 - 1e-12):
        return np.linspace(0.0, R, n + 1)

    # widths w_last * g^k from the boundary inward must sum to R
    def total(g):
        return w_last * (g**n - 1.0) / (g - 1.0) - R

    lo, hi = 1.0 + 1e-12, 2.0
    while total(hi) < 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise NumericalError("grid grading failed to bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    g = 0.5 * (lo + hi)
    widths = w_last * g ** np.arange(n)
    edges = np.concatenate(([0.0], np.cumsum(widths[::-1])))
    edges *= R / edges[-1]
    return edges


def refine_edges(edges):
    """Split every cell at its midpoint (dyadic refinement, nested spaces)."""
    edges = np.asarray(edges, dtype=float)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return np.sort(np.concatenate((edges, mids)))


def _coulomb_matrix(edges, eps0):
    """Exact shell-shell interaction: V[k,l] = Int_Ck Int_Cl dq dq' / (4*pi*eps0*max(s,t))
    for unit densities; symmetric positive definite."""
    a, b = edges[:-1], edges[1:]
    m3 = (b**3 - a**3) / 3.0  # Int s^2 ds over the cell
    m2 = (b**2 - a**2) / 2.0  # Int s ds over the cell
    # off-diagonal: the inner cell contributes m3, the outer cell m2
    idx = np.arange(a.size)
    V = np.where(idx[:, None] < idx[None, :], np.outer(m3, m2), np.outer(m2, m3))
    diag = 2.0 / 3.0 * ((b**5 - a**5) / 5.0 - a**3 * (b**2 - a**2) / 2.0)
    np.fill_diagonal(V, diag)
    return 4.0 * math.pi / eps0 * V


def solve_screened_ball(spec: DropletSpec, edges):
    """Minimize the screened functional on the given radial cell edges.

    Returns (profile, energies, lagrange_multiplier); the multiplier is the
    constant cell-averaged potential plus penalty gradient.

    The quadratic program is solved in the natural units R = Q = eps0 = 1
    (SI coefficients spread over ~30 decades and would swamp the condition
    estimate), via one Cholesky solve of the SPD Hessian: the minimizer is
    rho = lambda * H^-1 vol with lambda fixed by the charge constraint.
    """
    if spec.liquid.epsilon_r != 1.0:
        raise DomainError(
            "screened-ball solver implements the epsilon_r = 1 case; "
            "set Liquid.epsilon_r = 1 and fold the dielectric constant into r_D")
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 5 or edges[0] != 0.0:
        raise DomainError("edges must be a 1-d array starting at 0")
    if np.any(np.diff(edges) <= 0):
        raise DomainError("edges must be strictly increasing")
    eps0 = spec.constants.eps0
    R, Q = spec.radius_R, spec.charge_Q
    rdR = debye_radius(spec.liquid, spec.constants) / R

    xi = edges / R
    vol1 = 4.0 * math.pi / 3.0 * np.diff(xi**3)
    V1 = _coulomb_matrix(xi, 1.0)
    H1 = V1 + np.diag(rdR**2 * vol1)

    try:
        chol = cho_factor(H1, lower=True)
    except Exception as exc:
        raise NumericalError(f"screened Hessian failed to factor: {exc}") from exc
    rcond, info = lapack.dpocon(chol[0], float(np.linalg.norm(H1, 1)), uplo="L")
    if info != 0 or rcond == 0.0 or 1.0 / max(rcond, 1e-300) > _MAX_CONDITION:
        raise NumericalError(
            f"screened system ill-conditioned (cond ~ {1.0 / max(rcond, 1e-300):.2e}); "
            "try a finer or coarser grid")
    y = cho_solve(chol, vol1)
    lam1 = 1.0 / float(vol1 @ y)  # scaled total charge is 1
    rho1 = lam1 * y

    e_unit = Q**2 / (eps0 * R)
    electro = 0.5 * float(rho1 @ V1 @ rho1) * e_unit
    entropic = 0.5 * rdR**2 * float(rho1**2 @ vol1) * e_unit
    profile = RadialChargeProfile(grid=0.5 * (edges[:-1] + edges[1:]),
                                  rho=rho1 * Q / R**3, edges=edges)
    lam = lam1 * Q / (eps0 * R)
    return profile, ScreenedEnergyResult(electro, entropic, electro + entropic), lam


def minimize_screened_ball(spec: DropletSpec, n_grid=512):
    """Screened minimizer on a boundary-graded grid of n_grid cells.

    Returns (RadialChargeProfile, ScreenedEnergyResult).
    """
    if n_grid < 64:
        raise DomainError("need n_grid >= 64")
    r_D = debye_radius(spec.liquid, spec.constants)
    edges = boundary_graded_edges(spec.radius_R, r_D, n_grid)
    profile, result, _ = solve_screened_ball(spec, edges)
    return profile, result


def screened_vs_conductor_gap(spec: DropletSpec, n_grid=512):
    """Relative excess (electrostatic - conductor) / conductor, always >= 0.

    Tends to 0 for strong screening (r_D << R) and to 1/5 for weak screening
    (uniform-ball limit).
    """
    _, result = minimize_screened_ball(spec, n_grid)
    conductor = spec.charge_Q**2 / (8.0 * math.pi * spec.constants.eps0 * spec.radius_R)
    return (result.electrostatic - conductor) / conductor


def cell_average_potential(profile: RadialChargeProfile, spec: DropletSpec):
    """Volume-averaged electrostatic potential per cell, exact for the
    piecewise-constant density (V @ rho normalized by cell volume)."""
    V = _coulomb_matrix(profile.edges, spec.constants.eps0)
    return (V @ profile.rho) / profile.cell_volumes


def gradient_form_energy(profile: RadialChargeProfile, spec: DropletSpec,
                         n_quad=64):
    """Electrostatic energy via (eps0/2) * Int |grad v|^2 as a cross-check.

    |grad v| = Q_enc(s) / (4*pi*eps0*s^2) with Q_enc exact for the cellwise
    density; integrated per cell with fixed Gauss rules plus the exact
    exterior tail.  Agrees with the (1/2) Int rho*v form up to quadrature
    error only, since both are exact in the continuum.
    """
    eps0 = spec.constants.eps0
    edges = profile.edges
    rho = profile.rho
    cum = np.concatenate(([0.0], np.cumsum(rho * np.diff(edges**3)))) * 4.0 * math.pi / 3.0

    def q_enc(s, k):
        return cum[k] + 4.0 * math.pi / 3.0 * rho[k] * (s**3 - edges[k] ** 3)

    x, w = np.polynomial.legendre.leggauss(n_quad)
    total = 0.0
    for k in range(rho.size):
        a, b = edges[k], edges[k + 1]
        s = 0.5 * (b - a) * x + 0.5 * (a + b)
        q = q_enc(s, k)
        total += 0.5 * (b - a) * float(np.sum(w * q**2 / s**2))
    Q = cum[-1]
    total += Q**2 / edges[-1]  # exterior tail: Int_R^inf Q^2/s^2 ds
    return total / (8.0 * math.pi * eps0)


def analytic_profile(spec: DropletSpec, s):
    """Continuum minimizer rho(s) = A*sinh(s/r_D)/s with A set by the charge.

    The Euler-Lagrange equation laplace(rho) = rho/r_D^2 inside the ball has
    this as its unique regular radial solution.
    """
    r_D = debye_radius(spec.liquid, spec.constants)
    R = spec.radius_R
    x = R / r_D
    norm = 4.0 * math.pi * r_D * (R * math.cosh(x) - r_D * math.sinh(x))
    A = spec.charge_Q / norm
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = s < 1e-12 * R
    out[~small] = A * np.sinh(s[~small] / r_D) / s[~small]
    out[small] = A / r_D
    return out
