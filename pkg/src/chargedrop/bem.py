"""Capacitance of axisymmetric conductors by a surface-charge ring-panel method.

The boundary is a surface of revolution described by a generating curve
(z, rho) from pole to pole in a meridian half-plane.  Each panel is a narrow
conical ring carrying uniform charge; enforcing unit potential at the panel
midpoints gives a dense collocation system whose solution sums to the
capacitance (C = total charge at 1 V).

Kernel: the potential of a unit ring of radius a at (rho, z) is
K(m) / (2*pi^2*eps0*sqrt((a+rho)^2 + dz^2)), m = 4*a*rho / ((a+rho)^2 + dz^2),
with K the complete elliptic integral of the first kind in the parameter
(m, not modulus k) convention.  The panel self-term integrates the kernel's
logarithmic singularity analytically over the panel width, K(m) ~
(1/2)*ln(16/(1-m)) near m = 1, leaving a smooth remainder handled by Gauss
quadrature.

This is the independent numerical check for every closed-form capacitance
in the library; spheres validate to ~0.1% at a few hundred panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve
from scipy.optimize import brentq, minimize_scalar

from .core import CODATA, PhysicalConstants
from .errors import DomainError, NumericalError

__all__ = [
    "complete_elliptic_K",
    "ring_potential",
    "GeneratingCurve",
    "Sphere",
    "ProlateSpheroid",
    "CappedCylinder",
    "SphereWithSpheroidBump",
    "generating_curve",
    "solve_ring_charges",
    "capacitance_of_curve",
    "capacitance",
    "equilibrium_energy",
    "load_generating_curve",
]

_GRADING_RATIO = 1.1  # geometric panel-growth factor away from fine features

# 8-point Gauss-Legendre rule on [0, 1]
_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)
_GAUSS_X = 0.5 * (_GAUSS_X + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


def complete_elliptic_K(m):
    """Complete elliptic integral of the first kind, parameter convention:
    K(m) = Int_0^{pi/2} dphi / sqrt(1 - m*sin^2(phi)).

    Evaluated by the arithmetic-geometric mean iteration to 1e-14 relative.
    Accepts scalars or arrays; requires 0 <= m < 1.
    """
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 0.0):
        raise DomainError("elliptic parameter m must be >= 0")
    if np.any(m_arr >= 1.0):
        raise DomainError("elliptic parameter m must be < 1 (K diverges at m=1)")
    a = np.ones_like(m_arr)
    b = np.sqrt(1.0 - m_arr)
    for _ in range(60):
        if np.all(np.abs(a - b) <= 1e-15 * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    out = math.pi / (2.0 * a) if m_arr.ndim == 0 else np.pi / (2.0 * a)
    return float(out) if np.isscalar(m) or m_arr.ndim == 0 else out


def ring_potential(ring_rho, ring_z, at_rho, at_z,
                   constants: PhysicalConstants = CODATA):
    """Potential per unit charge of a circular ring, evaluated off the ring.

    Reduces to 1/(4*pi*eps0*sqrt(ring_rho^2 + dz^2)) on the axis and to the
    monopole 1/(4*pi*eps0*d) in the far field; symmetric in source and
    target.  Coincident points are rejected (the self-term is handled by the
    panel assembly, not here).
    """
    if ring_rho < 0 or at_rho < 0:
        raise DomainError("ring and evaluation radii must be >= 0")
    denom = (ring_rho + at_rho) ** 2 + (ring_z - at_z) ** 2
    if denom == 0.0 or (ring_rho == at_rho and ring_z == at_z):
        raise DomainError("evaluation point coincides with the ring")
    m = 4.0 * ring_rho * at_rho / denom
    return complete_elliptic_K(m) / (2.0 * math.pi**2 * constants.eps0 * math.sqrt(denom))


@dataclass(frozen=True)
class GeneratingCurve:
    """Meridian boundary curve: ordered (z, rho) nodes from pole to pole."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2 or nodes.shape[0] < 3:
            raise DomainError("GeneratingCurve needs >= 3 (z, rho) node pairs")
        object.__setattr__(self, "nodes", nodes)
        rho = nodes[:, 1]
        if np.any(rho < 0):
            raise DomainError("rho must be >= 0 everywhere on the curve")
        if rho[0] != 0.0 or rho[-1] != 0.0:
            raise DomainError("curve must start and end on the axis (rho = 0)")
        seg = np.diff(nodes, axis=0)
        if np.any(np.hypot(seg[:, 0], seg[:, 1]) == 0.0):
            raise DomainError("arc length must be strictly increasing (zero-length segment)")

    @property
    def n_panels(self):
        return self.nodes.shape[0] - 1

    def validate_simple(self):
        """Reject self-intersecting curves (O(n^2) check, used on user input)."""
        from shapely.geometry import LineString

        if not LineString(self.nodes).is_simple:
            raise DomainError("generating curve self-intersects")

    def translated(self, dz):
        nodes = self.nodes.copy()
        nodes[:, 0] += dz
        return GeneratingCurve(nodes)

    def scaled(self, factor):
        if not factor > 0:
            raise DomainError("scale factor must be > 0")
        return GeneratingCurve(self.nodes * factor)

    def enclosed_volume(self):
        """Volume of the solid of revolution, pi * integral rho^2 dz."""
        z, rho = self.nodes[:, 0], self.nodes[:, 1]
        dz = np.diff(z)
        r0, r1 = rho[:-1], rho[1:]
        return abs(math.pi * float(np.sum(dz * (r0**2 + r0 * r1 + r1**2) / 3.0)))


@dataclass(frozen=True)
class Sphere:
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("Sphere.R must be > 0")


@dataclass(frozen=True)
class ProlateSpheroid:
    """Equatorial radius r, full height (major axis) h >= 2r along z."""

    r: float
    h: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError("ProlateSpheroid.r must be > 0")
        if self.h < 2.0 * self.r:
            raise DomainError("ProlateSpheroid needs h >= 2r")


@dataclass(frozen=True)
class CappedCylinder:
    """Cylinder of radius r with hemispherical caps, tip-to-tip length h."""

    r: float
    h: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError("CappedCylinder.r must be > 0")
        if not self.h > 2.0 * self.r:
            raise DomainError("CappedCylinder needs h > 2r")


@dataclass(frozen=True)
class SphereWithSpheroidBump:
    """Ball of radius R with a prolate spheroid (r, h) tangent at its north pole.

    The touching point is a corner the panel method cannot resolve, so the
    junction is blended by a circular fillet of radius fillet_ratio * r,
    making the surface C^{1,1}.  The fillet adds a sliver of material, so the
    meshed body contains the touching union.
    """

    R: float
    r: float
    h: float
    fillet_ratio: float = 0.25

    def __post_init__(self):
        if not (self.R > 0 and self.r > 0):
            raise DomainError("SphereWithSpheroidBump needs R > 0 and r > 0")
        if self.h < 2.0 * self.r:
            raise DomainError("bump needs h >= 2r")
        if not 0 < self.fillet_ratio <= 1.0:
            raise DomainError("fillet_ratio must be in (0, 1]")
        if self.r >= self.R / 4:
            raise DomainError("bump must be small compared to the ball (r < R/4)")


def _graded_then_uniform(a, b, n, w0, ratio=_GRADING_RATIO):
    """n interval widths on [a, b]: geometric growth from w0, then uniform."""
    length = b - a
    if n < 1 or length <= 0:
        raise DomainError("grading needs n >= 1 and b > a")
    widths = []
    w = w0
    remaining = length
    while len(widths) < n:
        left = n - len(widths)
        if w * left >= remaining:
            widths.extend([remaining / left] * left)
            break
        widths.append(w)
        remaining -= w
        w *= ratio
    nodes = a + np.concatenate(([0.0], np.cumsum(widths)))
    nodes[-1] = b
    return nodes


def _symmetric_graded(a, b, n, w0, ratio=_GRADING_RATIO):
    """Nodes on [a, b] clustered at both ends; n is rounded up to even."""
    if n % 2:
        n += 1
    half = _graded_then_uniform(0.0, (b - a) / 2.0, n // 2, w0, ratio)
    left = a + half
    right = b - half[::-1][1:]
    return np.concatenate((left, right))


def _pin_poles(nodes):
    nodes[0, 1] = 0.0
    nodes[-1, 1] = 0.0
    return nodes


def _sphere_nodes(R, n):
    t = np.linspace(0.0, math.pi, n + 1)
    return _pin_poles(np.column_stack((-R * np.cos(t), R * np.sin(t))))


def _spheroid_nodes(r, h, n):
    t = np.linspace(0.0, math.pi, n + 1)
    return _pin_poles(np.column_stack((-(h / 2.0) * np.cos(t), r * np.sin(t))))


def _capped_cylinder_nodes(r, h, n):
    if n < 16:
        raise DomainError("capped cylinder needs >= 16 panels")
    n_cap = max(6, n // 8)
    n_cyl = n - 2 * n_cap
    zc = h / 2.0 - r  # cap centers at +-zc
    phi = np.linspace(0.0, math.pi / 2.0, n_cap + 1)
    bottom = np.column_stack((-zc - r * np.cos(phi), r * np.sin(phi)))
    w0 = r * (math.pi / 2.0) / n_cap  # continue at the cap panel scale
    z_mid = _symmetric_graded(-zc, zc, n_cyl, w0)
    middle = np.column_stack((z_mid[1:-1], np.full(z_mid.size - 2, r)))
    top = np.column_stack((zc + r * np.sin(phi), r * np.cos(phi)))
    return _pin_poles(np.vstack((bottom, middle, top)))


def _ellipse_point(t, r, a_e, z_e):
    return np.array([r * math.sin(t), z_e - a_e * math.cos(t)])  # (rho, z)


def _distance_to_ellipse(p_rho, p_z, r, a_e, z_e):
    """Unsigned distance from a meridian point to the spheroid boundary."""

    def d2(t):
        e_rho, e_z = _ellipse_point(t, r, a_e, z_e)
        return (p_rho - e_rho) ** 2 + (p_z - e_z) ** 2

    res = minimize_scalar(d2, bounds=(0.0, math.pi), method="bounded",
                          options={"xatol": 1e-14})
    return math.sqrt(res.fun), res.x


def _bump_fillet(shape: SphereWithSpheroidBump):
    """Tangency construction of the fillet: returns (theta1, t1, center, rf)."""
    R, r = shape.R, shape.r
    a_e = shape.h / 2.0
    z_e = R + a_e  # bottom tip of the spheroid touches the sphere pole
    rf = shape.fillet_ratio * r

    def gap(theta):
        c_rho = (R + rf) * math.sin(theta)
        c_z = (R + rf) * math.cos(theta)
        dist, _ = _distance_to_ellipse(c_rho, c_z, r, a_e, z_e)
        inside = (c_rho / r) ** 2 + ((c_z - z_e) / a_e) ** 2 < 1.0
        return (-dist if inside else dist) - rf

    theta1 = brentq(gap, 1e-9, math.pi / 2.0, xtol=1e-18, rtol=1e-15)
    c_rho = (R + rf) * math.sin(theta1)
    c_z = (R + rf) * math.cos(theta1)
    _, t1 = _distance_to_ellipse(c_rho, c_z, r, a_e, z_e)
    return theta1, t1, np.array([c_rho, c_z]), rf


def _bump_nodes(shape: SphereWithSpheroidBump, n):
    if n < 64:
        raise DomainError("sphere-with-bump needs >= 64 panels")
    R, r = shape.R, shape.r
    a_e = shape.h / 2.0
    z_e = R + a_e
    theta1, t1, center, rf = _bump_fillet(shape)

    n_fil = max(8, n // 16)
    n_sph = max(8, 2 * (n - n_fil) // 3)
    n_ell = max(8, n - n_fil - n_sph)

    # fillet arc from the sphere tangency to the spheroid tangency, swept
    # through the crevice (the side facing the contact point (0, R))
    p_sph = np.array([R * math.sin(theta1), R * math.cos(theta1)])
    p_ell = _ellipse_point(t1, r, a_e, z_e)
    phi_a = math.atan2(p_sph[1] - center[1], p_sph[0] - center[0])
    phi_b = math.atan2(p_ell[1] - center[1], p_ell[0] - center[0])
    phi_c = math.atan2(R - center[1], 0.0 - center[0])
    sweep = (phi_b - phi_a) % (2.0 * math.pi)
    if (phi_c - phi_a) % (2.0 * math.pi) > sweep:
        sweep -= 2.0 * math.pi
    phis = phi_a + sweep * np.linspace(0.0, 1.0, n_fil + 1)
    fillet = np.column_stack((center[0] + rf * np.cos(phis),
                              center[1] + rf * np.sin(phis)))
    if np.any(fillet[:, 0] <= 0.0):
        raise DomainError("fillet collapses onto the axis; increase fillet_ratio")

    w_fil = abs(sweep) * rf / n_fil
    # sphere section theta in [theta1, pi], clustered at the junction
    th = _graded_then_uniform(theta1, math.pi, n_sph, w_fil / R)
    sphere_part = np.column_stack((R * np.sin(th), R * np.cos(th)))[::-1]
    # spheroid section t in [t1, pi], clustered at the junction (speed ~ r there)
    speed = math.hypot(r * math.cos(t1), a_e * math.sin(t1))
    ts = _graded_then_uniform(t1, math.pi, n_ell, w_fil / speed)
    ell_part = np.column_stack((r * np.sin(ts), z_e - a_e * np.cos(ts)))

    rho_z = np.vstack((sphere_part[:-1], fillet, ell_part[1:]))
    nodes = np.column_stack((rho_z[:, 1], rho_z[:, 0]))  # -> (z, rho)
    nodes[0, 1] = 0.0
    nodes[-1, 1] = 0.0
    return nodes


def generating_curve(shape, n_panels) -> GeneratingCurve:
    """Discretize a shape family member into an n_panels generating curve.

    Mesh counts may be adjusted by a panel or two to satisfy per-section
    minima; GeneratingCurve.n_panels reports the actual count.
    """
    if n_panels < 16:
        raise DomainError("need n_panels >= 16")
    if isinstance(shape, Sphere):
        return GeneratingCurve(_sphere_nodes(shape.R, n_panels))
    if isinstance(shape, ProlateSpheroid):
        return GeneratingCurve(_spheroid_nodes(shape.r, shape.h, n_panels))
    if isinstance(shape, CappedCylinder):
        return GeneratingCurve(_capped_cylinder_nodes(shape.r, shape.h, n_panels))
    if isinstance(shape, SphereWithSpheroidBump):
        return GeneratingCurve(_bump_nodes(shape, n_panels))
    raise DomainError(f"unknown shape family: {shape!r}")


def _assemble(curve: GeneratingCurve, constants: PhysicalConstants):
    """Collocation matrix: A[i, j] = potential at midpoint i per unit charge
    on panel j.  Off-diagonal entries treat the source panel as a ring at its
    midpoint; the diagonal integrates the log singularity analytically plus a
    Gauss-quadrature smooth remainder."""
    nodes = curve.nodes
    z0, rho0 = nodes[:-1, 0], nodes[:-1, 1]
    z1, rho1 = nodes[1:, 0], nodes[1:, 1]
    zm, rm = 0.5 * (z0 + z1), 0.5 * (rho0 + rho1)
    w = np.hypot(z1 - z0, rho1 - rho0)

    denom = (rm[:, None] + rm[None, :]) ** 2 + (zm[:, None] - zm[None, :]) ** 2
    m = 4.0 * rm[:, None] * rm[None, :] / denom
    np.fill_diagonal(m, 0.0)
    A = complete_elliptic_K(m) / (2.0 * math.pi**2 * constants.eps0 * np.sqrt(denom))

    pref = 1.0 / (4.0 * math.pi**2 * constants.eps0 * rm)
    diag = pref * (np.log(16.0 * rm / w) + 1.0)
    # smooth remainder: ring kernel along the panel minus its log model
    for g, wt in zip(_GAUSS_X, _GAUSS_W):
        rho_g = rho0 + g * (rho1 - rho0)
        z_g = z0 + g * (z1 - z0)
        d = (rho_g + rm) ** 2 + (z_g - zm) ** 2
        m_g = np.minimum(4.0 * rho_g * rm / d, 1.0 - 1e-15)
        kern = complete_elliptic_K(m_g) / (2.0 * math.pi**2 * constants.eps0 * np.sqrt(d))
        log_model = pref * np.log(8.0 * rm / (np.abs(g - 0.5) * w))
        diag = diag + wt * (kern - log_model)
    np.fill_diagonal(A, diag)
    return A, zm, rm, w


def solve_ring_charges(curve: GeneratingCurve,
                       constants: PhysicalConstants = CODATA):
    """Ring charges producing unit potential on the surface.

    Returns (charges, matrix, midpoints, widths); charges sum to the
    capacitance in farads.
    """
    A, zm, rm, w = _assemble(curve, constants)
    if not np.all(np.isfinite(A)):
        raise NumericalError("collocation matrix contains non-finite entries")
    try:
        lu, piv = lu_factor(A)
    except Exception as exc:  # LinAlgError: exactly singular
        raise NumericalError(f"singular collocation system: {exc}") from exc
    anorm = float(np.linalg.norm(A, 1))
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    if info != 0 or rcond == 0.0 or not np.isfinite(rcond):
        raise NumericalError(
            f"collocation system numerically singular (rcond={rcond!r})")
    q = lu_solve((lu, piv), np.ones(A.shape[0]))
    return q, A, np.column_stack((zm, rm)), w


def capacitance_of_curve(curve: GeneratingCurve,
                         constants: PhysicalConstants = CODATA):
    """Capacitance in farads of the conductor bounded by the curve."""
    q, _, _, _ = solve_ring_charges(curve, constants)
    return float(np.sum(q))


def capacitance(shape, n_panels, constants: PhysicalConstants = CODATA):
    """Capacitance of a shape-family member at the given panel resolution."""
    return capacitance_of_curve(generating_curve(shape, n_panels), constants)


def equilibrium_energy(shape, Q, n_panels, constants: PhysicalConstants = CODATA):
    """Electrostatic energy Q^2 / (2*C) of the charged conductor, in joules."""
    return Q**2 / (2.0 * capacitance(shape, n_panels, constants))


def load_generating_curve(path) -> GeneratingCurve:
    """Read a two-column (z, rho) meridian curve; '#' starts a comment.

    Raises DomainError naming the offending line on malformed input, and
    validates axis endpoints, monotone arc length and simplicity.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.replace(",", " ").split()
            if len(parts) != 2:
                raise DomainError(
                    f"{path}:{lineno}: expected two columns (z rho), got {raw.strip()!r}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise DomainError(
                    f"{path}:{lineno}: could not parse numbers from {raw.strip()!r}") from None
    if len(rows) < 3:
        raise DomainError(f"{path}: need at least 3 curve nodes")
    try:
        curve = GeneratingCurve(np.array(rows))
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc
    curve.validate_simple()
    return curve
