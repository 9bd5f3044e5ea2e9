"""Deterministic bisection and golden-section helpers.

Kept separate from scipy's wrappers so the termination rules (relative
tolerances on the abscissa) are exactly the documented ones and results are
bit-reproducible across platforms.
"""

from __future__ import annotations

import math

from .errors import NumericalError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def bisect_root(f, a, b, rtol=1e-9, max_iter=200):
    """Root of f on [a, b] by plain bisection to relative tolerance rtol.

    Requires a sign change over the bracket; raises NumericalError otherwise.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NumericalError(
            f"no sign change on bracket [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}")
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if abs(b - a) <= rtol * max(abs(a), abs(b)):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def golden_max(f, a, b, xtol, max_iter=300):
    """Abscissa of the maximum of a unimodal f on [a, b], golden-section search.

    Terminates when the bracket width drops below xtol (absolute in the
    search coordinate; pass log-coordinates for a relative tolerance).
    """
    if not b > a:
        raise NumericalError("golden_max needs b > a")
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(max_iter):
        if h <= xtol:
            break
        if yc > yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + _INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + _INV_PHI * h
            yd = f(d)
    return c if yc > yd else d
