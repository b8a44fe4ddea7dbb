"""Frequency-domain symbols of the log-damped wave operator.

The mode at radius r = |xi| solves  v'' + 2*a(r)*v' + r^2*v = 0  with

    a(r) = log(1 + r^2) / 2          (damping symbol)
    b(r) = r * sqrt(1 - g(r))        (oscillation symbol)
    g(r) = log^2(1 + r^2) / (4 r^2)

so the characteristic roots are lambda_pm = -a +/- i*b and a^2 + b^2 = r^2
exactly.  Everything here is evaluated in forms that stay accurate near
r = 0, where the naive 4r^2 - log^2(1+r^2) loses half the significand:
g uses a Taylor series below r = 1e-4, and the differences b - r and
1/b - 1/r are computed from g without subtraction of close quantities.

All functions accept scalars or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this radius g is evaluated by series; the first dropped term is
# < 1e-20 relative, far below double precision.
G_SERIES_CUT = 1e-4


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("radius must be finite and >= 0")
    return arr


@dataclass(frozen=True)
class SymbolValues:
    """All symbols and stable derived differences at one radius."""

    r: float
    a: float
    b: float
    g: float
    b_minus_r: float
    inv_b_minus_inv_r: float


def damping_a(r):
    """a(r) = log(1 + r^2)/2, via log1p."""
    r = _check_radius(r)
    out = 0.5 * np.log1p(r * r)
    return out if out.ndim else float(out)


def ratio_g(r):
    """g(r) = log^2(1+r^2)/(4r^2); series below r = 1e-4, 0 at r = 0.

    Series: with x = r^2,
    g = (x/4) * (1 - x + (11/12) x^2 - (5/6) x^3 + O(x^4)).
    """
    r = _check_radius(r)
    x = r * r
    small = r < G_SERIES_CUT
    series = 0.25 * x * (1.0 - x * (1.0 - x * (11.0 / 12.0 - x * (5.0 / 6.0))))
    xd = np.where(small, 1.0, x)  # dummy to keep the direct branch finite
    direct = np.log1p(xd) ** 2 / (4.0 * xd)
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def oscillation_b(r):
    """b(r) = r * sqrt(1 - g(r)); real since g < 1 everywhere."""
    r = _check_radius(r)
    out = r * np.sqrt(1.0 - ratio_g(r))
    return out if out.ndim else float(out)


def b_minus_r(r):
    """The difference b(r) - r = -r*g / (1 + sqrt(1-g)), always <= 0.

    This rewrite is exact and avoids the cancellation of b - r for small
    r, where both sides agree to leading order r^3/8.
    """
    r = _check_radius(r)
    g = ratio_g(r)
    out = -r * g / (1.0 + np.sqrt(1.0 - g))
    return out if out.ndim else float(out)


def inv_b_minus_inv_r(r):
    """1/b(r) - 1/r = g / (r * sqrt(1-g) * (1 + sqrt(1-g))), >= 0.

    Returns the limit value 0 at r = 0 (the quantity behaves like r/8
    there); callers multiply by factors that vanish fast enough.
    """
    r = _check_radius(r)
    g = ratio_g(r)
    sq = np.sqrt(1.0 - g)
    rd = np.where(r == 0.0, 1.0, r)
    out = np.where(r == 0.0, 0.0, g / (rd * sq * (1.0 + sq)))
    return out if out.ndim else float(out)


def eval_symbols(r: float) -> SymbolValues:
    """Evaluate every symbol at a single radius.

    Raises ValueError for negative or non-finite input.
    """
    rf = float(r)
    _check_radius(rf)
    return SymbolValues(
        r=rf,
        a=damping_a(rf),
        b=oscillation_b(rf),
        g=ratio_g(rf),
        b_minus_r=b_minus_r(rf),
        inv_b_minus_inv_r=inv_b_minus_inv_r(rf),
    )


def lambda_pm(r: float) -> tuple[complex, complex]:
    """Characteristic roots (-a + ib, -a - ib) of the mode equation."""
    s = eval_symbols(r)
    return complex(-s.a, s.b), complex(-s.a, -s.b)


def phi(x):
    """phi(x) = log(1+x)/(1+x) on x >= 0; maximized at x = e-1 with 1/e."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("phi requires finite x >= 0")
    out = np.log1p(arr) / (1.0 + arr)
    return out if out.ndim else float(out)


def locate_phi_max(lo: float = 0.0, hi: float = 10.0,
                   width: float = 1e-8) -> tuple[float, float]:
    """Golden-section bracket of the maximizer of phi on [lo, hi].

    Returns (left, right) with right - left <= width.  The bracket is
    reliable down to widths ~1e-7 where phi is still strictly concave
    above double-precision noise.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = phi(c), phi(d)
    while b - a > width:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = phi(d)
    return a, b


def g_peak() -> tuple[float, float]:
    """Radius and value of the global maximum of g(r).

    g rises from 0, peaks near r = 1.98 at about 0.162, and decays; in
    particular g < 1/4 everywhere (since log(1+r^2) <= r).
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.5, 8.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = ratio_g(c), ratio_g(d)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = ratio_g(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = ratio_g(d)
    rstar = 0.5 * (a + b)
    return rstar, ratio_g(rstar)


def g_level_radius(level: float) -> float | None:
    """Smallest r > 0 with g(r) = level, or None when g stays below.

    Useful for band-split radii defined by a smallness condition on g;
    since max g ~ 0.162, levels >= that return None and callers fall
    back to a fixed split.
    """
    if not (0.0 < level):
        raise ValueError("level must be positive")
    rpk, gmax = g_peak()
    if level >= gmax:
        return None
    lo, hi = 0.0, rpk
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ratio_g(mid) < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def eval_symbols_mp(r, dps: int = 30):
    """Extended-precision symbol evaluation (oracle mode).

    Returns a dict of mpmath values for a, b, g, b-r and 1/b-1/r at
    ``dps`` significant digits, computed from the defining formulas
    directly (no series, no stabilized rewrites), so it is an
    independent reference for the double-precision path.  Requires
    mpmath.
    """
    import mpmath as mp

    _check_radius(float(r))
    with mp.workdps(dps):
        rm = mp.mpf(r)
        if rm == 0:
            zero = mp.mpf(0)
            return {"a": zero, "b": zero, "g": zero,
                    "b_minus_r": zero, "inv_b_minus_inv_r": zero}
        lg = mp.log(1 + rm * rm)
        a = lg / 2
        g = lg * lg / (4 * rm * rm)
        b = rm * mp.sqrt(1 - g)
        return {"a": a, "b": b, "g": g,
                "b_minus_r": b - rm,
                "inv_b_minus_inv_r": 1 / b - 1 / rm}
