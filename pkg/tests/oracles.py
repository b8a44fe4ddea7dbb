"""Independent reference computations used by the test suite.

Everything here deliberately avoids the package's own quadrature path:
values come from mpmath (tanh-sinh / Gauss-Legendre at >= 30 significant
digits) over explicit half-period panels, or from closed forms.
"""

import mpmath as mp


def mp_quad_panels(f, a, b, omega=0.0, dps=40):
    """Extended-precision quadrature with half-period panelling.

    When ``omega`` > 0 the interval is split so no panel spans more than
    pi/omega, which keeps mpmath's fixed rules honest on oscillatory
    integrands (>= 32 nodes per panel at this precision).
    """
    with mp.workdps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        if omega > 0.0:
            n = int(mp.ceil((b - a) * omega / mp.pi))
            n = max(n, 1)
        else:
            n = 1
        pts = [a + (b - a) * k / n for k in range(n + 1)]
        return mp.quad(f, pts)


def mp_weight_tail(t, p, lo, hi=None, dps=40):
    """integral of (1+r^2)^(-t) r^p over [lo, hi] (hi=None -> infinity)."""
    with mp.workdps(dps):
        f = lambda r: (1 + r * r) ** (-mp.mpf(t)) * r ** mp.mpf(p)
        upper = mp.inf if hi is None else mp.mpf(hi)
        mid = max(2 * float(lo), float(lo) + 1.0)
        return mp.quad(f, [mp.mpf(lo), mp.mpf(mid), upper])


def mp_symbols(r, dps=40):
    """High-precision (a, b, g, b - r, 1/b - 1/r) from the raw formulas."""
    with mp.workdps(dps):
        rm = mp.mpf(r)
        lg = mp.log(1 + rm * rm)
        a = lg / 2
        g = lg * lg / (4 * rm * rm)
        b = rm * mp.sqrt(1 - g)
        return a, b, g, b - rm, 1 / b - 1 / rm
