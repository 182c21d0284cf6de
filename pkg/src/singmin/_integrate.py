"""Quadrature helpers: panelled Gauss-Legendre cumulatives and singular ends.

The second-derivative profiles are piecewise: exact powers, exact zeros, and
smooth-but-steep pieces built from phi''.  Their antiderivatives are needed
at machine accuracy and at many abscissas, so each piece integrates either
in closed form or over graded Gauss-Legendre panels whose size shrinks
toward the profile endpoints where phi'' steepens.
"""

import numpy as np
from scipy.integrate import quad

_GL_N = 24
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_N)


def graded_panels(lo, hi, steep_points=(0.0, 2.0), frac=0.25, max_len=0.05):
    """Panel edges on [lo, hi], shrinking toward the listed steep points."""
    edges = [lo]
    a = lo
    while a < hi - 1e-15:
        dist = min(abs(a - s) for s in steep_points)
        step = max(frac * dist, 1e-7)
        a = min(a + min(step, max_len), hi)
        edges.append(a)
    return np.asarray(edges)


def gl_panel(fn, a, b):
    """Gauss-Legendre integral of fn over [a, b] (b may be an array)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[..., None] + half[..., None] * _GL_X
    vals = fn(nodes.reshape(-1)).reshape(nodes.shape)
    return (vals * _GL_W).sum(axis=-1) * half


def quad_tight(fn, a, b, singular_origin=False):
    """Adaptive quadrature at 1e-12 absolute tolerance.

    With singular_origin=True an endpoint at 0 is handled through the
    substitution t = s^2, which removes integrable t^{-1/2} blow-ups.
    """
    if a == b:
        return 0.0
    if singular_origin and min(a, b) == 0.0:
        sign = 1.0
        if b < a:
            a, b = b, a
            sign = -1.0
        val, _ = quad(lambda s: 2.0 * s * fn(s * s), np.sqrt(a), np.sqrt(b),
                      epsabs=1e-12, epsrel=1e-12, limit=400)
        return sign * val
    val, _ = quad(fn, a, b, epsabs=1e-12, epsrel=1e-12, limit=400)
    return val
