"""The planar saddle w, its gradient curve, and the graph function phi.

w(x1, x2) = (x2^2 - x1^2) / sqrt(2 (x1^2 + x2^2)) is positively homogeneous
of degree one, so grad w is constant along rays and maps the punctured plane
onto a closed curve Gamma with four congruent arcs meeting at the cusp
points (+-1, +-1).  The top arc is the graph of an even, uniformly convex
function phi on [-1, 1], tangent to y = |x| at +-1, whose second derivative
blows up like sqrt(2/3) / sqrt(dist to the endpoint).

On the unit circle w restricts to g(theta) = -cos(2 theta)/sqrt(2) and the
top arc is parametrized by

    grad w(theta) = g (cos t, sin t) + g' (-sin t, cos t)
                  = (-cos t (1 + 2 sin^2 t), sin t (1 + 2 cos^2 t)) / sqrt(2)

for theta in [pi/4, 3 pi/4].  The abscissa is strictly increasing there, so
phi is evaluated by inverting it; derivatives follow by implicit
differentiation:

    phi'  = -cot(theta),      phi'' = -sqrt(2) / (3 sin^3(theta) cos(2 theta)).

Most of the downstream analysis happens near the left cusp in a frame
shifted by (1, -1) so that the cusp sits at the origin and phi is tangent to
y = -x there; the ``*_s`` helpers work in that frame on [0, 2].
"""

from dataclasses import dataclass, field

import numpy as np

from . import DomainError, SingularityError

SQRT2 = np.sqrt(2.0)
# Leading coefficient of the endpoint blow-up phi''(-1 + e) ~ CUSP_COEFF / sqrt(e).
CUSP_COEFF = np.sqrt(2.0 / 3.0)
# Next term of the same expansion, derived by carrying the theta series one
# order further: phi''(-1 + e) = CUSP_COEFF e^{-1/2} + CUSP_OFFSET + O(sqrt(e)).
CUSP_OFFSET = -16.0 / 9.0
# Below this distance to the cusp, implicit differentiation is replaced by
# the two-term expansion (the parametrization derivative vanishes there).
_CUSP_SWITCH = 1e-8

_THETA_LO = np.pi / 4.0
_THETA_HI = 3.0 * np.pi / 4.0


# ---------------------------------------------------------------------------
# w and its derivatives
# ---------------------------------------------------------------------------

def eval_w(x1, x2):
    """Value of the degree-one saddle w; rejects the origin."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    s = x1 * x1 + x2 * x2
    if np.any(s == 0.0):
        raise DomainError("w is undefined at the origin")
    return (x2 * x2 - x1 * x1) / np.sqrt(2.0 * s)


def grad_w(x1, x2):
    """Gradient (w_a, w_b); each component homogeneous of degree zero."""
    a = np.asarray(x1, dtype=float)
    b = np.asarray(x2, dtype=float)
    s = a * a + b * b
    if np.any(s == 0.0):
        raise DomainError("grad w is undefined at the origin")
    den = SQRT2 * s ** 1.5
    return -a * (a * a + 3.0 * b * b) / den, b * (3.0 * a * a + b * b) / den


def hess_w(x1, x2):
    """Second derivatives (w_aa, w_ab, w_bb), homogeneous of degree -1."""
    a = np.asarray(x1, dtype=float)
    b = np.asarray(x2, dtype=float)
    s = a * a + b * b
    if np.any(s == 0.0):
        raise DomainError("hess w is undefined at the origin")
    den = SQRT2 * s ** 2.5
    waa = 3.0 * b * b * (a * a - b * b) / den
    wab = 3.0 * a * b * (b * b - a * a) / den
    wbb = 3.0 * a * a * (a * a - b * b) / den
    return waa, wab, wbb


# ---------------------------------------------------------------------------
# circle values and the top-arc parametrization
# ---------------------------------------------------------------------------

def g_circle(theta, order=0):
    """Boundary values g(theta) = -cos(2 theta)/sqrt(2) and derivatives."""
    theta = np.asarray(theta, dtype=float)
    if order == 0:
        return -np.cos(2.0 * theta) / SQRT2
    if order == 1:
        return SQRT2 * np.sin(2.0 * theta)
    if order == 2:
        return 2.0 * SQRT2 * np.cos(2.0 * theta)
    raise ValueError("order must be 0, 1 or 2")


def _x_of_theta(theta):
    return -np.cos(theta) * (2.0 - np.cos(2.0 * theta)) / SQRT2


def _y_of_theta(theta):
    return np.sin(theta) * (2.0 + np.cos(2.0 * theta)) / SQRT2


def _dx_dtheta(theta):
    return -3.0 * np.sin(theta) * np.cos(2.0 * theta) / SQRT2


def _x_plus_one(t):
    """x(pi/4 + t) + 1 in a cancellation-free form (t >= 0 small)."""
    st = np.sin(t)
    return 2.0 * np.sin(0.5 * t) ** 2 + st * st * (st + np.cos(t))


def _dx_plus_one(t):
    return 3.0 * np.sin(_THETA_LO + t) * np.sin(2.0 * t) / SQRT2


def gamma_point(theta):
    """Point of the top arc at parameter theta in [pi/4, 3 pi/4]."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < _THETA_LO - 1e-12) or np.any(theta > _THETA_HI + 1e-12):
        raise DomainError("theta outside [pi/4, 3 pi/4]")
    return _x_of_theta(theta), _y_of_theta(theta)


def theta_of_x(x):
    """Invert the strictly increasing abscissa of the top arc.

    Hybrid scheme: table lookup plus Newton on x(theta) in the interior,
    and Newton in the cusp variable t = theta - pi/4 on the stable series
    form of x + 1 when 1 - |x| < 1e-6.  Root tolerance is at machine level
    (the iteration is run to stagnation, well below 1e-14).
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise DomainError("phi abscissa outside [-1, 1]")
    scalar = x.ndim == 0
    xa = np.atleast_1d(np.clip(x, -1.0, 1.0)).astype(float)

    # work on the left half: target -|x|, mirror at the end
    xt = -np.abs(xa)
    theta = np.interp(xt, _X_TABLE, _T_TABLE)
    # Newton on x(theta) is well conditioned away from the cusp, where
    # x'(theta) vanishes; within 1e-6 of it switch to the cusp variable.
    interior = 1.0 + xt > 1e-6
    near = ~interior
    for _ in range(6):
        th = theta[interior]
        theta[interior] = np.clip(
            th - (_x_of_theta(th) - xt[interior]) / _dx_dtheta(th),
            _THETA_LO, 0.5 * np.pi)
    if np.any(near):
        eps = 1.0 + xt[near]  # distance to the cusp, >= 0
        t = np.sqrt(2.0 * eps / 3.0)
        for _ in range(40):
            ft = _x_plus_one(t) - eps
            dft = _dx_plus_one(t)
            step = np.where(dft > 0.0, ft / np.where(dft > 0.0, dft, 1.0), 0.0)
            t = np.maximum(t - step, 0.0)
            if np.all(np.abs(step) <= 1e-17 + 1e-16 * t):
                break
        theta[near] = _THETA_LO + t
    # mirror to the right half; theta(-x) = pi - theta(x)
    theta = np.where(xa > 0.0, np.pi - theta, theta)
    return float(theta[0]) if scalar else theta.reshape(x.shape)


def phi(x, order=0):
    """Graph function of the top arc and its first two derivatives.

    order 0 and 1 are defined on [-1, 1]; order 2 blows up at the endpoints
    and raises SingularityError there.  Within 1e-8 of an endpoint the
    second derivative switches to the two-term cusp expansion.
    """
    x = np.asarray(x, dtype=float)
    if order == 0:
        val = _y_of_theta(np.asarray(theta_of_x(x)))
        return val if np.ndim(x) else float(val)
    if order == 1:
        theta = np.asarray(theta_of_x(x))
        val = -np.cos(theta) / np.sin(theta)
        return val if np.ndim(x) else float(val)
    if order != 2:
        raise ValueError("order must be 0, 1 or 2")
    eps = 1.0 - np.abs(x)
    if np.any(eps <= 0.0):
        raise SingularityError("phi'' blows up at x = +-1")
    scalar = x.ndim == 0
    xa = np.atleast_1d(x)
    eps = np.atleast_1d(eps)
    out = np.empty_like(np.asarray(xa, dtype=float))
    series = eps < _CUSP_SWITCH
    if np.any(series):
        out[series] = CUSP_COEFF / np.sqrt(eps[series]) + CUSP_OFFSET
    if np.any(~series):
        theta = np.asarray(theta_of_x(xa[~series]))
        out[~series] = -SQRT2 / (3.0 * np.sin(theta) ** 3 * np.cos(2.0 * theta))
    return float(out[0]) if scalar else out.reshape(x.shape)


def phi_third(x):
    """Third derivative of phi, by one more implicit differentiation."""
    x = np.asarray(x, dtype=float)
    if np.any(1.0 - np.abs(x) <= 0.0):
        raise SingularityError("phi''' blows up at x = +-1")
    theta = np.asarray(theta_of_x(x))
    s, c2 = np.sin(theta), np.cos(2.0 * theta)
    num = 3.0 * s * s * np.cos(theta) * c2 - 2.0 * s ** 3 * np.sin(2.0 * theta)
    dq = (SQRT2 / 3.0) * num / (s ** 6 * c2 * c2)
    val = dq / _dx_dtheta(theta)
    return val if np.ndim(x) else float(val)


def curvature(theta):
    """Curvature of the gradient curve at parameter theta.

    Equals 1/(g'' + g) up to orientation; reported positive, matching the
    upward normal on the top arc (the graph curvature
    phi'' / (1 + phi'^2)^{3/2} is then positive as well).
    """
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= _THETA_LO) or np.any(theta >= _THETA_HI):
        raise DomainError("theta outside the open arc (pi/4, 3 pi/4)")
    rad = g_circle(theta, 2) + g_circle(theta, 0)  # = 3 cos(2 theta)/sqrt(2)
    if np.any(rad == 0.0):
        raise SingularityError("curvature blows up at the cusps")
    val = np.abs(1.0 / rad)
    return val if np.ndim(theta) else float(val)


def graph_curvature(x):
    """phi'' / (1 + phi'^2)^{3/2}, the curvature of the graph of phi."""
    return phi(x, 2) / (1.0 + phi(x, 1) ** 2) ** 1.5


# ---------------------------------------------------------------------------
# shifted frame: cusp at the origin, phi_s tangent to y = -x
# ---------------------------------------------------------------------------

def phi_s(x, order=0):
    """phi in the frame shifted by (1, -1): domain [0, 2], phi_s(0) = 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.any(x > 2.0 + 1e-12):
        raise DomainError("shifted abscissa outside [0, 2]")
    if order == 0:
        return phi(x - 1.0, 0) - 1.0
    return phi(x - 1.0, order)


def phi_s_third(x):
    return phi_third(np.asarray(x, dtype=float) - 1.0)


def phi_s_plus_x(x):
    """phi_s(x) + x without cancellation: equals 2 sin^3(theta - pi/4).

    The combination measures the gap to the tangent line y = -x and is of
    order x^{3/2} near the cusp, far below the float resolution of the two
    separate terms.
    """
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta_of_x(x - 1.0))
    u = theta - _THETA_LO
    val = 2.0 * np.sin(u) ** 3
    return val if np.ndim(x) else float(val)


def barrier_gap(x):
    """Gap between the reflected tangent graph and the left arc (shifted frame).

    a(x) = -2x - phi_s(x) is the reflection of phi_s across its cusp tangent
    y = -x.  The left arc Gamma_2 runs from the cusp (0,0) down to (0,-2)
    with abscissas only in [0, 1 - 1/sqrt(2)], so it is parametrized here by
    depth: the point at ordinate -x is (1 - phi(1 - x), -x).  The returned
    value is the vertical distance from that point up to the graph of a,
    zero exactly at the cusp and positive for x in (0, 2] when the arc lies
    strictly below the reflected graph.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.any(x > 2.0 + 1e-12):
        raise DomainError("barrier gap defined on [0, 2]")
    xi = 1.0 - phi(1.0 - x, 0)
    a_xi = -2.0 * xi - phi_s(xi)
    val = a_xi + x
    return val if np.ndim(x) else float(val)


# ---------------------------------------------------------------------------
# branch tables
# ---------------------------------------------------------------------------

BRANCHES = ("gamma1", "gamma2", "gamma3", "gamma4")


def branch_point(branch, t):
    """Original-frame point of a branch at graph parameter t in [-1, 1].

    gamma1 = (t, phi(t)) top, gamma2 = (-phi(t), t) left,
    gamma3 = (t, -phi(t)) bottom, gamma4 = (phi(t), t) right.
    """
    t = np.asarray(t, dtype=float)
    p = phi(t, 0)
    if branch == "gamma1":
        return t, p
    if branch == "gamma2":
        return -p, t
    if branch == "gamma3":
        return t, -p
    if branch == "gamma4":
        return p, t
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled branch of the gradient curve.

    theta_table holds the top-arc parameter for gamma1 rows (monotone); the
    other branches carry the matching graph parameter instead, mapped
    through the branch symmetry.  coordinate_frame is 'original' or
    'shifted' (shifted = original translated by (1, -1)).
    """

    branch: str
    coordinate_frame: str
    theta_table: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)

    @staticmethod
    def build(branch="gamma1", n=512, coordinate_frame="original"):
        if coordinate_frame not in ("original", "shifted"):
            raise ValueError("frame must be 'original' or 'shifted'")
        theta = np.linspace(_THETA_LO, _THETA_HI, n)
        if branch == "gamma1":
            x, y = gamma_point(theta)
        else:
            t = np.linspace(-1.0, 1.0, n)
            x, y = branch_point(branch, t)
            theta = theta_of_x(np.asarray(t))
        if coordinate_frame == "shifted":
            x, y = x + 1.0, y - 1.0
        return ProfileCurve(branch, coordinate_frame, np.asarray(theta),
                            np.column_stack([x, y]))


def write_gamma_table(path, n=512):
    """CSV of all four branches (columns: branch, theta, x, y)."""
    rows = []
    for branch in BRANCHES:
        curve = ProfileCurve.build(branch, n)
        for th, (px, py) in zip(curve.theta_table, curve.points):
            rows.append(f"{branch},{th!r},{px!r},{py!r}")
    with open(path, "w") as fh:
        fh.write("branch,theta,x,y\n")
        fh.write("\n".join(rows) + "\n")


# monotone lookup table for theta_of_x, built once at import
_T_TABLE = np.linspace(_THETA_LO, 0.5 * np.pi, 4097)
_X_TABLE = _x_of_theta(_T_TABLE)
