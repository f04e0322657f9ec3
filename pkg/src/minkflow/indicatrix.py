"""The Minkowski unit circle and everything derived purely from it.

The unit circle of the plane's norm is a smooth, centrally symmetric, strictly
convex curve given in polar form by a radial function r(theta).  Central
symmetry is enforced structurally: r is an even-harmonic Fourier series, so
r(theta + pi) = r(theta) holds exactly and all theta-derivatives are exact.

The polar radial support function is h = 1/r.  Derived quantities housed here:
the isoperimetrix (the curve traced by the unit normal of the norm's unit
circle, which minimises boundary length at fixed enclosed area), its enclosed
area, the anisotropy factor Q = h^3 (h + h_thth), and the extrema of Q.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvex, NonPositiveRadius, OddHarmonic

DEFAULT_GRID = 4096

# Strictness floor for the convexity scan, relative to the margin's own scale.
# A margin that is zero up to roundoff is accepted; genuinely negative ones
# are rejected.
_MARGIN_RTOL = 1e-12


@dataclass(frozen=True)
class IndicatrixSpec:
    """Even-harmonic Fourier description of the radial function.

    cos_coeffs and sin_coeffs are sequences of (harmonic index, amplitude)
    pairs; every index must be an even integer >= 2.
    """

    constant_term: float
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", _normalize_coeffs(self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", _normalize_coeffs(self.sin_coeffs))


@dataclass(frozen=True)
class Indicatrix:
    """Validated unit circle with precomputed body constants.

    area_isoperimetrix is the enclosed area of the isoperimetrix, q_star and
    q_max the global extrema of the anisotropy factor Q, convexity_margin the
    grid minimum of r^2 + 2 r_t^2 - r r_tt.
    """

    spec: IndicatrixSpec
    grid_resolution: int
    area_isoperimetrix: float
    q_star: float
    q_max: float
    convexity_margin: float


def _normalize_coeffs(coeffs):
    out = []
    for item in coeffs:
        k, amp = item
        out.append((int(k), float(amp)))
    return tuple(sorted(out))


def radial(spec, theta, order=0):
    """r(theta) or its exact Fourier theta-derivative of the given order."""
    th = np.asarray(theta, dtype=float)
    out = np.zeros(th.shape)
    if order == 0:
        out += spec.constant_term
    shift = 0.5 * np.pi * order
    for k, a in spec.cos_coeffs:
        out += a * k**order * np.cos(k * th + shift)
    for k, b in spec.sin_coeffs:
        out += b * k**order * np.sin(k * th + shift)
    if np.isscalar(theta):
        return float(out)
    return out


def support_h(ind, theta, order=0):
    """Polar radial support function h = 1/r, or its first or second derivative.

    Closed-form quotient rules are used so no sampling or aliasing error
    enters: h_t = -r_t / r^2 and h_tt = (2 r_t^2 - r r_tt) / r^3.
    """
    spec = ind.spec if isinstance(ind, Indicatrix) else ind
    r = radial(spec, theta, 0)
    if order == 0:
        return 1.0 / r
    r1 = radial(spec, theta, 1)
    if order == 1:
        return -r1 / r**2
    if order == 2:
        r2 = radial(spec, theta, 2)
        return (2.0 * r1**2 - r * r2) / r**3
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


def anisotropy_Q(ind, theta):
    """Q(theta) = h^3 (h + h_tt), the parabolicity factor of the flow."""
    h = support_h(ind, theta, 0)
    h2 = support_h(ind, theta, 2)
    return h**3 * (h + h2)


def isoperimetrix_point(ind, theta):
    """Point of the isoperimetrix at parameter theta: -h_t tau + h n.

    Here tau = (cos theta, sin theta) and n = (-sin theta, cos theta).
    Returns an array of shape theta.shape + (2,).
    """
    th = np.asarray(theta, dtype=float)
    h = support_h(ind, th, 0)
    h1 = support_h(ind, th, 1)
    x = -h1 * np.cos(th) - h * np.sin(th)
    y = -h1 * np.sin(th) + h * np.cos(th)
    return np.stack([np.asarray(x), np.asarray(y)], axis=-1)


def isoperimetrix_area(ind, grid_resolution=None, by_parts=False):
    """Enclosed area of the isoperimetrix, (1/2) integral of h (h + h_tt).

    With by_parts=True the h_tt term is integrated by parts and the
    equivalent form (1/2) integral of (h^2 - h_t^2) is evaluated instead.
    Both use the composite trapezoidal rule on the periodic grid, which is
    spectrally accurate here.
    """
    n = grid_resolution or (ind.grid_resolution if isinstance(ind, Indicatrix) else DEFAULT_GRID)
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    h = support_h(ind, th, 0)
    if by_parts:
        h1 = support_h(ind, th, 1)
        integrand = h**2 - h1**2
    else:
        h2 = support_h(ind, th, 2)
        integrand = h * (h + h2)
    return 0.5 * float(np.mean(integrand)) * 2.0 * np.pi


def convexity_margin(spec, theta):
    """r^2 + 2 r_t^2 - r r_tt; positive iff the polar graph is strictly convex."""
    r = radial(spec, theta, 0)
    r1 = radial(spec, theta, 1)
    r2 = radial(spec, theta, 2)
    return r**2 + 2.0 * r1**2 - r * r2


def _golden_min(f, lo, hi, iterations=120):
    """Golden-section minimum of a smooth scalar function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return min(fc, fd, f(xm))


def _refined_extrema_Q(spec, grid):
    """Global min and max of Q: coarse grid scan plus golden-section polish.

    A plain grid minimum shifts by O(dtheta^2) under rotations of the spec;
    the local refinement makes the extrema rotation-invariant to roundoff.
    """
    th = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    q = anisotropy_Q(spec, th)
    dth = 2.0 * np.pi / grid

    def qfun(x):
        return float(anisotropy_Q(spec, x))

    i_min = int(np.argmin(q))
    q_min = _golden_min(qfun, th[i_min] - dth, th[i_min] + dth)
    i_max = int(np.argmax(q))
    q_max = -_golden_min(lambda x: -qfun(x), th[i_max] - dth, th[i_max] + dth)
    return min(q_min, float(q[i_min])), max(q_max, float(q[i_max]))


def build_indicatrix(spec, grid_resolution=DEFAULT_GRID):
    """Validate a spec and precompute the body constants.

    Raises OddHarmonic, NonPositiveRadius or NonConvex when the spec violates
    an invariant; ValueError for a too-coarse grid.
    """
    if grid_resolution < 64:
        raise ValueError(f"grid_resolution must be >= 64, got {grid_resolution}")
    if not np.isfinite(spec.constant_term) or spec.constant_term <= 0.0:
        raise NonPositiveRadius(f"constant term must be positive, got {spec.constant_term}")
    for k, amp in spec.cos_coeffs + spec.sin_coeffs:
        if k < 2 or k % 2 != 0:
            raise OddHarmonic(f"harmonic index {k} breaks central symmetry (need even, >= 2)")
        if not np.isfinite(amp):
            raise NonPositiveRadius(f"non-finite amplitude for harmonic {k}")

    th = np.linspace(0.0, 2.0 * np.pi, grid_resolution, endpoint=False)
    r = radial(spec, th, 0)
    if np.min(r) <= 0.0:
        raise NonPositiveRadius(
            f"radial function reaches {np.min(r):.6g} at theta = {th[int(np.argmin(r))]:.6g}"
        )

    margin = convexity_margin(spec, th)
    margin_min = float(np.min(margin))
    scale = float(np.max(r**2 + 2.0 * radial(spec, th, 1) ** 2 + np.abs(r * radial(spec, th, 2))))
    if margin_min <= -_MARGIN_RTOL * scale:
        raise NonConvex(
            f"curvature condition fails: min(r^2 + 2 r_t^2 - r r_tt) = {margin_min:.6g}"
        )

    area = isoperimetrix_area(spec, grid_resolution)
    area_bp = isoperimetrix_area(spec, grid_resolution, by_parts=True)
    if abs(area - area_bp) > 1e-9 * abs(area):
        raise NonConvex(
            f"quadrature forms of the isoperimetrix area disagree: {area!r} vs {area_bp!r}"
        )
    q_star, q_max = _refined_extrema_Q(spec, grid_resolution)
    return Indicatrix(
        spec=spec,
        grid_resolution=grid_resolution,
        area_isoperimetrix=area,
        q_star=q_star,
        q_max=q_max,
        convexity_margin=margin_min,
    )


def euclidean_indicatrix(grid_resolution=DEFAULT_GRID):
    """The ordinary Euclidean unit circle: r == 1."""
    return build_indicatrix(IndicatrixSpec(1.0), grid_resolution)


def circle_indicatrix(rho, grid_resolution=DEFAULT_GRID):
    """A round unit circle of Euclidean radius rho: r == rho."""
    return build_indicatrix(IndicatrixSpec(float(rho)), grid_resolution)
