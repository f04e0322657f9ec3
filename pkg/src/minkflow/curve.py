"""Discrete closed curves and their Euclidean/Minkowski differential geometry.

Curves live on a uniform periodic parameter grid u_i = 2 pi i / M with M a
power of two, so all u-derivatives are discrete-Fourier spectral.  The frame
computation produces, per point: the Euclidean tangent/normal/curvature, the
tangent angle, the anisotropic tangent T = r tau and normal
N = -h_t tau + h n, the anisotropic curvature kappa = k (h + h_tt), and the
arclength weight w = |Gamma_u| / r so that d sigma = w du.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateTangent
from .indicatrix import radial, support_h

TWO_PI = 2.0 * np.pi


def _wavenumbers(m):
    """Signed integer frequencies in FFT bin order."""
    return np.fft.fftfreq(m, d=1.0 / m)


def _deriv_multiplier(m, order):
    """Spectral multiplier for d^order/du^order on an M-point periodic grid.

    The Nyquist bin is zeroed for odd orders (its first derivative is not
    representable on the grid); even orders keep the full (-k^2)^... factor.
    """
    k = _wavenumbers(m)
    mult = (1j * k) ** order
    if order % 2 == 1:
        mult[m // 2] = 0.0
    return mult


def spectral_deriv(values, order=1):
    """Spectral derivative along the periodic u-grid (period 2 pi)."""
    vals = np.asarray(values)
    mult = _deriv_multiplier(len(vals), order)
    out = np.fft.ifft(np.fft.fft(vals) * mult)
    if np.isrealobj(vals):
        return out.real
    return out


def spectral_antiderivative(values):
    """Antiderivative F with F(0) = 0 of a real periodic sample on [0, 2 pi).

    The mean of the input contributes a linear-in-u term; the oscillatory part
    integrates spectrally.
    """
    vals = np.asarray(values, dtype=float)
    m = len(vals)
    spec = np.fft.fft(vals)
    k = _wavenumbers(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        prim = np.where(k != 0.0, spec / (1j * k), 0.0)
    prim[m // 2] = 0.0
    periodic = np.fft.ifft(prim).real
    u = TWO_PI * np.arange(m) / m
    mean = spec[0].real / m
    return mean * u + periodic - periodic[0]


def _trig_resample(values, factor):
    """Evaluate the trigonometric interpolant on a grid refined by `factor`."""
    vals = np.asarray(values, dtype=float)
    m = len(vals)
    half = m // 2
    spec = np.fft.fft(vals)
    big = np.zeros(m * factor, dtype=complex)
    big[:half] = spec[:half]
    big[-(half - 1):] = spec[-(half - 1):]
    # split the Nyquist bin symmetrically so the upsampled signal stays real
    big[half] = 0.5 * spec[half]
    big[-half] = 0.5 * spec[half]
    return np.fft.ifft(big).real * factor


def _trig_eval(values, points):
    """Evaluate the trigonometric interpolant of a real sample at arbitrary u."""
    vals = np.asarray(values, dtype=float)
    m = len(vals)
    spec = np.fft.fft(vals)
    k = _wavenumbers(m)
    half = m // 2
    phases = np.exp(1j * np.outer(points, k))
    # real part of the Nyquist mode only (cos(M/2 u) interpolant convention)
    phases[:, half] = np.cos(half * np.asarray(points))
    return (phases @ spec).real / m


@dataclass(frozen=True)
class CurveState:
    """M material points of a closed curve on the uniform periodic grid."""

    points: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (M, 2), got {pts.shape}")
        m = pts.shape[0]
        if m < 16 or (m & (m - 1)) != 0:
            raise ValueError(f"M must be a power of two >= 16, got {m}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "time", float(self.time))

    @property
    def m(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class FrameData:
    """Per-point geometry derived from a CurveState and an indicatrix."""

    speed: np.ndarray      # |Gamma_u|
    tangent: np.ndarray    # Euclidean unit tangent tau, shape (M, 2)
    normal: np.ndarray     # Euclidean unit normal n (tau rotated by +pi/2)
    theta: np.ndarray      # unwrapped tangent angle
    k: np.ndarray          # Euclidean curvature
    w: np.ndarray          # |Gamma_u| / r(theta); d sigma = w du
    T: np.ndarray          # anisotropic tangent r tau
    N: np.ndarray          # anisotropic normal -h_t tau + h n
    kappa: np.ndarray      # anisotropic curvature k (h + h_tt)
    du: float


def compute_frame(state, ind):
    """Full frame via spectral differentiation of the point positions."""
    pts = state.points
    m = pts.shape[0]
    z = pts[:, 0] + 1j * pts[:, 1]
    zhat = np.fft.fft(z)
    z_u = np.fft.ifft(zhat * _deriv_multiplier(m, 1))
    z_uu = np.fft.ifft(zhat * _deriv_multiplier(m, 2))
    x_u, y_u = z_u.real, z_u.imag
    x_uu, y_uu = z_uu.real, z_uu.imag

    speed = np.hypot(x_u, y_u)
    if np.min(speed) < 1e-12 * np.mean(speed):
        raise DegenerateTangent(
            f"min |Gamma_u| = {np.min(speed):.3e} vs mean {np.mean(speed):.3e}"
        )
    tangent = np.column_stack([x_u / speed, y_u / speed])
    normal = np.column_stack([-tangent[:, 1], tangent[:, 0]])
    theta = np.unwrap(np.arctan2(y_u, x_u))
    k = (x_u * y_uu - y_u * x_uu) / speed**3

    r = radial(ind.spec, theta, 0)
    h = 1.0 / r
    h1 = support_h(ind, theta, 1)
    h2 = support_h(ind, theta, 2)
    w = speed * h
    big_t = r[:, None] * tangent
    big_n = -h1[:, None] * tangent + h[:, None] * normal
    kappa = k * (h + h2)
    return FrameData(
        speed=speed, tangent=tangent, normal=normal, theta=theta, k=k,
        w=w, T=big_t, N=big_n, kappa=kappa, du=TWO_PI / m,
    )


def sigma_integral(values, frame):
    """Integral of a per-point field against d sigma (periodic trapezoid)."""
    return float(np.mean(np.asarray(values) * frame.w)) * TWO_PI


def minkowski_length(state, ind, frame=None):
    """Total anisotropic length, the integral of d sigma."""
    frame = frame or compute_frame(state, ind)
    return float(np.mean(frame.w)) * TWO_PI


def enclosed_area(state):
    """Signed enclosed area -(1/2) closed-integral of (Gamma, n) ds.

    Evaluated as the Green's-theorem sum (1/2) integral of (x y_u - y x_u) du
    with spectral derivatives; equals the Euclidean area and is positive for
    positively oriented curves.
    """
    pts = state.points
    m = pts.shape[0]
    z = pts[:, 0] + 1j * pts[:, 1]
    z_u = np.fft.ifft(np.fft.fft(z) * _deriv_multiplier(m, 1))
    integrand = pts[:, 0] * z_u.imag - pts[:, 1] * z_u.real
    return 0.5 * float(np.mean(integrand)) * TWO_PI


def sigma_derivative(field, frame, order=1):
    """Repeated application of d/d sigma = w^{-1} d/du with spectral d/du."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    g = np.asarray(field, dtype=float)
    mult = _deriv_multiplier(len(g), 1)
    for _ in range(order):
        g = np.fft.ifft(np.fft.fft(g) * mult).real / frame.w
    return g


def centroid(state):
    """Area centroid of the enclosed region (shoelace moments)."""
    pts = state.points
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * np.sum(cross)
    cx = np.sum((x + xn) * cross) / (6.0 * a)
    cy = np.sum((y + yn) * cross) / (6.0 * a)
    return np.array([cx, cy])


def invert_weighted_param(weights, targets):
    """Parameters u* where the running integral of a weight hits each target.

    `weights` are strictly positive per-point du-densities g(u_i) on the
    uniform grid; G(u) = integral of g from 0 to u is inverted by bracketing
    on a refined grid followed by Newton steps, both on the trigonometric
    interpolant of g, so the result is spectrally consistent with the
    quadrature used everywhere else.
    """
    g = np.asarray(weights, dtype=float)
    m = len(g)
    factor = 8
    u_fine = TWO_PI * np.arange(m * factor) / (m * factor)
    cum_fine = _fine_cumulative(g, factor)
    total = float(np.mean(g)) * TWO_PI
    u_star = np.interp(targets, np.append(cum_fine, total), np.append(u_fine, TWO_PI))
    for _ in range(3):
        resid = _trig_eval_cumulative(g, u_star) - targets
        u_star = u_star - resid / np.maximum(_trig_eval(g, u_star), 1e-300)
    return u_star


def resample_uniform(state, ind):
    """Re-index the same image curve to uniform Euclidean arclength.

    The points are interpolated with a periodic cubic spline in u and
    re-evaluated at the parameters where the (spectrally computed) arclength
    function reaches j * L / M.  Enclosed area, length and time are preserved;
    only the parametrisation changes.
    """
    frame = compute_frame(state, ind)
    m = state.m
    u = TWO_PI * np.arange(m) / m
    total = float(np.mean(frame.speed)) * TWO_PI
    target = total * np.arange(m) / m
    u_star = invert_weighted_param(frame.speed, target)

    u_ext = np.append(u, TWO_PI)
    pts_ext = np.vstack([state.points, state.points[:1]])
    spline = CubicSpline(u_ext, pts_ext, axis=0, bc_type="periodic")
    new_pts = spline(np.mod(u_star, TWO_PI))
    return CurveState(points=new_pts, time=state.time)


def _fine_cumulative(weights, factor):
    """Running integral of the weight on a `factor`-refined u-grid, zero at 0."""
    m = len(weights)
    mean = float(np.mean(weights))
    per = _trig_resample(np.asarray(weights, dtype=float) - mean, factor)
    spec = np.fft.fft(per)
    k = _wavenumbers(m * factor)
    with np.errstate(divide="ignore", invalid="ignore"):
        prim = np.where(k != 0.0, spec / (1j * k), 0.0)
    prim[(m * factor) // 2] = 0.0
    periodic = np.fft.ifft(prim).real
    u_fine = TWO_PI * np.arange(m * factor) / (m * factor)
    return mean * u_fine + periodic - periodic[0]


def _trig_eval_cumulative(weights, points):
    """Running integral of the weight at arbitrary parameters."""
    vals = np.asarray(weights, dtype=float)
    m = len(vals)
    spec = np.fft.fft(vals)
    k = _wavenumbers(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        prim = np.where(k != 0.0, spec / (1j * k), 0.0)
    prim[m // 2] = 0.0
    mean = spec[0].real / m
    phases = np.exp(1j * np.outer(points, k))
    phases[:, m // 2] = np.cos((m // 2) * np.asarray(points))
    periodic = (phases @ prim).real / m
    offset = np.sum(prim).real / m  # periodic part at u = 0
    return mean * np.asarray(points) + periodic - offset
