"""Property-test oracles for the explicit-constant periodic inequalities.

Each oracle evaluates both sides of one inequality on a discrete periodic
sample and reports (lhs, rhs, holds).  Derivatives are spectral, matching the
main pipeline, so a failure localises an implementation bug rather than
quadrature noise; a relative slack of 1e-9 (plus a roundoff floor) absorbs
floating-point error.  Since the inequalities are theorems, `holds` must come
back True on every generated instance.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curve import _trig_eval, compute_frame, invert_weighted_param, minkowski_length
from .errors import NoZero

REL_SLACK = 1e-9


@dataclass(frozen=True)
class PeriodicSample:
    """Real values on a uniform grid over one period."""

    values: np.ndarray
    period: float

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        m = len(vals)
        if vals.ndim != 1 or m < 32 or (m & (m - 1)) != 0:
            raise ValueError(f"need a 1-d sample with M a power of two >= 32, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sample contains non-finite values")
        if not self.period > 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "period", float(self.period))


class InequalityResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _deriv(values, period, order):
    m = len(values)
    k = np.fft.fftfreq(m, d=1.0 / m)
    mult = (1j * k * (2.0 * np.pi / period)) ** order
    if order % 2 == 1:
        mult[m // 2] = 0.0
    return np.fft.ifft(np.fft.fft(values) * mult).real


def _integral(values, period):
    return float(np.mean(values)) * period


def _result(lhs, rhs, scale):
    slack = REL_SLACK * abs(rhs) + 1e-14 * scale
    return InequalityResult(float(lhs), float(rhs), bool(lhs <= rhs + slack))


def poincare_check(f):
    """Mean-zero Poincare inequality: int f^2 <= (P^2 / 4 pi^2) int f_x^2.

    Saturated exactly by the lowest harmonic A cos(2 pi x / P) + B sin(...).
    """
    g = f.values - np.mean(f.values)
    gx = _deriv(g, f.period, 1)
    lhs = _integral(g * g, f.period)
    rhs = f.period**2 / (4.0 * np.pi**2) * _integral(gx * gx, f.period)
    return _result(lhs, rhs, max(lhs, rhs, 1e-30))


def sup_bound_check(f):
    """Sup-norm bound for mean-zero f: (max |f|)^2 <= (P / 2 pi) int f_x^2."""
    g = f.values - np.mean(f.values)
    gx = _deriv(g, f.period, 1)
    lhs = float(np.max(np.abs(g))) ** 2
    rhs = f.period / (2.0 * np.pi) * _integral(gx * gx, f.period)
    return _result(lhs, rhs, max(lhs, rhs, 1e-30))


def wirtinger_check(f, zero_point_index):
    """Wirtinger: if f vanishes somewhere, int f^2 <= (P / pi)^2 int f_x^2.

    The hypothesis is structural: the input must genuinely vanish at the
    declared grid index (the mean is NOT removed here).
    """
    vals = f.values
    fmax = float(np.max(np.abs(vals)))
    if fmax > 0.0 and abs(float(vals[zero_point_index])) > 1e-12 * fmax:
        raise NoZero(
            f"f[{zero_point_index}] = {vals[zero_point_index]:.3e} is not a zero "
            f"(max |f| = {fmax:.3e})"
        )
    fx = _deriv(vals, f.period, 1)
    lhs = _integral(vals * vals, f.period)
    rhs = (f.period / np.pi) ** 2 * _integral(fx * fx, f.period)
    return _result(lhs, rhs, max(lhs, rhs, 1e-30))


def interpolation_check(f, m, l):
    """Derivative interpolation for mean-zero f and 1 <= m < l <= 5:

    int f_{x^m}^2 <= (int f^2)^{1 - m/l} (int f_{x^l}^2)^{m/l};
    any single harmonic saturates it.
    """
    if not 1 <= m < l <= 5:
        raise ValueError(f"need 1 <= m < l <= 5, got m={m}, l={l}")
    g = f.values - np.mean(f.values)
    gm = _deriv(g, f.period, m)
    gl = _deriv(g, f.period, l)
    lhs = _integral(gm * gm, f.period)
    low = _integral(g * g, f.period)
    high = _integral(gl * gl, f.period)
    rhs = low ** (1.0 - m / l) * high ** (m / l)
    return _result(lhs, rhs, max(lhs, rhs, 1e-30))


def epsilon_interpolation_check(f, m, eps, l_curve, kosc):
    """Epsilon-split interpolation for a curvature-deviation field:

    int f_{x^m}^2 <= eps L^2 int f_{x^{m+1}}^2 + kosc / (4 eps^m L^{2m+1}).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    gm = _deriv(f.values, f.period, m)
    gm1 = _deriv(f.values, f.period, m + 1)
    lhs = _integral(gm * gm, f.period)
    rhs = (
        eps * l_curve**2 * _integral(gm1 * gm1, f.period)
        + kosc / (4.0 * eps**m * l_curve ** (2 * m + 1))
    )
    return _result(lhs, rhs, max(lhs, rhs, 1e-30))


def curvature_deviation_sample(state, ind):
    """kappa - kappa_bar resampled to a uniform arclength grid.

    Returns (sample, length, kosc): the field as a PeriodicSample with period
    equal to the anisotropic length, ready for the epsilon interpolation
    oracle.
    """
    frame = compute_frame(state, ind)
    length = minkowski_length(state, ind, frame)
    m = len(frame.w)
    targets = length * np.arange(m) / m
    u_star = invert_weighted_param(frame.w, targets)
    kappa_bar = float(np.mean(frame.kappa * frame.w)) * 2.0 * np.pi / length
    dev = _trig_eval(frame.kappa - kappa_bar, u_star)
    dev = dev - np.mean(dev)
    sample = PeriodicSample(values=dev, period=length)
    kosc = length * _integral(dev * dev, length)
    return sample, length, kosc


def random_trig_polynomial(rng, m=128, period=2.0 * np.pi, max_harmonic=10,
                           amplitude=1.0, zero_mean=True):
    """Band-limited random sample: iid normal coefficients up to max_harmonic."""
    x = period * np.arange(m) / m
    vals = np.zeros(m)
    if not zero_mean:
        vals += amplitude * rng.standard_normal()
    for k in range(1, max_harmonic + 1):
        a, b = amplitude * rng.standard_normal(2)
        arg = 2.0 * np.pi * k * x / period
        vals += a * np.cos(arg) + b * np.sin(arg)
    return PeriodicSample(values=vals, period=period)


def run_suite(seed, count=1000, m=128):
    """Randomized pass/fail table over all five oracles.

    Returns a list of dicts with name, instances, failures and the worst
    relative margin max((lhs - rhs) / max(lhs, rhs, 1)).
    """
    rng = np.random.default_rng(seed)
    rows = []

    def tally(name, results):
        failures = sum(0 if r.holds else 1 for r in results)
        worst = max((r.lhs - r.rhs) / max(r.lhs, r.rhs, 1.0) for r in results)
        rows.append({"name": name, "instances": len(results), "failures": failures,
                     "worst_margin": worst})

    periods = [2.0 * np.pi, 1.0, 5.0]

    results = []
    for i in range(count):
        f = random_trig_polynomial(rng, period=periods[i % 3])
        results.append(poincare_check(f))
    tally("poincare", results)

    results = []
    for i in range(count):
        f = random_trig_polynomial(rng, period=periods[i % 3])
        results.append(sup_bound_check(f))
    tally("sup_bound", results)

    results = []
    for i in range(count):
        g = random_trig_polynomial(rng, period=periods[i % 3], zero_mean=False)
        idx = int(rng.integers(0, len(g.values)))
        shifted = g.values - g.values[idx]
        f = PeriodicSample(values=shifted, period=g.period)
        results.append(wirtinger_check(f, idx))
    tally("wirtinger", results)

    results = []
    for i in range(count):
        f = random_trig_polynomial(rng, period=periods[i % 3])
        for l in range(2, 5):
            for mm in range(1, l):
                results.append(interpolation_check(f, mm, l))
    tally("interpolation", results)

    results = []
    for i in range(count):
        f = random_trig_polynomial(rng, period=periods[i % 3])
        kosc = f.period * _integral(f.values**2, f.period)
        eps = float(10.0 ** rng.uniform(-2.0, 1.0))
        mm = int(rng.integers(1, 4))
        results.append(epsilon_interpolation_check(f, mm, eps, f.period, kosc))
    tally("epsilon_interpolation", results)

    return rows
