"""Scalar diagnostics and theorem-derived bounds along a flow.

Everything here is a pure function of a curve state (plus the unit circle of
the norm), evaluated with the sigma-weighted periodic trapezoid rule.
"""

import math
from dataclasses import dataclass

import numpy as np

from .curve import compute_frame, enclosed_area, sigma_derivative, sigma_integral
from .errors import InsufficientData

KOSC_FIT_FLOOR = 1e-13


@dataclass(frozen=True)
class MonitorRecord:
    """One row of per-sample diagnostics."""

    time: float
    L: float             # anisotropic length
    A: float             # enclosed area
    kappa_bar: float     # mean anisotropic curvature (1/L) integral kappa dsigma
    total_kappa: float   # integral kappa dsigma
    kosc: float          # L * integral (kappa - kappa_bar)^2 dsigma
    iso_ratio: float     # L^2 / (4 A A_iso)
    diss_norm: float     # integral kappa_{sigma^p}^2 dsigma
    kappa_l2: float      # integral kappa^2 dsigma
    convex: bool         # min kappa > 0 on the grid
    dt_used: float


def compute_monitors(state, ind, params, dt_used=0.0):
    """All diagnostics for one state; `params` is a FlowParams or a bare p."""
    p = params if isinstance(params, int) else params.p
    frame = compute_frame(state, ind)
    length = float(np.mean(frame.w)) * 2.0 * np.pi
    area = enclosed_area(state)
    total_kappa = sigma_integral(frame.kappa, frame)
    kappa_bar = total_kappa / length
    dev = frame.kappa - kappa_bar
    kosc = length * sigma_integral(dev * dev, frame)
    iso_ratio = length * length / (4.0 * area * ind.area_isoperimetrix)
    kp = sigma_derivative(frame.kappa, frame, p)
    diss_norm = sigma_integral(kp * kp, frame)
    kappa_l2 = sigma_integral(frame.kappa * frame.kappa, frame)
    return MonitorRecord(
        time=state.time,
        L=length,
        A=area,
        kappa_bar=kappa_bar,
        total_kappa=total_kappa,
        kosc=kosc,
        iso_ratio=iso_ratio,
        diss_norm=diss_norm,
        kappa_l2=kappa_l2,
        convex=bool(np.min(frame.kappa) > 0.0),
        dt_used=float(dt_used),
    )


def kosc_apriori_bound(record, initial, ind):
    """A-priori ceiling for the curvature oscillation at record's time.

    kosc(0) + 8 A_iso^2 ln(L(0) / L(t)); the oscillation can never exceed it
    while the flow stays smooth.
    """
    a_iso = ind.area_isoperimetrix
    return initial.kosc + 8.0 * a_iso * a_iso * math.log(initial.L / record.L)


def waiting_time_bound(p, a0, a_iso, i0):
    """Upper bound on how long the evolving curve can fail to be convex.

    8 A_iso^(p-1) A0^(p+1) / ((p+1) pi^(2p)) * (I0^(p+1) - 1) where I0 is the
    initial isoperimetric ratio.  Zero exactly when I0 = 1.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if a0 <= 0.0 or a_iso <= 0.0:
        raise ValueError("areas must be positive")
    if i0 < 1.0:
        raise ValueError(f"isoperimetric ratio must be >= 1, got {i0}")
    return (
        8.0 * a_iso ** (p - 1) * a0 ** (p + 1) / ((p + 1) * math.pi ** (2 * p))
        * (i0 ** (p + 1) - 1.0)
    )


def decay_rate_fit(samples):
    """Least-squares decay rate of a (time, kosc) tail.

    Fits ln(kosc) = a - rate * t over the samples with kosc above the float
    noise floor and returns (rate, r_squared).  Raises InsufficientData below
    ten usable samples.
    """
    usable = [(float(t), float(k)) for t, k in samples if k > KOSC_FIT_FLOOR]
    if len(usable) < 10:
        raise InsufficientData(f"{len(usable)} usable samples, need at least 10")
    t = np.array([s[0] for s in usable])
    y = np.log(np.array([s[1] for s in usable]))
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_res = float(np.sum(resid * resid))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(-slope), float(r_squared)
