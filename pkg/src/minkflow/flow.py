"""Time integration of the anisotropic polyharmonic curve flow.

The curve moves with anisotropic-normal speed (-1)^p kappa_{sigma^{2p}},
a flow of order 2(p+1); p = 1 is anisotropic curve diffusion.  Stepping is
classical explicit RK4 with a CFL-style dt recomputed every step, periodic
arclength resampling, and monitor-driven stopping/blowup detection.  The
order-(2p+2) stiffness makes dt scale like (min d sigma)^{2(p+1)}, so the
inner loop runs in a compiled kernel when available (see _backend).
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernel
from .curve import CurveState, compute_frame, enclosed_area, resample_uniform, sigma_derivative
from .errors import DegenerateTangent, InvalidInitialCurve
from .monitors import compute_monitors


@dataclass(frozen=True)
class FlowParams:
    """Flow order and step/stop policy.

    p = 0 (the anisotropic curve-shortening flow) is excluded: it does not
    preserve the enclosed area, so none of the monitored identities apply.
    """

    p: int = 1
    cfl_constant: float = 0.1
    dt_max: float = 1.0
    t_end: float = 1.0
    resample_every: int = 20
    monitor_every: int = 100
    stop_kosc: float | None = None
    blowup_kappa_l2: float | None = None

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 1:
            raise ValueError(f"p must be an integer >= 1, got {self.p}")
        if not 0.0 < self.cfl_constant <= 1.0:
            raise ValueError(f"cfl_constant must be in (0, 1], got {self.cfl_constant}")
        if self.dt_max <= 0.0:
            raise ValueError("dt_max must be positive")
        if self.t_end <= 0.0:
            raise ValueError("t_end must be positive")
        if self.resample_every < 1 or self.monitor_every < 1:
            raise ValueError("resample_every and monitor_every must be >= 1")
        if self.stop_kosc is not None and self.stop_kosc < 0.0:
            raise ValueError("stop_kosc must be nonnegative")
        if self.blowup_kappa_l2 is not None and self.blowup_kappa_l2 <= 0.0:
            raise ValueError("blowup_kappa_l2 must be positive")


class Termination(enum.Enum):
    REACHED_T_END = "ReachedTEnd"
    KOSC_CONVERGED = "KoscConverged"
    BLOWUP_SUSPECTED = "BlowupSuspected"
    STEP_UNDERFLOW = "StepUnderflow"


@dataclass(frozen=True)
class TrajectorySample:
    time: float
    state: CurveState
    record: object


@dataclass(frozen=True)
class Trajectory:
    samples: tuple
    termination: Termination
    steps: int

    def series(self, field):
        """Column of monitor values across the samples."""
        return np.array([getattr(s.record, field) for s in self.samples])


def _kernel_args(ind):
    """Indicatrix data in the flat form both stepping kernels consume."""
    by_k = {}
    for k, a in ind.spec.cos_coeffs:
        by_k.setdefault(k, [0.0, 0.0])[0] += a
    for k, b in ind.spec.sin_coeffs:
        by_k.setdefault(k, [0.0, 0.0])[1] += b
    ks = sorted(by_k)
    harm_k = np.array(ks, dtype=np.int32)
    harm_a = np.array([by_k[k][0] for k in ks], dtype=float)
    harm_b = np.array([by_k[k][1] for k in ks], dtype=float)
    return float(ind.spec.constant_term), harm_k, harm_a, harm_b


def velocity(state, ind, p):
    """Per-point velocity (-1)^p kappa_{sigma^{2p}} N of the flow."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    frame = compute_frame(state, ind)
    g = sigma_derivative(frame.kappa, frame, 2 * p)
    sign = -1.0 if p % 2 else 1.0
    return sign * g[:, None] * frame.N


def stable_dt(state, ind, params):
    """Explicit-stability step heuristic for the leading order-(2p+2) term.

    dt = min(dt_max, cfl * (min dsigma)^{2(p+1)} / max Q).
    """
    frame = compute_frame(state, ind)
    dsig_min = float(np.min(frame.w)) * frame.du
    return min(params.dt_max, params.cfl_constant * dsig_min ** (2 * (params.p + 1)) / ind.q_max)


def step_rk4(state, ind, params, dt):
    """One classical 4-stage RK step of all points with the flow velocity."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    x = np.ascontiguousarray(state.points[:, 0])
    y = np.ascontiguousarray(state.points[:, 1])
    c0, hk, ha, hb = _kernel_args(ind)
    t, done, status, _ = kernel.advance(
        x, y, state.time, 1, params.p, params.cfl_constant, params.dt_max,
        math.inf, float(dt), ind.q_max, c0, hk, ha, hb,
    )
    if status == kernel.STATUS_DEGENERATE:
        raise DegenerateTangent("tangent degenerated within an RK stage")
    if status == kernel.STATUS_NONFINITE or done != 1:
        raise DegenerateTangent("non-finite update within an RK step")
    return CurveState(points=np.column_stack([x, y]), time=t)


def run(initial, ind, params, on_sample=None):
    """Advance initial data until a stopping rule fires.

    The loop per step recomputes the frame and dt and steps with RK4; every
    monitor_every steps a MonitorRecord is taken (and handed to on_sample),
    and every resample_every steps the curve is re-indexed to uniform
    arclength.  Stopping: t_end reached; kosc at or below stop_kosc; blowup
    suspected when the curvature L2 norm crosses the blowup threshold, the
    step size underflows while that norm grows, or the tangent degenerates;
    plain step underflow otherwise.
    """
    if enclosed_area(initial) <= 0.0:
        raise InvalidInitialCurve("initial curve must be positively oriented with positive area")
    rec = compute_monitors(initial, ind, params, dt_used=0.0)
    blow_thresh = (
        params.blowup_kappa_l2 if params.blowup_kappa_l2 is not None
        else 1e4 * rec.kappa_l2
    )
    samples = [TrajectorySample(initial.time, initial, rec)]
    if on_sample is not None:
        on_sample(rec, initial)

    c0, hk, ha, hb = _kernel_args(ind)
    state = initial
    steps = 0
    termination = None

    while True:
        if params.stop_kosc is not None and rec.kosc <= params.stop_kosc:
            termination = Termination.KOSC_CONVERGED
            break
        if rec.kappa_l2 >= blow_thresh:
            termination = Termination.BLOWUP_SUSPECTED
            break
        if state.time >= params.t_end:
            termination = Termination.REACHED_T_END
            break

        prev_kappa_l2 = rec.kappa_l2
        to_monitor = params.monitor_every - steps % params.monitor_every
        to_resample = params.resample_every - steps % params.resample_every
        chunk = min(to_monitor, to_resample)
        x = np.ascontiguousarray(state.points[:, 0])
        y = np.ascontiguousarray(state.points[:, 1])
        t_new, done, status, dt_last = kernel.advance(
            x, y, state.time, chunk, params.p, params.cfl_constant, params.dt_max,
            params.t_end, 0.0, ind.q_max, c0, hk, ha, hb,
        )
        steps += done
        if done > 0:
            state = CurveState(points=np.column_stack([x, y]), time=t_new)

        if status in (kernel.STATUS_DEGENERATE, kernel.STATUS_NONFINITE):
            termination = Termination.BLOWUP_SUSPECTED
            break
        if status == kernel.STATUS_DT_UNDERFLOW:
            growing = False
            if done > 0:
                rec = compute_monitors(state, ind, params, dt_used=dt_last)
                samples.append(TrajectorySample(state.time, state, rec))
                if on_sample is not None:
                    on_sample(rec, state)
                growing = rec.kappa_l2 > prev_kappa_l2
            termination = Termination.BLOWUP_SUSPECTED if growing else Termination.STEP_UNDERFLOW
            break

        at_monitor = steps % params.monitor_every == 0
        if at_monitor or status == kernel.STATUS_T_END:
            rec = compute_monitors(state, ind, params, dt_used=dt_last)
            samples.append(TrajectorySample(state.time, state, rec))
            if on_sample is not None:
                on_sample(rec, state)
        if status == kernel.STATUS_T_END:
            termination = Termination.REACHED_T_END
            break
        if steps % params.resample_every == 0:
            state = resample_uniform(state, ind)

    return Trajectory(samples=tuple(samples), termination=termination, steps=steps)
