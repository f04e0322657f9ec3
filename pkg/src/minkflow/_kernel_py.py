"""Pure-numpy stepping kernel: the fallback backend.

The compiled extension minkflow._kernel implements the identical loop in C
with its own radix-2 FFT; this module is selected at import time when the
extension is unavailable (or when MINKFLOW_BACKEND=python).  Apart from FFT
roundoff the two backends must agree step for step, which the parity tests
enforce, so any change here needs the mirror change there.
"""

import numpy as np

NAME = "python"

STATUS_OK = 0
STATUS_T_END = 1
STATUS_DT_UNDERFLOW = 2
STATUS_DEGENERATE = 3
STATUS_NONFINITE = 4

DT_FLOOR = 1e-15
TWO_PI = 2.0 * np.pi


def _multipliers(m):
    k = np.fft.fftfreq(m, d=1.0 / m)
    m1 = 1j * k
    m1[m // 2] = 0.0
    m2 = -(k * k) + 0j
    return m1, m2


def _ipow(base, n):
    out = 1.0
    for _ in range(n):
        out = out * base
    return out


def _radial_fields(ct, st, c0, harm_k, harm_a, harm_b):
    """r, r_t, r_tt at each point from cos/sin of the tangent angle.

    Higher multiples cos(j theta), sin(j theta) come from angle-addition
    recurrences, so the hot path needs no transcendental calls.
    """
    r = np.full_like(ct, c0)
    r1 = np.zeros_like(ct)
    r2 = np.zeros_like(ct)
    if len(harm_k) == 0:
        return r, r1, r2
    kmax = int(harm_k[-1])
    idx = 0
    cj, sj = ct, st
    for j in range(1, kmax + 1):
        if idx < len(harm_k) and harm_k[idx] == j:
            a = float(harm_a[idx])
            b = float(harm_b[idx])
            r = r + (a * cj + b * sj)
            r1 = r1 + float(j) * (b * cj - a * sj)
            r2 = r2 - float(j * j) * (a * cj + b * sj)
            idx += 1
        cj, sj = cj * ct - sj * st, sj * ct + cj * st
    return r, r1, r2


def _velocity(x, y, p, c0, harm_k, harm_a, harm_b, m1, m2):
    """Flow velocity at the given points; None when the tangent degenerates.

    Returns (vx, vy, w_min) with v = (-1)^p (d/d sigma)^{2p} kappa times the
    anisotropic normal.
    """
    z = x + 1j * y
    zhat = np.fft.fft(z)
    z_u = np.fft.ifft(zhat * m1)
    z_uu = np.fft.ifft(zhat * m2)
    x_u, y_u = z_u.real, z_u.imag
    speed = np.sqrt(x_u * x_u + y_u * y_u)
    if np.min(speed) < 1e-12 * np.mean(speed):
        return None
    ct = x_u / speed
    st = y_u / speed
    curv = (x_u * z_uu.imag - y_u * z_uu.real) / (speed * speed * speed)
    r, r1, r2 = _radial_fields(ct, st, c0, harm_k, harm_a, harm_b)
    h = 1.0 / r
    h1 = -r1 * h * h
    h2 = (2.0 * r1 * r1 - r * r2) * h * h * h
    w = speed * h
    g = curv * (h + h2)
    for _ in range(2 * p):
        g = np.fft.ifft(np.fft.fft(g) * m1).real / w
    sign = -1.0 if p % 2 else 1.0
    vx = sign * g * (-h1 * ct - h * st)
    vy = sign * g * (-h1 * st + h * ct)
    return vx, vy, float(np.min(w))


def advance(x, y, t, nsteps, p, cfl, dt_max, t_end, dt_fixed, q_max,
            c0, harm_k, harm_a, harm_b):
    """Run up to nsteps RK4 steps in place.

    Per step the stable dt is recomputed from the current minimum arclength
    spacing unless dt_fixed > 0, then clamped to land exactly on t_end.
    Returns (t, steps_done, status, dt_last).
    """
    m = len(x)
    du = TWO_PI / m
    m1, m2 = _multipliers(m)
    order = 2 * (p + 1)
    dt_last = 0.0

    for step in range(nsteps):
        res = _velocity(x, y, p, c0, harm_k, harm_a, harm_b, m1, m2)
        if res is None:
            return t, step, STATUS_DEGENERATE, dt_last
        k1x, k1y, w_min = res

        if dt_fixed > 0.0:
            dt = dt_fixed
        else:
            dt = cfl * _ipow(w_min * du, order) / q_max
            if dt > dt_max:
                dt = dt_max
            if dt < DT_FLOOR:
                return t, step, STATUS_DT_UNDERFLOW, dt
        hit_end = False
        if t + dt >= t_end:
            dt = t_end - t
            hit_end = True

        half = 0.5 * dt
        res = _velocity(x + half * k1x, y + half * k1y, p, c0, harm_k, harm_a, harm_b, m1, m2)
        if res is None:
            return t, step, STATUS_DEGENERATE, dt_last
        k2x, k2y, _ = res
        res = _velocity(x + half * k2x, y + half * k2y, p, c0, harm_k, harm_a, harm_b, m1, m2)
        if res is None:
            return t, step, STATUS_DEGENERATE, dt_last
        k3x, k3y, _ = res
        res = _velocity(x + dt * k3x, y + dt * k3y, p, c0, harm_k, harm_a, harm_b, m1, m2)
        if res is None:
            return t, step, STATUS_DEGENERATE, dt_last
        k4x, k4y, _ = res

        sixth = dt / 6.0
        new_x = x + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        new_y = y + sixth * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not (np.all(np.isfinite(new_x)) and np.all(np.isfinite(new_y))):
            return t, step, STATUS_NONFINITE, dt_last
        x[:] = new_x
        y[:] = new_y
        dt_last = dt
        t = t_end if hit_end else t + dt
        if hit_end:
            return t, step + 1, STATUS_T_END, dt_last

    return t, nsteps, STATUS_OK, dt_last
