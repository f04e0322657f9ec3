# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stepping kernel.

C mirror of _kernel_py: same status codes, same per-step arithmetic (integer
powers by repeated multiplication, identical RK4 combination order), its own
iterative radix-2 FFT.  The parity tests hold the two backends together, so
any change here needs the mirror change there.
"""

from libc.math cimport sqrt, cos, sin, isfinite
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

import numpy as np

NAME = "compiled"

STATUS_OK = 0
STATUS_T_END = 1
STATUS_DT_UNDERFLOW = 2
STATUS_DEGENERATE = 3
STATUS_NONFINITE = 4

DT_FLOOR = 1e-15

cdef double _DT_FLOOR = 1e-15
cdef double _TWO_PI = 6.283185307179586476925286766559


cdef void _fft(double* re, double* im, int m, int log2m, int* rev,
               double* twr, double* twi, int inverse) nogil:
    cdef int i, j, size, half, step, base, idx
    cdef double tmp, wr, wi, vr, vi, sign, scale
    for i in range(m):
        j = rev[i]
        if j > i:
            tmp = re[i]; re[i] = re[j]; re[j] = tmp
            tmp = im[i]; im[i] = im[j]; im[j] = tmp
    sign = -1.0 if inverse else 1.0
    size = 2
    while size <= m:
        half = size >> 1
        step = m / size
        base = 0
        while base < m:
            for j in range(half):
                idx = j * step
                wr = twr[idx]
                wi = sign * twi[idx]
                vr = re[base + j + half] * wr - im[base + j + half] * wi
                vi = re[base + j + half] * wi + im[base + j + half] * wr
                re[base + j + half] = re[base + j] - vr
                im[base + j + half] = im[base + j] - vi
                re[base + j] = re[base + j] + vr
                im[base + j] = im[base + j] + vi
            base += size
        size <<= 1
    if inverse:
        scale = 1.0 / m
        for i in range(m):
            re[i] *= scale
            im[i] *= scale


cdef int _velocity(double* x, double* y, double* vx, double* vy, double* w_min_out,
                   int m, int log2m, int p, double c0,
                   int nh, int* hk, double* ha, double* hb,
                   double* kk1, double* kk2, int* rev, double* twr, double* twi,
                   double* ar, double* ai, double* br, double* bi,
                   double* xu, double* yu, double* xuu, double* yuu,
                   double* wgt, double* g, double* nx, double* ny) nogil:
    cdef int i, j, d, idx, kmax
    cdef double ssum, smin, sp, ct, st, curv
    cdef double r, r1, r2, a, b, cj, sj, cn, sn
    cdef double h, h1, h2, kval, sign

    memcpy(ar, x, m * sizeof(double))
    memcpy(ai, y, m * sizeof(double))
    _fft(ar, ai, m, log2m, rev, twr, twi, 0)
    for i in range(m):
        br[i] = -kk1[i] * ai[i]
        bi[i] = kk1[i] * ar[i]
    _fft(br, bi, m, log2m, rev, twr, twi, 1)
    memcpy(xu, br, m * sizeof(double))
    memcpy(yu, bi, m * sizeof(double))
    for i in range(m):
        br[i] = kk2[i] * ar[i]
        bi[i] = kk2[i] * ai[i]
    _fft(br, bi, m, log2m, rev, twr, twi, 1)
    memcpy(xuu, br, m * sizeof(double))
    memcpy(yuu, bi, m * sizeof(double))

    ssum = 0.0
    smin = 1e300
    for i in range(m):
        sp = sqrt(xu[i] * xu[i] + yu[i] * yu[i])
        wgt[i] = sp
        ssum += sp
        if sp < smin:
            smin = sp
    if smin < 1e-12 * (ssum / m):
        return STATUS_DEGENERATE

    kmax = hk[nh - 1] if nh > 0 else 0
    smin = 1e300
    for i in range(m):
        sp = wgt[i]
        ct = xu[i] / sp
        st = yu[i] / sp
        curv = (xu[i] * yuu[i] - yu[i] * xuu[i]) / (sp * sp * sp)
        r = c0
        r1 = 0.0
        r2 = 0.0
        cj = ct
        sj = st
        idx = 0
        for j in range(1, kmax + 1):
            if idx < nh and hk[idx] == j:
                a = ha[idx]
                b = hb[idx]
                r = r + (a * cj + b * sj)
                r1 = r1 + j * (b * cj - a * sj)
                r2 = r2 - <double> (j * j) * (a * cj + b * sj)
                idx += 1
            cn = cj * ct - sj * st
            sn = sj * ct + cj * st
            cj = cn
            sj = sn
        h = 1.0 / r
        h1 = -r1 * h * h
        h2 = (2.0 * r1 * r1 - r * r2) * h * h * h
        wgt[i] = sp * h
        if wgt[i] < smin:
            smin = wgt[i]
        g[i] = curv * (h + h2)
        nx[i] = -h1 * ct - h * st
        ny[i] = -h1 * st + h * ct
    w_min_out[0] = smin

    for d in range(2 * p):
        memcpy(ar, g, m * sizeof(double))
        for i in range(m):
            ai[i] = 0.0
        _fft(ar, ai, m, log2m, rev, twr, twi, 0)
        for i in range(m):
            br[i] = -kk1[i] * ai[i]
            bi[i] = kk1[i] * ar[i]
        _fft(br, bi, m, log2m, rev, twr, twi, 1)
        for i in range(m):
            g[i] = br[i] / wgt[i]

    sign = -1.0 if p % 2 else 1.0
    for i in range(m):
        vx[i] = sign * g[i] * nx[i]
        vy[i] = sign * g[i] * ny[i]
    return STATUS_OK


cdef inline double _ipow(double base, int n) nogil:
    cdef double out = 1.0
    cdef int i
    for i in range(n):
        out = out * base
    return out


def advance(double[::1] x, double[::1] y, double t, Py_ssize_t nsteps, int p,
            double cfl, double dt_max, double t_end, double dt_fixed, double q_max,
            double c0, int[::1] harm_k, double[::1] harm_a, double[::1] harm_b):
    """Run up to nsteps RK4 steps in place; see _kernel_py.advance."""
    cdef int m = <int> x.shape[0]
    cdef int log2m = 0
    cdef int tmp = m
    while tmp > 1:
        tmp >>= 1
        log2m += 1
    if (1 << log2m) != m:
        raise ValueError(f"grid size must be a power of two, got {m}")

    cdef int nh = <int> harm_k.shape[0]
    cdef double du = _TWO_PI / m
    cdef int order = 2 * (p + 1)

    # one block: 22 double arrays of length m, plus twiddles (m), ints
    cdef double* block = <double*> malloc((22 * m + m) * sizeof(double))
    cdef int* iblock = <int*> malloc((m + (nh if nh > 0 else 1)) * sizeof(int))
    if block == NULL or iblock == NULL:
        if block != NULL:
            free(block)
        if iblock != NULL:
            free(iblock)
        raise MemoryError()

    cdef double* kk1 = block
    cdef double* kk2 = block + m
    cdef double* ar = block + 2 * m
    cdef double* ai = block + 3 * m
    cdef double* br = block + 4 * m
    cdef double* bi = block + 5 * m
    cdef double* xu = block + 6 * m
    cdef double* yu = block + 7 * m
    cdef double* xuu = block + 8 * m
    cdef double* yuu = block + 9 * m
    cdef double* wgt = block + 10 * m
    cdef double* g = block + 11 * m
    cdef double* nxa = block + 12 * m
    cdef double* nya = block + 13 * m
    cdef double* k1x = block + 14 * m
    cdef double* k1y = block + 15 * m
    cdef double* kqx = block + 16 * m
    cdef double* kqy = block + 17 * m
    cdef double* acx = block + 18 * m
    cdef double* acy = block + 19 * m
    cdef double* xs = block + 20 * m
    cdef double* ys = block + 21 * m
    cdef double* twid = block + 22 * m   # twr (m/2) then twi (m/2)
    cdef double* twr = twid
    cdef double* twi = twid + m // 2
    cdef int* rev = iblock
    cdef int* hk = iblock + m

    cdef int i
    cdef double kv
    for i in range(m):
        kv = <double> i if i < m // 2 else <double> (i - m)
        kk2[i] = -(kv * kv)
        if i == m // 2:
            kv = 0.0
        kk1[i] = kv
    rev[0] = 0
    for i in range(1, m):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (log2m - 1))
    for i in range(m // 2):
        twr[i] = cos(_TWO_PI * i / m)
        twi[i] = -sin(_TWO_PI * i / m)
    for i in range(nh):
        hk[i] = harm_k[i]

    cdef double* ha = &harm_a[0] if nh > 0 else NULL
    cdef double* hb = &harm_b[0] if nh > 0 else NULL
    cdef double* px = &x[0]
    cdef double* py = &y[0]

    cdef Py_ssize_t step = 0
    cdef Py_ssize_t done = 0
    cdef int status = STATUS_OK
    cdef int stat, hit_end, ok
    cdef double dt_last = 0.0
    cdef double w_min = 0.0
    cdef double dt, half, sixth, xn, yn
    cdef double tcur = t

    with nogil:
        while step < nsteps:
            stat = _velocity(px, py, k1x, k1y, &w_min, m, log2m, p, c0, nh, hk, ha, hb,
                             kk1, kk2, rev, twr, twi, ar, ai, br, bi,
                             xu, yu, xuu, yuu, wgt, g, nxa, nya)
            if stat != STATUS_OK:
                status = stat
                break

            if dt_fixed > 0.0:
                dt = dt_fixed
            else:
                dt = cfl * _ipow(w_min * du, order) / q_max
                if dt > dt_max:
                    dt = dt_max
                if dt < _DT_FLOOR:
                    status = STATUS_DT_UNDERFLOW
                    dt_last = dt
                    break
            hit_end = 0
            if tcur + dt >= t_end:
                dt = t_end - tcur
                hit_end = 1

            half = 0.5 * dt
            for i in range(m):
                xs[i] = px[i] + half * k1x[i]
                ys[i] = py[i] + half * k1y[i]
            stat = _velocity(xs, ys, kqx, kqy, &w_min, m, log2m, p, c0, nh, hk, ha, hb,
                             kk1, kk2, rev, twr, twi, ar, ai, br, bi,
                             xu, yu, xuu, yuu, wgt, g, nxa, nya)
            if stat != STATUS_OK:
                status = stat
                break
            for i in range(m):
                acx[i] = k1x[i] + 2.0 * kqx[i]
                acy[i] = k1y[i] + 2.0 * kqy[i]
                xs[i] = px[i] + half * kqx[i]
                ys[i] = py[i] + half * kqy[i]
            stat = _velocity(xs, ys, kqx, kqy, &w_min, m, log2m, p, c0, nh, hk, ha, hb,
                             kk1, kk2, rev, twr, twi, ar, ai, br, bi,
                             xu, yu, xuu, yuu, wgt, g, nxa, nya)
            if stat != STATUS_OK:
                status = stat
                break
            for i in range(m):
                acx[i] = acx[i] + 2.0 * kqx[i]
                acy[i] = acy[i] + 2.0 * kqy[i]
                xs[i] = px[i] + dt * kqx[i]
                ys[i] = py[i] + dt * kqy[i]
            stat = _velocity(xs, ys, kqx, kqy, &w_min, m, log2m, p, c0, nh, hk, ha, hb,
                             kk1, kk2, rev, twr, twi, ar, ai, br, bi,
                             xu, yu, xuu, yuu, wgt, g, nxa, nya)
            if stat != STATUS_OK:
                status = stat
                break

            sixth = dt / 6.0
            ok = 1
            for i in range(m):
                xn = px[i] + sixth * (acx[i] + kqx[i])
                yn = py[i] + sixth * (acy[i] + kqy[i])
                if not (isfinite(xn) and isfinite(yn)):
                    ok = 0
                    break
                xs[i] = xn
                ys[i] = yn
            if not ok:
                status = STATUS_NONFINITE
                break
            memcpy(px, xs, m * sizeof(double))
            memcpy(py, ys, m * sizeof(double))
            dt_last = dt
            step += 1
            done = step
            if hit_end:
                tcur = t_end
                status = STATUS_T_END
                break
            tcur = tcur + dt

    free(block)
    free(iblock)
    return tcur, int(done), int(status), dt_last
