# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel for the crime model.

Statement-for-statement twin of ``_dopri_py.run``; the step loop runs
without the GIL so ensembles can use threads.
"""
from libc.math cimport fabs, fmax, fmin, pow, sqrt, INFINITY

cdef enum:
    OK = 0
    STEP_UNDERFLOW = 1
    MAX_STEPS = 2
    NEGATIVE_EXCURSION = 3

cdef double SAFETY = 0.9
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 10.0


cdef inline void _rhs(const double* par, const double* y, double* out) noexcept nogil:
    cdef double pi = par[0], mu = par[1], theta = par[2], eps = par[3], sigma = par[4]
    cdef double beta = par[5], alpha = par[6], gamma = par[7], p = par[8], q = par[9]
    cdef double s1 = y[0], s2 = y[1], c = y[2], r = y[3]
    cdef double inc = beta * s2 * c * (1.0 + alpha * c)
    out[0] = (1.0 - p) * pi + (1.0 - q) * gamma * r - (mu + theta) * s1 + eps * s2
    out[1] = p * pi - inc - (mu + eps) * s2 + theta * s1
    out[2] = inc + q * gamma * r - (mu + sigma) * c
    out[3] = sigma * c - (mu + gamma) * r


cdef int _run(const double* par, double* y, double t_end, double rtol, double atol,
              double h0, double hmax, double fixed_step,
              const double[::1] out_times, double[:, ::1] out_states,
              long max_steps, bint clamp,
              const double[:, ::1] a, const double[::1] e, const double[::1] d,
              double* t_out, long* acc_out, long* rej_out, double* min_out,
              long* idx_out) noexcept nogil:
    cdef double k[7][4]
    cdef double ynew[4]
    cdef double ytmp[4]
    cdef double r2[4]
    cdef double r3[4]
    cdef double r4[4]
    cdef double r5[4]
    cdef Py_ssize_t n_out = out_times.shape[0]
    cdef Py_ssize_t idx = 0
    cdef int s, i, j
    cdef double limit = 10.0 * atol
    cdef double h_floor = 1e-14 * t_end
    cdef double t = 0.0, t_new, h, acc, sc, rr, err, th, th1, v, fac, grow
    cdef long accepted = 0, rejected = 0
    cdef double min_step = INFINITY
    cdef bint last_rejected = False, clamped
    cdef bint adaptive = fixed_step <= 0.0
    cdef int status = OK

    _rhs(par, y, k[0])
    while idx < n_out and out_times[idx] <= 0.0:
        for i in range(4):
            out_states[idx, i] = y[i]
        idx += 1

    if adaptive:
        h = fmin(fmin(h0, hmax), t_end)
    else:
        h = fixed_step

    while t < t_end:
        if accepted + rejected >= max_steps:
            status = MAX_STEPS
            break
        if adaptive:
            if t + 1.0000001 * h >= t_end:
                h = t_end - t
            t_new = t + h
        else:
            t_new = (accepted + 1) * fixed_step
            if t_new >= t_end or t_end - t_new <= 1e-12 * t_end:
                t_new = t_end
            h = t_new - t

        for s in range(1, 7):
            for i in range(4):
                acc = 0.0
                for j in range(s):
                    acc += a[s, j] * k[j][i]
                ytmp[i] = y[i] + h * acc
            _rhs(par, ytmp, k[s])
        for i in range(4):
            ynew[i] = ytmp[i]

        err = 0.0
        for i in range(4):
            acc = 0.0
            for j in range(7):
                acc += e[j] * k[j][i]
            sc = atol + rtol * fmax(fabs(y[i]), fabs(ynew[i]))
            rr = h * acc / sc
            err += rr * rr
        err = sqrt(err / 4.0)

        if adaptive and err > 1.0:
            rejected += 1
            last_rejected = True
            h = h * fmax(FAC_MIN, SAFETY * pow(err, -0.2))
            if h < h_floor:
                status = STEP_UNDERFLOW
                break
            continue

        for i in range(4):
            r2[i] = ynew[i] - y[i]
            r3[i] = h * k[0][i] - r2[i]
            r4[i] = r2[i] - h * k[6][i] - r3[i]
            acc = 0.0
            for j in range(7):
                acc += d[j] * k[j][i]
            r5[i] = h * acc

        while idx < n_out and out_times[idx] <= t_new:
            th = (out_times[idx] - t) / h
            th1 = 1.0 - th
            for i in range(4):
                v = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])))
                if clamp and v < 0.0:
                    if v < -limit:
                        status = NEGATIVE_EXCURSION
                        break
                    v = 0.0
                out_states[idx, i] = v
            if status != OK:
                t = out_times[idx]
                break
            idx += 1
        if status != OK:
            break

        clamped = False
        if clamp:
            for i in range(4):
                if ynew[i] < 0.0:
                    if ynew[i] < -limit:
                        status = NEGATIVE_EXCURSION
                        break
                    ynew[i] = 0.0
                    clamped = True
        if status != OK:
            t = t_new
            break

        accepted += 1
        if h < min_step:
            min_step = h
        t = t_new
        for i in range(4):
            y[i] = ynew[i]
        if clamped:
            _rhs(par, y, k[0])
        else:
            for i in range(4):
                k[0][i] = k[6][i]

        if adaptive:
            fac = FAC_MAX if not last_rejected else 1.0
            if err == 0.0:
                grow = fac
            else:
                grow = fmin(fac, fmax(FAC_MIN, SAFETY * pow(err, -0.2)))
            h = fmin(h * grow, hmax)
            last_rejected = False

    t_out[0] = t
    acc_out[0] = accepted
    rej_out[0] = rejected
    min_out[0] = min_step
    idx_out[0] = idx
    return status


def run(par, y0, double t_end, double rtol, double atol, double h0, double hmax,
        double fixed_step, out_times, out_states, long max_steps, bint clamp, a, e, d):
    """Integrate from ``t = 0`` to ``t_end`` writing dense output in place.

    Returns ``(status, t, accepted, rejected, min_step, n_written)``.
    """
    cdef double cpar[10]
    cdef double cy[4]
    cdef int i, status
    cdef double t_reached = 0.0, min_step = 0.0
    cdef long accepted = 0, rejected = 0, idx = 0
    cdef const double[::1] ot = out_times
    cdef double[:, ::1] os = out_states
    cdef const double[:, ::1] av = a
    cdef const double[::1] ev = e
    cdef const double[::1] dv = d
    for i in range(10):
        cpar[i] = par[i]
    for i in range(4):
        cy[i] = y0[i]
    with nogil:
        status = _run(cpar, cy, t_end, rtol, atol, h0, hmax, fixed_step, ot, os,
                      max_steps, clamp, av, ev, dv,
                      &t_reached, &accepted, &rejected, &min_step, &idx)
    return status, t_reached, accepted, rejected, min_step, idx
