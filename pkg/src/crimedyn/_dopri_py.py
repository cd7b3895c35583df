"""Pure-Python Dormand-Prince 5(4) kernel for the crime model.

Mirrors ``_dopri_ext.pyx`` statement for statement so that both kernels
produce the same floating-point results. Used when the compiled extension is
unavailable or when ``CRIMEDYN_PURE=1``.
"""
import math

OK = 0
STEP_UNDERFLOW = 1
MAX_STEPS = 2
NEGATIVE_EXCURSION = 3

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0


def _rhs(par, y):
    pi, mu, theta, eps, sigma, beta, alpha, gamma, p, q = par
    s1, s2, c, r = y
    inc = beta * s2 * c * (1.0 + alpha * c)
    return [
        (1.0 - p) * pi + (1.0 - q) * gamma * r - (mu + theta) * s1 + eps * s2,
        p * pi - inc - (mu + eps) * s2 + theta * s1,
        inc + q * gamma * r - (mu + sigma) * c,
        sigma * c - (mu + gamma) * r,
    ]


def run(par, y0, t_end, rtol, atol, h0, hmax, fixed_step, out_times, out_states,
        max_steps, clamp, a, e, d):
    """Integrate from ``t = 0`` to ``t_end`` writing dense output in place.

    Returns ``(status, t, accepted, rejected, min_step, n_written)``.
    """
    a = [[float(x) for x in row] for row in a]
    e = [float(x) for x in e]
    d = [float(x) for x in d]
    n_out = len(out_times)
    limit = 10.0 * atol
    h_floor = 1e-14 * t_end

    y = [float(v) for v in y0]
    t = 0.0
    k = [None] * 7
    k[0] = _rhs(par, y)
    idx = 0
    while idx < n_out and out_times[idx] <= 0.0:
        for i in range(4):
            out_states[idx, i] = y[i]
        idx += 1

    adaptive = fixed_step <= 0.0
    h = min(h0, hmax, t_end) if adaptive else fixed_step
    accepted = rejected = 0
    min_step = math.inf
    last_rejected = False
    ynew = [0.0] * 4
    ytmp = [0.0] * 4

    while t < t_end:
        if accepted + rejected >= max_steps:
            return MAX_STEPS, t, accepted, rejected, min_step, idx
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
            row = a[s]
            for i in range(4):
                acc = 0.0
                for j in range(s):
                    acc += row[j] * k[j][i]
                ytmp[i] = y[i] + h * acc
            k[s] = _rhs(par, ytmp)
        # the last stage is evaluated at the fifth-order solution (FSAL)
        for i in range(4):
            ynew[i] = ytmp[i]

        err = 0.0
        for i in range(4):
            acc = 0.0
            for j in range(7):
                acc += e[j] * k[j][i]
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            r = h * acc / sc
            err += r * r
        err = math.sqrt(err / 4.0)

        if adaptive and err > 1.0:
            rejected += 1
            last_rejected = True
            h = h * max(FAC_MIN, SAFETY * err ** -0.2)
            if h < h_floor:
                return STEP_UNDERFLOW, t, accepted, rejected, min_step, idx
            continue

        # dense output coefficients
        r1 = list(y)
        r2 = [ynew[i] - y[i] for i in range(4)]
        r3 = [h * k[0][i] - r2[i] for i in range(4)]
        r4 = [r2[i] - h * k[6][i] - r3[i] for i in range(4)]
        r5 = [0.0] * 4
        for i in range(4):
            acc = 0.0
            for j in range(7):
                acc += d[j] * k[j][i]
            r5[i] = h * acc

        while idx < n_out and out_times[idx] <= t_new:
            th = (out_times[idx] - t) / h
            th1 = 1.0 - th
            for i in range(4):
                v = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])))
                if clamp and v < 0.0:
                    if v < -limit:
                        return NEGATIVE_EXCURSION, out_times[idx], accepted, rejected, min_step, idx
                    v = 0.0
                out_states[idx, i] = v
            idx += 1

        clamped = False
        if clamp:
            for i in range(4):
                if ynew[i] < 0.0:
                    if ynew[i] < -limit:
                        return NEGATIVE_EXCURSION, t_new, accepted, rejected, min_step, idx
                    ynew[i] = 0.0
                    clamped = True

        accepted += 1
        if h < min_step:
            min_step = h
        t = t_new
        y, ynew = ynew, y
        k[0] = _rhs(par, y) if clamped else k[6]

        if adaptive:
            fac = FAC_MAX if not last_rejected else 1.0
            if err == 0.0:
                grow = fac
            else:
                grow = min(fac, max(FAC_MIN, SAFETY * err ** -0.2))
            h = min(h * grow, hmax)
            last_rejected = False

    return OK, t, accepted, rejected, min_step, idx
