"""Compiled inner loops.

Bivariate polynomials arrive as coefficient grids ``C[i, j]`` multiplying
``x**i * t**j``; ``D[k]`` holds the grid of the ``(k+1)``-th x-derivative of
the heat evolution, so ``D[0]`` is ``p_x`` and ``D[4]`` is ``p^(5)``.
"""

import math

import numpy as np
from numba import njit

REACHED = 0
MERGE = 1
FAILURE = 2
ESCAPED = 3

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


@njit(cache=True, nogil=True)
def horner2(C, x, t):
    ni, nj = C.shape
    acc = 0.0
    for i in range(ni - 1, -1, -1):
        row = 0.0
        for j in range(nj - 1, -1, -1):
            row = row * t + C[i, j]
        acc = acc * x + row
    return acc


@njit(cache=True, nogil=True)
def yp_slope(D, x, t, sing_tol, tol3):
    """dx/dt = -p_xxx / (2 p_xx), with the limiting slope at FP2-FP3 points."""
    p2 = horner2(D[1], x, t)
    p3 = horner2(D[2], x, t)
    if abs(p2) < sing_tol and abs(p3) < tol3:
        # both vanish: the branch crossing FP2 has slope -p5 / (4 p4)
        p4 = horner2(D[3], x, t)
        if p4 == 0.0:
            return 0.0
        return -horner2(D[4], x, t) / (4.0 * p4)
    if p2 == 0.0:
        return math.inf
    return -p3 / (2.0 * p2)


@njit(cache=True, nogil=True)
def certify_merge(D, level, x, t, scale):
    """Newton on ``p_x = level, p_xx = 0``; returns (x, t, ok)."""
    for _ in range(40):
        f1 = horner2(D[0], x, t) - level
        f2 = horner2(D[1], x, t)
        p3 = horner2(D[2], x, t)
        p4 = horner2(D[3], x, t)
        # d/dt of an x-derivative is half the derivative two orders up
        j11, j12, j21, j22 = f2, 0.5 * p3, p3, 0.5 * p4
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            break
        dx = (f1 * j22 - f2 * j12) / det
        dt = (j11 * f2 - j21 * f1) / det
        x -= dx
        t -= dt
        if abs(dx) <= 1e-15 * (1.0 + abs(x)) and abs(dt) <= 1e-15 * (1.0 + abs(t)):
            break
    f1 = horner2(D[0], x, t) - level
    f2 = horner2(D[1], x, t)
    ok = abs(f1) <= 1e-9 * scale and abs(f2) <= 1e-7 * scale and math.isfinite(x)
    return x, t, ok


@njit(cache=True, nogil=True)
def integrate(D, x0, t0, t1, rtol, h_max, sing_tol, tol3, escape_t, scale, record):
    """Adaptive Dormand-Prince integration of the trajectory ODE.

    Returns ``(ts, xs, status, x, t, xm, tm)``.  ``status`` is one of
    REACHED, MERGE, FAILURE or ESCAPED (forward run passed ``escape_t``);
    ``(xm, tm)`` is the certified merge point when status is MERGE.
    """
    s = 1.0 if t1 >= t0 else -1.0
    cap = 256 if record else 1
    ts = np.empty(cap)
    xs = np.empty(cap)
    n = 0
    ts[0] = t0
    xs[0] = x0
    x = x0
    t = t0
    level = horner2(D[0], x0, t0)
    p2 = horner2(D[1], x, t)
    sgn = 1.0 if p2 >= 0.0 else -1.0
    h = min(h_max, abs(t1 - t0)) * 0.01
    h_last = h_max
    status = FAILURE
    xm = math.nan
    tm = math.nan
    k1 = yp_slope(D, x, t, sing_tol, tol3)
    for _ in range(10_000_000):
        if s * (t1 - t) <= 0.0:
            status = REACHED
            break
        if s > 0.0 and t > escape_t:
            status = ESCAPED
            break
        near = abs(p2) < 10.0 * sing_tol
        if near:
            h = min(h, 0.5 * h_last)
        h = min(h, h_max, abs(t1 - t))
        h_min = 1e-14 * (1.0 + abs(t))
        if h < h_min:
            xc, tc, ok = certify_merge(D, level, x, t, scale)
            if ok and abs(tc - t) <= 1e-4 * (1.0 + abs(t)) and abs(xc - x) <= 1e-2 * (1.0 + abs(x)):
                status = MERGE
                xm = xc
                tm = tc
            else:
                status = FAILURE
            break
        dt = s * h
        if not math.isfinite(k1):
            k1 = yp_slope(D, x, t, sing_tol, tol3)
        k2 = yp_slope(D, x + dt * _A21 * k1, t + _C2 * dt, sing_tol, tol3)
        k3 = yp_slope(D, x + dt * (_A31 * k1 + _A32 * k2), t + _C3 * dt, sing_tol, tol3)
        k4 = yp_slope(D, x + dt * (_A41 * k1 + _A42 * k2 + _A43 * k3), t + _C4 * dt, sing_tol, tol3)
        k5 = yp_slope(
            D, x + dt * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4), t + _C5 * dt, sing_tol, tol3
        )
        k6 = yp_slope(
            D,
            x + dt * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5),
            t + dt,
            sing_tol,
            tol3,
        )
        xn = x + dt * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        tn = t + dt
        k7 = yp_slope(D, xn, tn, sing_tol, tol3)
        errv = dt * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        err = abs(errv) / (rtol + rtol * max(abs(x), abs(xn)))
        if not math.isfinite(err) or not math.isfinite(xn):
            h *= 0.25
            continue
        if err > 1.0:
            h *= max(0.1, 0.9 * err**-0.2)
            continue
        p2n = horner2(D[1], xn, tn)
        if p2n * sgn < 0.0:
            # crossing FP2 is only legitimate through an FP2-FP3 point
            if abs(horner2(D[2], x, t)) < tol3 and abs(horner2(D[2], xn, tn)) < tol3:
                sgn = -sgn
            else:
                h *= 0.5
                continue
        h_last = h
        x = xn
        t = tn
        p2 = p2n
        k1 = k7
        if record:
            n += 1
            if n >= ts.shape[0]:
                nts = np.empty(2 * ts.shape[0])
                nxs = np.empty(2 * xs.shape[0])
                nts[: ts.shape[0]] = ts
                nxs[: xs.shape[0]] = xs
                ts = nts
                xs = nxs
            ts[n] = t
            xs[n] = x
        if abs(p2) < sing_tol and abs(horner2(D[2], x, t)) >= tol3:
            xc, tc, ok = certify_merge(D, level, x, t, scale)
            status = MERGE
            xm = xc if ok else x
            tm = tc if ok else t
            break
        if err < 1e-10:
            h *= 5.0
        else:
            h *= min(5.0, 0.9 * err**-0.2)
    if not record:
        ts[0] = t
        xs[0] = x
        n = 0
    return ts[: n + 1].copy(), xs[: n + 1].copy(), status, x, t, xm, tm


@njit(cache=True, nogil=True)
def shoot_many(D, x0s, t_end, rtol, h_max, sing_tol, tol3, escape_t, scale):
    """Forward runs from ``(x0, 0)``; returns the status of each."""
    out = np.empty(x0s.shape[0], dtype=np.int64)
    for i in range(x0s.shape[0]):
        r = integrate(D, x0s[i], 0.0, t_end, rtol, h_max, sing_tol, tol3, escape_t, scale, False)
        out[i] = r[2]
    return out


@njit(cache=True, nogil=True)
def quartic_euler_backward(a, b, x, t, dt):
    """Explicit Euler on ``dx/dt = -(12x + 3a) / (12x^2 + 6ax + 2b + 12t)`` from t down to 0."""
    n = int(math.ceil(t / dt))
    if n < 1:
        return x
    h = t / n
    for _ in range(n):
        x = x + h * (12.0 * x + 3.0 * a) / (12.0 * x * x + 6.0 * a * x + 2.0 * b + 12.0 * t)
        t -= h
    return x


@njit(cache=True, nogil=True)
def quartic_descent(a, b, c, x, step, max_iter):
    """Gradient descent on ``x^4 + a x^3 + b x^2 + c x``; returns (x, iterations)."""
    for it in range(max_iter):
        g = ((4.0 * x + 3.0 * a) * x + 2.0 * b) * x + c
        dx = step * g
        x -= dx
        if abs(dx) <= 1e-15 * (1.0 + abs(x)):
            return x, it + 1
    return x, -1


@njit(cache=True, nogil=True)
def quartic_descent_many(coeffs, step_scale, max_iter):
    n = coeffs.shape[0]
    xs = np.empty(n)
    its = np.empty(n, dtype=np.int64)
    for i in range(n):
        a, b, c = coeffs[i, 0], coeffs[i, 1], coeffs[i, 2]
        m = max(abs(a), abs(b), abs(c), abs(coeffs[i, 3]))
        xs[i], its[i] = quartic_descent(a, b, c, -a / 4.0, step_scale / (1.0 + m), max_iter)
    return xs, its
