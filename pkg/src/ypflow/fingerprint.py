"""Fingerprints: zero sets of x-derivatives of the heat evolution.

``FP_k`` is the set of ``(x, t)`` with ``d^k p(x, t) / dx^k = 0``.  ``FP_1``
follows the critical points across scale, ``FP_2`` the inflection points and
``FP_3`` the zeros of the third derivative.  Branches are traced by solving
each slice of a uniform ``t`` grid and matching roots between slices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .heat import EvolvedPolynomial, convexification_time, evolve_symbolic
from .polynomial import Polynomial, TPoly, real_roots, resultant_in_t

FP2_FP3 = "FP2-FP3"
FP1_FP2 = "FP1-FP2"
TRACE_TOL_MULT = 1e-12


@dataclass
class FingerprintBranch:
    k: int
    t: np.ndarray
    x: np.ndarray
    born_at: float
    dies_at: float | None = None

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist()))


@dataclass(frozen=True)
class MergePoint:
    x: float
    t: float
    kind: str


def default_t_max(p: Polynomial) -> float:
    return 1.5 * convexification_time(p).t_star + 1.0


def _slice_roots(D: TPoly, grid: np.ndarray, t: float) -> list[float]:
    c = grid @ (t ** np.arange(grid.shape[1]))
    q = Polynomial(c)
    if q.is_zero() or q.degree == 0:
        return []
    return real_roots(q, tol_mult=TRACE_TOL_MULT).values


def _ordered_match(X: list[float], R: list[float]) -> list[tuple[int, int]]:
    """Order-preserving matching of min(len) pairs with least total distance."""
    n, m = len(X), len(R)
    INF = math.inf
    # cost[i][j]: best cost using X[:i], R[:j] with min(i, j) pairs... we need
    # exactly min(n, m) pairs, so skip only the longer list's entries.
    skip_x = n > m
    cost = [[INF] * (m + 1) for _ in range(n + 1)]
    cost[0][0] = 0.0
    for i in range(n + 1):
        for j in range(m + 1):
            c = cost[i][j]
            if c == INF:
                continue
            if i < n and j < m and c + abs(X[i] - R[j]) < cost[i + 1][j + 1]:
                cost[i + 1][j + 1] = c + abs(X[i] - R[j])
            if skip_x and i < n and c < cost[i + 1][j]:
                cost[i + 1][j] = c
            if not skip_x and j < m and c < cost[i][j + 1]:
                cost[i][j + 1] = c
    pairs = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and cost[i][j] == cost[i - 1][j - 1] + abs(X[i - 1] - R[j - 1]):
            pairs.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif skip_x and i > 0 and cost[i][j] == cost[i - 1][j]:
            i -= 1
        else:
            j -= 1
    return pairs[::-1]


def _refine_event(D, grid, lo, hi, n_lo, tol=1e-9):
    # largest t with the slice count still n_lo, by bisection
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if len(_slice_roots(D, grid, mid)) == n_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def fingerprint(p: Polynomial, k: int, t_max: float | None = None, n_steps: int = 2000) -> list[FingerprintBranch]:
    """Trace the branches of ``FP_k`` over ``0 <= t <= t_max``.

    Roots of consecutive slices are matched in order with least total
    displacement.  When roots vanish or appear the event time is refined by
    bisection to 1e-9; a dying branch gets a final sample at the midpoint of
    the colliding pair.
    """
    if k < 1:
        raise ValueError("fingerprint order k must be at least 1")
    if t_max is None:
        t_max = default_t_max(p)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    E = evolve_symbolic(p)
    D = E.dx(k)
    grid = D.grid()
    ts = np.linspace(0.0, t_max, n_steps + 1)
    active: list[tuple[list[float], list[float], float]] = []
    done: list[FingerprintBranch] = []
    for x in _slice_roots(D, grid, 0.0):
        active.append(([0.0], [x], 0.0))
    for s in range(1, len(ts)):
        t = ts[s]
        R = _slice_roots(D, grid, t)
        X = [b[1][-1] for b in active]
        if len(R) != len(X):
            t_lo, t_hi = _refine_event(D, grid, ts[s - 1], t, len(X))
            R_lo = _slice_roots(D, grid, t_lo)
            pairs_lo = _ordered_match(X, R_lo) if len(R_lo) == len(X) else [(i, i) for i in range(len(X))]
            X_lo = [R_lo[j] for _, j in pairs_lo] if len(R_lo) == len(X) else X
            pairs = _ordered_match(X_lo, R)
            matched = {i for i, _ in pairs}
            dying = [i for i in range(len(X)) if i not in matched]
            new_active = []
            for i, j in pairs:
                tt, xx, born = active[i]
                new_active.append((tt + [t], xx + [R[j]], born))
            for i in dying:
                tt, xx, born = active[i]
                # pair partner: the nearest other dying branch
                others = [o for o in dying if o != i]
                xd = X_lo[i]
                if others:
                    o = min(others, key=lambda o: abs(X_lo[o] - X_lo[i]))
                    xd = 0.5 * (X_lo[i] + X_lo[o])
                done.append(FingerprintBranch(k, np.array(tt + [t_hi]), np.array(xx + [xd]), born, t_hi))
            matched_r = {j for _, j in pairs}
            for j in range(len(R)):
                if j not in matched_r:
                    new_active.append(([t_hi, t], [R[j], R[j]], t_hi))
            new_active.sort(key=lambda b: b[1][-1])
            active = new_active
        else:
            active = [(tt + [t], xx + [R[j]], born) for (tt, xx, born), j in zip(active, range(len(R)))]
    for tt, xx, born in active:
        done.append(FingerprintBranch(k, np.array(tt), np.array(xx), born, None))
    done.sort(key=lambda b: (b.born_at, b.x[0]))
    return done


def _polish_common_zero(E: EvolvedPolynomial, k: int, x: float, t: float, iters: int = 20):
    """Newton on ``d^k p = d^(k+1) p = 0`` in ``(x, t)``; uses ``p_t = p_xx / 2``."""
    F = [E.dx(k + j) for j in range(3)]
    best = (x, t)
    best_r = abs(F[0](x, t)) + abs(F[1](x, t))
    for _ in range(iters):
        a, b = F[0](x, t), F[1](x, t)
        J = np.array([[b, 0.5 * F[2](x, t)], [F[2](x, t), 0.5 * E.dx(k + 3)(x, t)]])
        step, *_ = np.linalg.lstsq(J, -np.array([a, b]), rcond=1e-14)
        x, t = x + step[0], t + step[1]
        r = abs(F[0](x, t)) + abs(F[1](x, t))
        if not math.isfinite(r):
            break
        if r < best_r:
            best, best_r = (x, t), r
        if abs(step[0]) <= 1e-15 * (1 + abs(x)) and abs(step[1]) <= 1e-15 * (1 + abs(t)):
            break
    return best


def common_zeros(p: Polynomial, k: int, tol: float = 1e-7) -> list[tuple[float, float]]:
    """Points ``t >= 0`` where ``d^k p(., t)`` has a real multiple root.

    Candidate times are the nonnegative real roots of the resultant of
    ``d^k p`` and ``d^(k+1) p`` in ``x``; at each, ``x`` is the root of
    ``d^(k+1) p`` where ``|d^k p|`` is smallest.  After a joint Newton
    polish a point is kept only if both derivatives vanish to
    ``tol * (1 + max|coeff|)``, which discards complex common roots.
    """
    if p.degree < k + 2:
        return []
    E = evolve_symbolic(p)
    A, B = E.dx(k), E.dx(k + 1)
    res = resultant_in_t(A, B)
    if res.degree <= 0:
        return []
    scale = p.scale()
    out = []
    for t0 in real_roots(res).values:
        if t0 < -1e-9 * (1 + abs(t0)):
            continue
        t0 = max(t0, 0.0)
        cands = real_roots(B.at(t0)).values
        for x0 in cands:
            if abs(A(x0, t0)) > 1e-3 * scale * (1 + abs(x0)) ** A.degree_x:
                continue
            x, t = _polish_common_zero(E, k, x0, t0)
            if t < 0 and t > -1e-12:
                t = 0.0
            if t < 0:
                continue
            if abs(A(x, t)) <= tol * scale and abs(B(x, t)) <= tol * scale:
                if not any(abs(x - u) < 1e-7 * (1 + abs(x)) and abs(t - v) < 1e-7 * (1 + t) for u, v in out):
                    out.append((float(x), float(t)))
    out.sort(key=lambda q: q[1])
    return out


def fp2_fp3_intersections(p: Polynomial) -> list[MergePoint]:
    return [MergePoint(x, t, FP2_FP3) for x, t in common_zeros(p, 2)]


def fp1_merge_points(p: Polynomial) -> list[MergePoint]:
    return [MergePoint(x, t, FP1_FP2) for x, t in common_zeros(p, 1)]
