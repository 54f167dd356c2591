"""Trajectories of the critical-point flow and the zones they define.

Along the heat evolution a critical point moves by

    dx/dt = -p_xxx / (2 p_xx)

which is the implicit-function slope of the level set ``p_x(x, t) = h``.
Every trajectory therefore keeps its ``p_x`` value, and two trajectories
collide exactly where their common level curve turns back in ``t``
(``p_xx = 0``).  A starting point is *confined* when its forward trajectory
collides before the evolution becomes convex and *escapes* otherwise; the
backward run from the minimiser of a convexified slice lands on the unique
escaping critical point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import ConsistencyViolation, NonConvergence, StartOnSingularity
from .fingerprint import MergePoint, fp1_merge_points, fp2_fp3_intersections
from .heat import check_even_positive, convexification_time, evolve_at, evolve_symbolic
from .oracle import MATCH_TOL, OracleResult, brute_force_min
from .polynomial import Polynomial, real_roots

RTOL = 1e-9
BOUNDARY_TOL = 1e-6
DEFAULT_GRID = 400

REACHED_TARGET = "ReachedTarget"
SINGULARITY_MERGE = "SingularityMerge"
STEP_FAILURE = "StepFailure"
ESCAPED = "Escaped"
_STATUS = {K.REACHED: REACHED_TARGET, K.MERGE: SINGULARITY_MERGE, K.FAILURE: STEP_FAILURE, K.ESCAPED: ESCAPED}


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    termination: str
    direction: str
    level: float
    merge: tuple[float, float] | None = None

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist()))

    @property
    def end(self) -> tuple[float, float]:
        return float(self.t[-1]), float(self.x[-1])


@dataclass
class ZoneReport:
    confinement: list[tuple[float, float]]
    merge_points: list[MergePoint]
    boundary_tol: float
    method: str = "shooting"
    t_max: float = 0.0
    failures: int = 0

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.confinement)

    def distance_to_boundary(self, x: float) -> float:
        ends = [e for iv in self.confinement for e in iv]
        return min((abs(x - e) for e in ends), default=math.inf)


@dataclass
class MinimizeResult:
    minimizer: float
    value: float
    attainable: bool | None
    oracle_minimizer: float | None
    trajectory: Trajectory
    t0: float
    oracle_minimizers: list[float] = field(default_factory=list)
    alternatives: list[float] = field(default_factory=list)


@dataclass
class Attainability:
    attainable: bool
    oracle: OracleResult
    zones: ZoneReport
    flow: MinimizeResult
    ambiguous: bool = False

    def __bool__(self):
        return self.attainable


class Field:
    """Coefficient grids of ``p_x`` .. ``p^(5)`` of the heat evolution."""

    def __init__(self, p: Polynomial):
        self.p = p
        E = evolve_symbolic(p)
        grids = [E.dx(k).grid() for k in range(1, 6)]
        nx = max(g.shape[0] for g in grids)
        nt = max(g.shape[1] for g in grids)
        self.D = np.zeros((5, nx, nt))
        for k, g in enumerate(grids):
            self.D[k, : g.shape[0], : g.shape[1]] = g
        self.scale = p.scale()
        self.sing_tol = 1e-7 * self.scale
        self.tol3 = 1e-4 * self.scale

    def deriv(self, k: int, x: float, t: float) -> float:
        return K.horner2(self.D[k - 1], x, t)

    def slice(self, k: int, t: float) -> Polynomial:
        """``d^k p(., t) / dx^k`` as a polynomial in x."""
        G = self.D[k - 1]
        return Polynomial(G @ (t ** np.arange(G.shape[1])))

    def run(self, x0, t0, t1, rtol=RTOL, escape_t=math.inf, record=True, h_max=None):
        if h_max is None:
            h_max = abs(t1 - t0) / 1000.0 if t1 != t0 else 1.0
        return K.integrate(
            self.D, float(x0), float(t0), float(t1), rtol, h_max, self.sing_tol, self.tol3,
            float(escape_t), self.scale, record,
        )


def integrate_yp(
    p: Polynomial, x0: float, t0: float, t1: float, rtol: float = RTOL, escape_t: float = math.inf,
    field_: Field | None = None,
) -> Trajectory:
    """Integrate the trajectory through ``(x0, t0)`` to ``t1`` (either direction).

    Stops early with ``SingularityMerge`` when the trajectory collides with
    its partner (``p_xx -> 0`` while ``p_xxx`` stays away from zero); the
    collision point is certified by Newton on ``p_x = h, p_xx = 0``.
    Points where ``p_xx`` and ``p_xxx`` vanish together are crossed using
    the limiting slope.  A forward run stops with ``Escaped`` once ``t``
    passes ``escape_t``.
    """
    F = field_ or Field(p)
    p2 = F.deriv(2, x0, t0)
    if abs(p2) < F.sing_tol and abs(F.deriv(3, x0, t0)) >= F.tol3:
        raise StartOnSingularity(f"p_xx({x0}, {t0}) = {p2:.3g} is zero to tolerance")
    ts, xs, status, _, _, xm, tm = F.run(x0, t0, t1, rtol, escape_t)
    merge = (float(xm), float(tm)) if status == K.MERGE else None
    return Trajectory(
        ts, xs, _STATUS[status], "forward" if t1 >= t0 else "backward", F.deriv(1, x0, t0), merge
    )


def convex_slice_minimizer(q: Polynomial) -> float:
    """Minimiser of a convex polynomial by safeguarded Newton from the centroid."""
    n = q.degree
    d1, d2 = q.deriv(), q.deriv(2)
    x = -q.coeffs[n - 1] / (n * q.coeffs[n])
    B = 2.0 + max(abs(c) for c in q.coeffs[:-1]) / abs(q.leading) + abs(x)
    lo, hi = -B, B
    for _ in range(200):
        g = d1(x)
        if g == 0.0:
            return x
        if g < 0:
            lo = max(lo, x)
        else:
            hi = min(hi, x)
        h = d2(x)
        xn = x - g / h if h > 0 else math.nan
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 4 * np.finfo(float).eps * (1 + abs(x)):
            return xn
        x = xn
    return x


def _polish_critical(p: Polynomial, x: float) -> float:
    roots = real_roots(p.deriv()).values
    r = min(roots, key=lambda r: abs(r - x))
    if abs(r - x) <= 1e-3 * (1 + abs(x)):
        return r
    return x


def backward_flow_minimize(
    p: Polynomial, with_oracle: bool = True, match_tol: float = MATCH_TOL, t0: float | None = None
) -> MinimizeResult:
    """Follow the minimiser of a convexified slice back to ``t = 0``.

    Starts at ``t0 = 1.2 * max(T*, 1)``, finds the unique minimiser of the
    convex slice, integrates the trajectory ODE backward and polishes the
    endpoint onto the nearest root of ``p'``.
    """
    check_even_positive(p)
    if t0 is None:
        t0 = 1.2 * max(convexification_time(p).t_star, 1.0)
    F = Field(p)
    xs = convex_slice_minimizer(evolve_at(p, t0))
    traj = integrate_yp(p, xs, t0, 0.0, field_=F)
    if traj.termination != REACHED_TARGET:
        raise NonConvergence(f"backward run stopped with {traj.termination} at t={traj.t[-1]:.6g}")
    x = _polish_critical(p, float(traj.x[-1]))
    alternatives = []
    if p.deriv(2)(x) < 0 and p.degree >= 4:
        # the run went straight through an FP2-FP3 point onto a maximum;
        # a minimiser lies at the end of one of the two side branches there
        p2 = np.array([F.deriv(2, u, v) for u, v in zip(traj.x, traj.t)])
        i = int(np.argmax(p2 * p2[0] <= 0))
        cands = fp2_fp3_intersections(p)
        if cands:
            mp = min(cands, key=lambda m: abs(m.t - traj.t[i]) + abs(m.x - traj.x[i]))
            ends = [_polish_critical(p, e) for e in _side_branch_ends(F, mp.x, mp.t, traj.level)]
            if ends:
                best = min(p(e) for e in ends)
                alternatives = [e for e in ends if p(e) <= best + 1e-9 * (1 + abs(best))]
                x = alternatives[0]
    attainable, om, oms = None, None, []
    if with_oracle:
        orc = brute_force_min(p)
        oms = orc.minimizers
        cand = alternatives or [x]
        om = min(oms, key=lambda m: min(abs(m - c) for c in cand))
        attainable = min(abs(om - c) for c in cand) <= match_tol
    return MinimizeResult(x, p(x), attainable, om, traj, t0, oms, alternatives)


def _side_branch_ends(F: Field, xi: float, ti: float, h: float) -> list[float]:
    """``t = 0`` ends of the two sideways branches of ``p_x = h`` at ``(xi, ti)``.

    Near the crossing they follow ``t ~ ti - (x - xi)^2 / 3``; the branch
    points at a lower time are the outer two of the three nearby roots of
    ``p_x(., tb) = h``.  Each is integrated back to 0 and snapped onto the
    nearest root of ``p'(x) = h``.
    """
    delta = 0.25 * math.sqrt(3.0 * ti)
    tb = ti - delta * delta / 3.0
    near = sorted(real_roots(F.slice(1, tb) - h).values, key=lambda r: abs(r - xi))[:3]
    if len(near) < 3:
        return []
    near.sort()
    targets = real_roots(F.slice(1, 0.0) - h).values
    ends = []
    for xb in (near[0], near[-1]):
        x0 = F.run(xb, tb, 0.0, record=False)[3]
        ends.append(min(targets, key=lambda c: abs(c - x0)))
    return ends


def _level_span(p: Polynomial) -> tuple[float, float] | None:
    """Smallest interval holding every point whose level of ``p'`` repeats.

    A point is confined only if the level ``p'(x0)`` is taken more than once,
    i.e. lies between the extreme local extrema of ``p'``.
    """
    d1 = p.deriv()
    ext = real_roots(p.deriv(2)).values
    if not ext:
        return None
    vals = [d1(x) for x in ext]
    lo = real_roots(d1 - min(vals)).values[0]
    hi = real_roots(d1 - max(vals)).values[-1]
    return lo, hi


def _shoot(F: Field, xs: np.ndarray, t_max: float, escape_t: float, threads: int) -> np.ndarray:
    h_max = t_max / 1000.0
    args = (t_max, RTOL, h_max, F.sing_tol, F.tol3, escape_t, F.scale)
    if threads <= 1 or len(xs) < 2 * threads:
        return K.shoot_many(F.D, xs, *args)
    chunks = np.array_split(xs, threads)
    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(lambda c: K.shoot_many(F.D, c, *args), chunks))
    return np.concatenate(parts)


def _nudge(F: Field, x: float) -> float:
    if abs(F.deriv(2, x, 0.0)) < F.sing_tol:
        return x + 1e-9 * (1 + abs(x))
    return x


def _merge_intervals(iv: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for lo, hi in sorted(iv):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


def classify_zones(
    p: Polynomial,
    grid: int = DEFAULT_GRID,
    method: str = "shooting",
    boundary_tol: float = BOUNDARY_TOL,
    t_max: float | None = None,
    threads: int = 1,
) -> ZoneReport:
    """Confinement zone at ``t = 0``.

    ``method="shooting"`` integrates forward from a uniform grid (plus the
    critical points of ``p``) and bisects every confined/escaping
    transition to ``boundary_tol``.  A run is stopped as escaping as soon as
    ``t`` exceeds the convexification time, after which no collision can
    happen.  ``method="saddles"`` builds each interval from the level curve
    through an FP2-FP3 point, see :func:`zones_from_saddles`.
    """
    check_even_positive(p)
    t_star = convexification_time(p).t_star
    if t_max is None:
        t_max = 1.5 * t_star + 1.0
    merges = []
    if p.degree >= 4:
        merges = fp1_merge_points(p) + fp2_fp3_intersections(p)
    if method == "saddles":
        rep = zones_from_saddles(p, t_star=t_star)
        rep.merge_points = merges
        rep.t_max = t_max
        return rep
    if method != "shooting":
        raise ValueError(f"unknown zone method {method!r}")
    span = _level_span(p) if t_star > 0 else None
    if span is None:
        return ZoneReport([], merges, boundary_tol, method, t_max)
    F = Field(p)
    crit = [x for x in real_roots(p.deriv()).values if span[0] <= x <= span[1]]
    xs = np.unique(np.concatenate([np.linspace(span[0], span[1], grid), crit]))
    xs = np.array([_nudge(F, x) for x in xs])
    st = _shoot(F, xs, t_max, t_star, threads)
    failures = int(np.sum(st == K.FAILURE))
    conf = (st == K.MERGE) | (st == K.FAILURE)

    def confined(x):
        r = F.run(_nudge(F, x), 0.0, t_max, escape_t=t_star, record=False, h_max=t_max / 1000.0)
        return r[2] in (K.MERGE, K.FAILURE)

    def boundary(a, b, a_conf):
        while b - a > boundary_tol:
            m = 0.5 * (a + b)
            if confined(m) == a_conf:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    intervals = []
    start = None
    for i in range(len(xs)):
        if conf[i] and start is None:
            start = xs[i] if i == 0 else boundary(xs[i - 1], xs[i], False)
        if start is not None and (i == len(xs) - 1 or not conf[i + 1]):
            end = xs[i] if i == len(xs) - 1 else boundary(xs[i], xs[i + 1], True)
            intervals.append((float(start), float(end)))
            start = None
    return ZoneReport(_merge_intervals(intervals), merges, boundary_tol, method, t_max, failures)


def zones_from_saddles(p: Polynomial, t_star: float | None = None) -> ZoneReport:
    """Confinement zone from the level curves through FP2-FP3 points.

    At such a point ``(x_i, t_i)`` the level set ``p_x = h_i`` crosses
    itself: one branch continues upward, one goes down to ``t = 0`` and two
    bend down sideways along ``t ~ t_i - (x - x_i)^2 / 3``.  When the upward
    branch escapes, every start between the ``t = 0`` ends of the two side
    branches is trapped below them, and those ends bound a confinement
    interval.
    """
    check_even_positive(p)
    if t_star is None:
        t_star = convexification_time(p).t_star
    F = Field(p)
    intervals = []
    for mp in fp2_fp3_intersections(p) if p.degree >= 4 else []:
        xi, ti = mp.x, mp.t
        if ti <= 1e-14:
            continue
        h = F.deriv(1, xi, ti)
        if not _saddle_escapes(F, xi, ti, h, t_star):
            continue
        ends = _side_branch_ends(F, xi, ti, h)
        if len(ends) < 2:
            continue
        intervals.append((min(ends), max(ends)))
    return ZoneReport(_merge_intervals(intervals), [], 0.0, "saddles", 0.0)


def _saddle_escapes(F: Field, xi: float, ti: float, h: float, t_star: float) -> bool:
    if ti >= t_star * (1 - 1e-9):
        return True
    eps = min(1e-4 * t_star, 0.1 * (t_star - ti))
    t = ti + eps
    # the upward branch is the only part of the level set just above t_i
    q = F.slice(1, t) - h
    x = min(real_roots(q).values, key=lambda r: abs(r - xi))
    r = F.run(x, t, 1.5 * t_star + 1.0, escape_t=t_star, record=False)
    return r[2] in (K.ESCAPED, K.REACHED)


def attainability(
    p: Polynomial, grid: int = DEFAULT_GRID, method: str = "shooting", match_tol: float = MATCH_TOL,
    threads: int = 1,
) -> Attainability:
    """Does the backward flow reach a global minimiser?

    Decided as "some oracle minimiser lies outside the confinement zone" and
    cross-checked against an actual backward run.  A disagreement with the
    minimiser farther than ``1e-4 * scale`` from every zone endpoint raises
    ``ConsistencyViolation``; closer than that the case is flagged ambiguous
    and the backward run decides.
    """
    orc = brute_force_min(p)
    zones = classify_zones(p, grid, method=method, threads=threads)
    flow = backward_flow_minimize(p, match_tol=match_tol)
    outside = any(not zones.contains(m) for m in orc.minimizers)
    if outside == flow.attainable:
        return Attainability(outside, orc, zones, flow)
    gap = min(zones.distance_to_boundary(m) for m in orc.minimizers)
    if gap <= 1e-4 * p.scale():
        return Attainability(bool(flow.attainable), orc, zones, flow, ambiguous=True)
    raise ConsistencyViolation(
        f"zone test says {'outside' if outside else 'inside'} but the backward flow "
        f"{'reached' if flow.attainable else 'missed'} the global minimiser "
        f"(flow {flow.minimizer:.8g}, oracle {orc.minimizers})"
    )
