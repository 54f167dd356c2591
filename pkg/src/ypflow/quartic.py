"""Closed-form analysis of monic quartics ``x^4 + a x^3 + b x^2 + c x + d``.

Under heat evolution the quartic keeps its ``x^3`` coefficient, so the
third derivative vanishes on the fixed line ``x = -a/4``.  With
``K = a^3 - 4ab + 8c``:

* ``t* = a^2/16 - b/6`` is the time the evolution becomes convex;
* ``t_u = t* - K^(2/3)/16`` is when two critical points annihilate, at
  ``x = (K/64)^(1/3) - a/4``;
* the critical point surviving past ``t_u`` sits at
  ``-a/4 - 2 (K/64)^(1/3)``;
* starts in ``[-a/4 - sqrt(3 t*), -a/4 + sqrt(3 t*)]`` are confined.

Cube roots of negative numbers are the real ones throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import NonConvergence, NotApplicable, WrongDegree
from .heat import evolve_at
from .polynomial import Polynomial, real_roots, solve_cubic


class Side(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"
    BOTH = "Both"
    SINGLE_CRITICAL = "SingleCritical"


@dataclass(frozen=True)
class QuarticReport:
    a: float
    b: float
    c: float
    d: float
    t_star: float
    t_u: float
    merge_x: float
    x_init: float
    confinement: tuple[float, float] | None
    side: Side

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "t_star": self.t_star,
            "t_u": self.t_u,
            "merge_x": self.merge_x,
            "x_init": self.x_init,
            "confinement": list(self.confinement) if self.confinement else None,
            "side": self.side.value,
        }


def _cbrt(v: float) -> float:
    return float(np.cbrt(v))


def monic_coeffs(p: Polynomial) -> tuple[float, float, float, float]:
    if p.degree != 4:
        raise WrongDegree(f"expected a quartic, got degree {p.degree}")
    m = p.monic().coeffs
    return m[3], m[2], m[1], m[0]


def _poly(a, b, c, d) -> Polynomial:
    return Polynomial([d, c, b, a, 1.0])


def _tol_side(a, b, c, d) -> float:
    return 1e-9 * (1.0 + max(abs(a), abs(b), abs(c), abs(d)))


def analyze(a: float, b: float, c: float, d: float = 0.0) -> QuarticReport:
    t_star = a * a / 16.0 - b / 6.0
    k = a**3 - 4 * a * b + 8 * c
    r = _cbrt(k / 64.0)
    t_u = t_star - _cbrt(k) ** 2 / 16.0
    conf = None
    if t_star >= 0:
        w = math.sqrt(3.0 * t_star)
        conf = (-a / 4.0 - w, -a / 4.0 + w)
    return QuarticReport(a, b, c, d, t_star, t_u, r - a / 4.0, -a / 4.0 - 2.0 * r, conf, global_min_side(a, b, c, d))


def critical_points(a: float, b: float, c: float) -> list[float]:
    """Distinct real roots of ``4x^3 + 3a x^2 + 2b x + c``."""
    return solve_cubic(0.75 * a, 0.5 * b, 0.25 * c).roots.values


def global_min_side(a: float, b: float, c: float, d: float = 0.0) -> Side:
    """Which outer critical point is the global minimiser.

    With three critical points ``x1 < x2 < x3`` the right one wins exactly
    when the local maximum ``x2`` lies left of ``-a/4``.
    """
    cub = solve_cubic(0.75 * a, 0.5 * b, 0.25 * c)
    if cub.case != -1:
        return Side.SINGLE_CRITICAL
    x2 = cub.roots.values[1]
    if abs(_poly(a, b, c, d).deriv()(-a / 4.0)) <= _tol_side(a, b, c, d):
        return Side.BOTH
    return Side.RIGHT if x2 < -a / 4.0 else Side.LEFT


def _polish(a, b, c, d, x) -> float:
    dp = _poly(a, b, c, d).deriv()
    roots = real_roots(dp).values
    r = min(roots, key=lambda r: abs(r - x))
    return r if abs(r - x) <= 1e-3 * (1.0 + abs(x)) else x


def fixed_start_descent(
    a: float, b: float, c: float, d: float = 0.0, step: float | None = None, max_iter: int = 1_000_000
) -> list[float]:
    """Gradient descent ``x <- x - step * p'(x)`` started at ``-a/4``.

    From this start the descent cannot be trapped by the wrong local
    minimum.  When ``-a/4`` is itself critical (the symmetric case) the two
    global minimisers are the roots of the quadratic ``p'(x) / (4(x + a/4))``.
    """
    scale = 1.0 + max(abs(a), abs(b), abs(c), abs(d))
    if step is None:
        step = 1e-3 / scale
    x0 = -a / 4.0
    p = _poly(a, b, c, d)
    if abs(p.deriv()(x0)) <= _tol_side(a, b, c, d):
        quad, _ = p.deriv().divmod(Polynomial([-4.0 * x0, 4.0]))
        rs = real_roots(quad).values
        if len(rs) == 2:
            return [_polish(a, b, c, d, r) for r in rs]
        return [x0]
    x, its = K.quartic_descent(a, b, c, x0, step, max_iter)
    if its < 0:
        raise NonConvergence(f"descent did not settle in {max_iter} iterations (step {step:g})")
    return [_polish(a, b, c, d, x)]


def backward_iteration(a: float, b: float, c: float, d: float = 0.0, dt: float | None = None) -> float:
    """Explicit Euler on the quartic trajectory ODE from ``(x_init, t_u)`` to 0.

    The survivor of the annihilation at ``t_u`` is followed back to
    ``t = 0`` and polished onto the nearest root of ``p'``.  With a single
    critical point (``t_u <= 0``) that root is returned directly.
    """
    rep = analyze(a, b, c, d)
    if rep.side is Side.BOTH:
        raise NotApplicable("-a/4 is a critical point; use the symmetric-case quadratic")
    if rep.t_u <= 0 or rep.side is Side.SINGLE_CRITICAL:
        roots = critical_points(a, b, c)
        p = _poly(a, b, c, d)
        return min(roots, key=p)
    if dt is None:
        dt = rep.t_u / 1e5
    x = K.quartic_euler_backward(a, b, rep.x_init, rep.t_u, dt)
    return _polish(a, b, c, d, x)


def coeffs_from_critical_points(x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    """``(a, b, c)`` of the monic quartic whose critical points are given."""
    s1 = x1 + x2 + x3
    s2 = x1 * x2 + x2 * x3 + x3 * x1
    s3 = x1 * x2 * x3
    return -4.0 * s1 / 3.0, 2.0 * s2, -4.0 * s3


def value_gap(x1: float, x2: float, x3: float) -> float:
    """``p(x3) - p(x1)`` for the quartic with critical points x1, x2, x3."""
    return -((x3 - x1) ** 3) * (x1 + x3 - 2.0 * x2) / 3.0


def quartic_t_times_from_roots(x1: float, x2: float, x3: float) -> tuple[float, float]:
    """``(t*, t_u)`` from the critical points alone."""
    s1 = x1 + x2 + x3
    s2 = x1 * x2 + x2 * x3 + x3 * x1
    t_star = (s1 / 3.0) ** 2 - s2 / 3.0
    prod = (2 * x1 - x2 - x3) * (2 * x2 - x3 - x1) * (2 * x3 - x1 - x2)
    return t_star, t_star - _cbrt(prod / 54.0) ** 2


def cubic_discriminant_in_t(a: float, b: float, c: float) -> Polynomial:
    """Discriminant ``g^2/4 + f^3/27`` of ``p_x(., t) / 4`` as a cubic in ``t``."""
    # p_x / 4 = x^3 + (3a/4) x^2 + (b/2 + 3t) x + (c + 3at)/4
    al = Polynomial([0.75 * a])
    be = Polynomial([0.5 * b, 3.0])
    ga = Polynomial([0.25 * c, 0.75 * a])
    f = be - al * al / 3.0
    g = al * al * al * (2.0 / 27.0) - al * be / 3.0 + ga
    return g * g / 4.0 + f * f * f / 27.0


def triangle_vertices(a: float, b: float, c: float, d: float, ts) -> list[tuple[float, float, float]]:
    """Rows ``(t, x_i^t, p(x_i^t, t))`` for each critical point of each slice."""
    p = _poly(a, b, c, d)
    rows = []
    for t in ts:
        q = evolve_at(p, float(t))
        for x in real_roots(q.deriv()).values:
            rows.append((float(t), x, q(x)))
    return rows
