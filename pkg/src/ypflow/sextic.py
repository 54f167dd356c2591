"""Sextic specialisations.

After the shift removing the ``x^5`` term, ``p = x^6 + b x^4 + c x^3 + d x^2
+ e x + f`` and ``p_xx / 30`` is the depressed quartic

    x^4 + beta x^2 + gamma x + delta,
    beta = 2b/5 + 6t,  gamma = c/5,  delta = d/15 + 2bt/5 + 3t^2.

Its discriminant is a degree-6 polynomial ``Delta(t)`` whose real roots are
the times at which an inflection pair meets (``p_xx`` and ``p_xxx`` vanish
together).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyViolation, DegenerateDenominator, NotAMergeTime, WrongDegree
from .fingerprint import MergePoint, FP2_FP3, common_zeros
from .heat import evolve_symbolic
from .polynomial import DoubleRootClass, Polynomial, classify_depressed_quartic, real_roots, resultant_in_t


@dataclass(frozen=True)
class SexticForm:
    b: float
    c: float
    d: float
    e: float
    f: float
    shift: float

    def depressed(self) -> Polynomial:
        return Polynomial([self.f, self.e, self.d, self.c, self.b, 0.0, 1.0])

    def original(self) -> Polynomial:
        """Monic polynomial in the original variable, ``q(x - shift)``."""
        return self.depressed().shift(-self.shift)


@dataclass
class SexticReport:
    form: SexticForm
    delta: Polynomial
    merge_times: list[float]
    merge_points: list[MergePoint]
    cases: list[DoubleRootClass]
    negative_roots: list[float] = field(default_factory=list)
    degenerate: bool = False


def depress(p: Polynomial) -> SexticForm:
    """Remove the ``x^5`` term by ``x = y + shift`` with ``shift = -c5/6``."""
    if p.degree != 6:
        raise WrongDegree(f"expected degree 6, got {p.degree}")
    m = p.monic()
    s = -m.coeffs[5] / 6.0
    q = list(m.shift(s).coeffs)
    q[5] = 0.0
    return SexticForm(q[4], q[3], q[2], q[1], q[0], s)


def delta_t(b: float, c: float, d: float) -> Polynomial:
    """Discriminant of the ``p_xx`` quartic of the depressed sextic, in ``t``."""
    coeffs = [
        27648.0,
        55296.0 / 5 * b,
        9216.0 / 5 * b**2,
        (4096 * b**3 + 1728 * c**2) / 25,
        4864.0 / 625 * b**4 + (512 * d * b**2 + 1728 * b * c**2) / 125 - 256.0 / 25 * d**2,
        32 * (b**2 + 5 * d) * (48 * b**3 - 80 * d * b + 135 * c**2) / 9375,
        256.0 / 9375 * b**4 * d
        - 32.0 / 3125 * b**3 * c**2
        - 512.0 / 5625 * b**2 * d**2
        + 96.0 / 625 * b * c**2 * d
        - 27.0 / 625 * c**4
        + 256.0 / 3375 * d**3,
    ]
    return Polynomial.from_descending(coeffs)


def x_of_t(b: float, c: float, d: float, t: float) -> float:
    """Abscissa of the double root of ``p_xx(., t)`` at a root ``t`` of ``Delta``.

    ``x = -c (1800 s^2 - 4h) / (36000 s^3 + 80 h s + 45 c^2)`` with
    ``s = t + b/15`` and ``h = b^2 - 5d``.
    """
    s = t + b / 15.0
    h = b * b - 5.0 * d
    terms = (36000 * s**3, 80 * h * s, 45 * c * c)
    den = sum(terms)
    if abs(den) <= 1e-13 * max(sum(abs(v) for v in terms), 1e-300):
        raise DegenerateDenominator(f"x(t) denominator vanishes at t={t!r} (b={b}, c={c}, d={d})")
    return -c * (1800 * s * s - 4 * h) / den


def fp2_quartic(b: float, c: float, d: float, t: float) -> tuple[float, float, float]:
    """``(beta, gamma, delta)`` of ``p_xx(., t) / 30``."""
    return 2 * b / 5 + 6 * t, c / 5, d / 15 + 2 * b * t / 5 + 3 * t * t


def merge_case(b: float, c: float, d: float, t: float, tol_t: float = 1e-6) -> DoubleRootClass:
    """Root structure of the ``p_xx`` quartic at a merge time ``t``.

    ``t`` must lie within ``tol_t * (1 + |t|)`` of a real root of ``Delta``.
    """
    roots = real_roots(delta_t(b, c, d)).values
    if not roots or min(abs(r - t) for r in roots) > tol_t * (1 + abs(t)):
        raise NotAMergeTime(f"t={t!r} is not a root of Delta(t)")
    return classify_depressed_quartic(*fp2_quartic(b, c, d, t), assume_repeated=True)


def _cross_check(form: SexticForm, delta: Polynomial, tol: float = 1e-8) -> None:
    E = evolve_symbolic(form.depressed())
    res = resultant_in_t(E.dx(2), E.dx(3))
    a = np.array(delta.coeffs)
    r = np.array(res.coeffs)
    if len(a) != len(r):
        raise ConsistencyViolation("Delta(t) and the resultant differ in degree")
    lam = float(r @ a) / float(a @ a)
    if np.max(np.abs(r - lam * a)) > 1e-8 * np.max(np.abs(r)):
        raise ConsistencyViolation("Delta(t) is not proportional to the resultant of p_xx, p_xxx")
    ra, rr = real_roots(delta).values, real_roots(res).values
    if len(ra) != len(rr) or any(abs(u - v) > tol * (1 + abs(u)) for u, v in zip(ra, rr)):
        raise ConsistencyViolation(f"Delta(t) roots {ra} differ from resultant roots {rr}")


def analyze_sextic(p: Polynomial) -> SexticReport:
    """Merge times, FP2-FP3 points (original frame) and their root classes."""
    form = depress(p)
    b, c, d = form.b, form.c, form.d
    delta = delta_t(b, c, d)
    _cross_check(form, delta)
    times, negative = [], []
    for r in real_roots(delta).values:
        (times if r >= -1e-12 else negative).append(max(r, 0.0) if r >= -1e-12 else r)
    points = []
    cases = []
    q = form.depressed()
    E = evolve_symbolic(q)
    scale = q.scale()
    for t in times:
        try:
            xs = [x_of_t(b, c, d, t)]
            if abs(c) <= 1e-12 * (1 + abs(b) + abs(d)):
                raise DegenerateDenominator("c = 0")
        except DegenerateDenominator:
            xs = [x for x, tt in common_zeros(q, 2) if abs(tt - t) <= 1e-8 * (1 + t)]
        for x in xs:
            if abs(E.dx(2)(x, t)) <= 1e-6 * scale and abs(E.dx(3)(x, t)) <= 1e-6 * scale:
                points.append(MergePoint(x + form.shift, t, FP2_FP3))
        cases.append(classify_depressed_quartic(*fp2_quartic(b, c, d, t), assume_repeated=True))
    return SexticReport(form, delta, times, points, cases, negative, degenerate=len(times) > 2)
