"""Heat evolution of polynomials in closed form.

Convolving ``p`` with a Gaussian of variance ``t`` solves ``u_t = u_xx / 2``
with ``u(x, 0) = p(x)``.  For a polynomial the Taylor series of the solution
terminates::

    p(x, t) = sum_j t^j / (2^j j!) * p^(2j)(x)

so the evolution is an exact polynomial in both ``x`` and ``t``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NegativeLeading, NonpositiveWidth, OddDegree, ZeroPolynomial
from .polynomial import Polynomial, TPoly, real_roots, sturm_count


@dataclass(frozen=True)
class EvolvedPolynomial:
    base: Polynomial
    sym: TPoly

    def at(self, t: float) -> Polynomial:
        return self.sym.at(t)

    def __call__(self, x: float, t: float) -> float:
        return self.sym(x, t)

    def dx(self, k: int = 1) -> TPoly:
        return self.sym.dx(k)


@dataclass(frozen=True)
class ConvexificationResult:
    t_star: float
    certificate: str  # "closed_form" or "bisection"
    witness: dict


def evolve_symbolic(p: Polynomial) -> EvolvedPolynomial:
    n = p.degree
    grid = np.zeros((n + 1, n // 2 + 1))
    d = p
    for j in range(n // 2 + 1):
        w = 1.0 / (2.0**j * math.factorial(j))
        for i, c in enumerate(d.coeffs):
            grid[i, j] += c * w
        d = d.deriv(2)
    return EvolvedPolynomial(p, TPoly.from_grid(grid))


def evolve_at(p: Polynomial, t: float) -> Polynomial:
    """``p(., t)``; negative ``t`` runs the (polynomial) formula backwards."""
    if t < 0:
        warnings.warn("evolving to negative t (backward heat extension)", stacklevel=2)
    out = np.zeros(len(p.coeffs))
    d = p
    w = 1.0
    j = 0
    while not d.is_zero():
        out[: len(d.coeffs)] += w * np.asarray(d.coeffs)
        j += 1
        w *= t / (2.0 * j)
        d = d.deriv(2)
    return Polynomial(out)


def steklov(p: Polynomial, t: float) -> Polynomial:
    """Moving average ``(P(x+t) - P(x-t)) / (2t)`` with ``P`` an antiderivative."""
    if not t > 0:
        raise NonpositiveWidth(f"window half-width must be positive, got {t}")
    P = p.antiderivative()
    return (P.shift(t) - P.shift(-t)) / (2.0 * t)


def check_even_positive(p: Polynomial) -> None:
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no minimiser")
    if p.degree % 2 == 1 or p.degree == 0:
        raise OddDegree(f"degree {p.degree} polynomial is unbounded below or constant")
    if p.leading < 0:
        raise NegativeLeading("negative leading coefficient: unbounded below")


def _convex_at(p: Polynomial, t: float) -> tuple[bool, int, float]:
    pxx = evolve_at(p, t).deriv(2)
    count = sturm_count(pxx, -math.inf, math.inf)
    if count == 0:
        return True, 0, math.nan
    crit = real_roots(pxx.deriv())
    low = min(pxx(x) for x in crit.values) if len(crit) else pxx(0.0)
    return low >= -1e-12 * pxx.scale(), count, low


def convexification_time(p: Polynomial) -> ConvexificationResult:
    """Smallest ``t >= 0`` from which ``p(., t)`` stays convex.

    Quartics use the closed form ``max(0, a^2/16 - b/6)`` of the monic
    normalisation.  Other degrees bisect on ``t``; the predicate is an exact
    Sturm count showing that ``p_xx(., t)`` has no real root (or, for a
    tangential touch, that its minimum is nonnegative to rounding).
    """
    check_even_positive(p)
    if p.degree == 2:
        return ConvexificationResult(0.0, "closed_form", {})
    if p.degree == 4:
        a = p.coeffs[3] / p.coeffs[4]
        b = p.coeffs[2] / p.coeffs[4]
        return ConvexificationResult(max(0.0, a * a / 16.0 - b / 6.0), "closed_form", {"a": a, "b": b})
    if _convex_at(p, 0.0)[0]:
        return ConvexificationResult(0.0, "bisection", {"roots_at_t0": 0})
    hi = 1.0 + max(1.0, max(abs(c) for c in p.monic().coeffs)) ** 2
    while not _convex_at(p, hi)[0]:
        hi *= 2.0
    lo = 0.0
    while hi - lo > min(1e-10, 1e-9 * hi):
        mid = 0.5 * (lo + hi)
        if _convex_at(p, mid)[0]:
            hi = mid
        else:
            lo = mid
    ok, count, _ = _convex_at(p, hi)
    _, count_lo, low = _convex_at(p, lo)
    return ConvexificationResult(
        hi, "bisection", {"t_convex": hi, "roots_at_t": count, "t_nonconvex": lo, "roots_below": count_lo, "min_below": low}
    )


def critical_value_delta(p: Polynomial, x: float, t: float) -> float:
    """Rate ``d/dt p(x(t), t) = p_xx / 2`` along a critical trajectory."""
    return 0.5 * evolve_at(p, t).deriv(2)(x)
