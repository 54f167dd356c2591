"""Reference global minimisation by enumerating every real critical point."""

from __future__ import annotations

from dataclasses import dataclass, field

from .heat import check_even_positive
from .polynomial import Polynomial, real_roots

MATCH_TOL = 1e-4


@dataclass(frozen=True)
class CriticalPoint:
    x: float
    value: float
    kind: str  # "min", "max" or "inflection"


@dataclass(frozen=True)
class OracleResult:
    minimizers: list[float]
    value: float
    critical_points: list[CriticalPoint] = field(default_factory=list)


@dataclass(frozen=True)
class Verdict:
    match: bool
    distance: float

    def __bool__(self):
        return self.match

    def __str__(self):
        return "Match" if self.match else f"Mismatch({self.distance:.6g})"


def _kind(p: Polynomial, x: float) -> str:
    # first non-vanishing derivative of order >= 2 decides
    scale = p.scale()
    for m in range(2, p.degree + 1):
        d = p.deriv(m)(x)
        if abs(d) > 1e-9 * scale * max(1.0, abs(x)) ** (p.degree - m):
            if m % 2 == 1:
                return "inflection"
            return "min" if d > 0 else "max"
    return "min"


def brute_force_min(p: Polynomial) -> OracleResult:
    """All global minimisers of an even-degree, positive-leading polynomial.

    Ties are resolved with ``1e-9 * (1 + |value|)``; every tied minimiser is
    reported.
    """
    check_even_positive(p)
    pts = []
    for x, _ in real_roots(p.deriv()):
        pts.append(CriticalPoint(x, p(x), _kind(p, x)))
    best = min(c.value for c in pts)
    tie = 1e-9 * (1.0 + abs(best))
    mins = [c.x for c in pts if c.value <= best + tie and c.kind != "max"]
    return OracleResult(mins, best, pts)


def verify_method(p: Polynomial, candidate: float, match_tol: float = MATCH_TOL) -> Verdict:
    mins = brute_force_min(p).minimizers
    d = min(abs(candidate - m) for m in mins)
    return Verdict(d <= match_tol, d)
