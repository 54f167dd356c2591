"""Dense univariate real polynomials and the root machinery built on them.

Coefficients are stored lowest power first.  ``TPoly`` holds a polynomial in
``x`` whose coefficients are themselves polynomials in a second variable
``t``; the heat module uses it for the closed-form evolution ``p(x, t)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateLeading, ZeroPolynomial

TOL_RESIDUAL = 1e-10
TOL_MULT = 1e-7
_EPS = np.finfo(float).eps


class Polynomial:
    """Immutable dense polynomial, ``coeffs[k]`` multiplies ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float] = (0.0,)):
        c = [float(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        if not all(math.isfinite(v) for v in c):
            raise ValueError(f"non-finite coefficient in {c!r}")
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable[float], leading: float = 1.0) -> "Polynomial":
        out = cls([leading])
        for r in roots:
            out = out * cls([-r, 1.0])
        return out

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "Polynomial":
        return cls(list(coeffs)[::-1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    @property
    def norm(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def scale(self) -> float:
        """``1 + max|coeff|``, the reference size for residual tolerances."""
        return 1.0 + self.norm

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return npoly.polyval(x, self.coeffs)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def magnitude(self, x: float) -> float:
        """``sum |c_k| |x|^k``: the size of the terms cancelling in ``p(x)``."""
        ax = abs(x)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * ax + abs(c)
        return acc

    def deriv(self, k: int = 1) -> "Polynomial":
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        c = list(self.coeffs)
        for _ in range(k):
            if len(c) <= 1:
                return Polynomial()
            c = [i * c[i] for i in range(1, len(c))]
        return Polynomial(c)

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0.0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def shift(self, s: float) -> "Polynomial":
        """Return ``q(y) = p(y + s)``."""
        out = [0.0] * len(self.coeffs)
        d = self
        fact = 1.0
        for k in range(len(self.coeffs)):
            out[k] = d(s) / fact
            d = d.deriv()
            fact *= k + 1
        return Polynomial(out)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalise the zero polynomial")
        return self / self.leading

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = npoly.polydiv(self.coeffs, other.coeffs)
        return Polynomial(q), Polynomial(r)

    def descending(self) -> list[float]:
        return list(self.coeffs[::-1])

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Polynomial([float(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, s: float):
        return Polynomial([c / s for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        from .parse import format_poly

        return format_poly(self)


def derivative(p: Polynomial, k: int) -> Polynomial:
    return p.deriv(k)


def cauchy_bound(p: Polynomial) -> float:
    """Every root satisfies ``|x| < 1 + max |c_k / c_n|``."""
    if p.is_zero():
        raise ZeroPolynomial("root bound of the zero polynomial")
    lead = abs(p.leading)
    if p.degree == 0:
        return 1.0
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead


# ---------------------------------------------------------------------------
# real roots


@dataclass(frozen=True)
class RootSet:
    roots: tuple[tuple[float, int], ...] = ()

    @property
    def values(self) -> list[float]:
        return [r for r, _ in self.roots]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]

    def total(self) -> int:
        return sum(m for _, m in self.roots)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def _bracketed_root(p, dp, lo, hi, flo, stop_rel):
    # p is monotone on [lo, hi] with a sign change; safeguarded Newton.
    neg_lo = flo < 0
    x = 0.5 * (lo + hi)
    for _ in range(300):
        fx = p(x)
        if fx == 0.0 or abs(fx) <= stop_rel * p.magnitude(x):
            return x
        if (fx < 0) == neg_lo:
            lo = x
        else:
            hi = x
        d = dp(x)
        xn = x - fx / d if d != 0.0 else math.nan
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 2 * _EPS * abs(x) or hi - lo <= 4 * _EPS * max(abs(lo), abs(hi)):
            return xn
        x = xn
    return x


def _split_width(p: Polynomial, x: float, fx: float, m: int) -> float:
    # half-distance between the simple roots a residual fx would split a
    # root of multiplicity m+1 into: fx ~ p^(m+1)(x) w^(m+1) / (m+1)!
    k = m + 1
    d = p.deriv(k)(x)
    if fx == 0.0 or d == 0.0:
        return 0.0
    return (math.factorial(k) * abs(fx) / abs(d)) ** (1.0 / k)


def _real_roots(p: Polynomial, stop_rel: float, tol_mult: float) -> list[tuple[float, int]]:
    n = p.degree
    if n <= 0:
        return []
    if n == 1:
        return [(-p.coeffs[0] / p.coeffs[1] + 0.0, 1)]
    dp = p.deriv()
    crit = _real_roots(dp, stop_rel, tol_mult)
    bound = cauchy_bound(p)
    if crit:
        bound = max(bound, 1.0 + max(abs(c) for c, _ in crit))
    floor = _EPS * p.norm
    points = [(-bound, None)] + [(c, m) for c, m in crit] + [(bound, None)]
    vals = []
    roots = []
    for x, m in points:
        fx = p(x)
        if m is not None and abs(fx) <= tol_mult * max(p.magnitude(x), floor) and _split_width(p, x, fx, m) <= math.sqrt(
            tol_mult
        ) * (1.0 + abs(x)):
            roots.append((x + 0.0, m + 1))
            fx = 0.0
        vals.append(fx)
    for i in range(len(points) - 1):
        fl, fr = vals[i], vals[i + 1]
        if fl * fr < 0.0:
            roots.append((_bracketed_root(p, dp, points[i][0], points[i + 1][0], fl, stop_rel), 1))
    roots.sort()
    return roots


def real_roots(p: Polynomial, tol: float = TOL_RESIDUAL, tol_mult: float = TOL_MULT) -> RootSet:
    """All distinct real roots of ``p`` with multiplicities.

    Roots are isolated by Rolle's theorem: between consecutive real critical
    points ``p`` is monotone, so each such interval holds at most one simple
    root, found by safeguarded Newton.  A critical point at which ``p`` also
    vanishes (relative residual below ``tol_mult``) is a multiple root whose
    multiplicity is one more than its multiplicity as a root of ``p'``.
    ``tol`` scales the early-exit residual of the polishing iteration.
    """
    if p.is_zero():
        raise ZeroPolynomial("real_roots of the zero polynomial")
    return RootSet(tuple(_real_roots(p, tol * 1e-6, tol_mult)))


# ---------------------------------------------------------------------------
# Sturm sequences, exact over the rationals


def _frac_trim(c):
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _frac_rem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and not (len(a) == 1 and a[0] == 0):
        coef = a[-1] / lb
        shift = len(a) - 1 - db
        for i in range(db + 1):
            a[i + shift] -= coef * b[i]
        a.pop()
        _frac_trim(a)
        if not a:
            a = [Fraction(0)]
    return a


@lru_cache(maxsize=512)
def _sturm_chain(coeffs: tuple) -> tuple:
    p0 = [Fraction(c) for c in coeffs]
    p1 = _frac_trim([i * p0[i] for i in range(1, len(p0))]) or [Fraction(0)]
    chain = [p0]
    if not (len(p1) == 1 and p1[0] == 0):
        chain.append(p1)
    while len(chain) >= 2 and len(chain[-1]) > 1:
        r = _frac_rem(chain[-2], chain[-1])
        if len(r) == 1 and r[0] == 0:
            break
        lc = abs(r[-1])
        chain.append([-c / lc for c in r])
    return tuple(tuple(c) for c in chain)


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _chain_signs_at(chain, x):
    if x == math.inf or x == -math.inf:
        out = []
        for c in chain:
            s = 1 if c[-1] > 0 else -1
            if x < 0 and (len(c) - 1) % 2 == 1:
                s = -s
            out.append(s)
        return out
    fx = Fraction(x)
    out = []
    for c in chain:
        acc = Fraction(0)
        for v in reversed(c):
            acc = acc * fx + v
        out.append((acc > 0) - (acc < 0))
    return out


def sturm_count(p: Polynomial, a: float, b: float) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(a, b)``.

    The Sturm chain is built in exact rational arithmetic from the binary
    values of the coefficients, so the count is exact for the float
    polynomial given.  ``a`` and ``b`` may be infinite.
    """
    if p.is_zero():
        raise ZeroPolynomial("sturm_count of the zero polynomial")
    if not a < b:
        raise ValueError("sturm_count needs a < b")
    if p.degree == 0:
        return 0
    chain = _sturm_chain(p.coeffs)
    if math.isfinite(a) and _exact_value(p, a) == 0:
        a = math.nextafter(a, math.inf)
    if math.isfinite(b) and _exact_value(p, b) == 0:
        b = math.nextafter(b, -math.inf)
    return _sign_changes(_chain_signs_at(chain, a)) - _sign_changes(_chain_signs_at(chain, b))


def _exact_value(p: Polynomial, x: float) -> Fraction:
    fx = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * fx + Fraction(c)
    return acc


# ---------------------------------------------------------------------------
# closed-form cubic


@dataclass(frozen=True)
class CubicRoots:
    roots: RootSet
    case: int  # sign of the discriminant g^2/4 + f^3/27
    discriminant: float


def _newton_polish(coeffs, x, iters=3):
    f = Polynomial(coeffs)
    df = f.deriv()
    best, fbest = x, abs(f(x))
    for _ in range(iters):
        d = df(best)
        if d == 0.0 or fbest == 0.0:
            break
        xn = best - f(best) / d
        fn = abs(f(xn))
        if fn >= fbest:
            break
        best, fbest = xn, fn
    return best


def solve_cubic(alpha: float, beta: float, gamma: float, tol: float = 1e-12) -> CubicRoots:
    """Real roots of ``x^3 + alpha x^2 + beta x + gamma`` by discriminant case.

    With ``f = beta - alpha^2/3`` and ``g = 2 alpha^3/27 - alpha beta/3 +
    gamma``, the discriminant ``g^2/4 + f^3/27`` is negative for three
    distinct real roots (trigonometric form), zero for a repeated root and
    positive for a single real root (Cardano).  A discriminant within
    ``tol`` of zero relative to its terms is treated as zero.  Simple roots
    get a few guarded Newton steps.
    """
    f = beta - alpha * alpha / 3.0
    g = 2.0 * alpha**3 / 27.0 - alpha * beta / 3.0 + gamma
    disc = g * g / 4.0 + f**3 / 27.0
    scale = g * g / 4.0 + abs(f) ** 3 / 27.0
    shift = -alpha / 3.0
    coeffs = (gamma, beta, alpha, 1.0)
    if scale == 0.0 or abs(disc) <= tol * scale:
        if scale == 0.0:
            return CubicRoots(RootSet(((shift, 3),)), 0, 0.0)
        u = float(np.cbrt(g / 2.0))
        single = -2.0 * u + shift
        double = u + shift
        if abs(single - double) <= 4 * _EPS * max(abs(single), abs(double), 1e-300):
            return CubicRoots(RootSet(((double, 3),)), 0, disc)
        roots = sorted([(single, 1), (double, 2)])
        return CubicRoots(RootSet(tuple(roots)), 0, disc)
    if disc < 0.0:
        r = math.sqrt(-f)
        arg = 3.0 * math.sqrt(3.0) * g / (2.0 * r**3)
        theta = math.asin(min(1.0, max(-1.0, arg))) / 3.0
        k = 2.0 / math.sqrt(3.0) * r
        xs = [
            k * math.sin(theta) + shift,
            -k * math.sin(theta + math.pi / 3.0) + shift,
            k * math.cos(theta + math.pi / 6.0) + shift,
        ]
        xs = sorted(_newton_polish(coeffs, x) for x in xs)
        return CubicRoots(RootSet(tuple((x, 1) for x in xs)), -1, disc)
    s = math.sqrt(disc)
    x = float(np.cbrt(-g / 2.0 + s) + np.cbrt(-g / 2.0 - s)) + shift
    return CubicRoots(RootSet(((_newton_polish(coeffs, x), 1),)), 1, disc)


@dataclass(frozen=True)
class PowerSums:
    e1: float
    e2: float
    e3: float
    p2: float
    p3: float
    p4: float

    def identity_residuals(self) -> list[float]:
        """Residuals of Newton's identities for the monic cubic with these roots.

        With ``alpha = -e1``, ``beta = e2``, ``gamma = -e3`` the last three
        entries check ``p2 = alpha^2 - 2 beta``, ``p3 = -alpha^3 + 3 alpha
        beta - 3 gamma`` and ``p4 = alpha^4 - 4 alpha^2 beta + 4 alpha gamma
        + 2 beta^2``.
        """
        a, b, g = -self.e1, self.e2, -self.e3
        return [
            self.e1 + a,
            self.e2 - b,
            self.e3 + g,
            self.p2 - (a * a - 2 * b),
            self.p3 - (-(a**3) + 3 * a * b - 3 * g),
            self.p4 - (a**4 - 4 * a * a * b + 4 * a * g + 2 * b * b),
        ]


def power_sums_check(x1: float, x2: float, x3: float) -> PowerSums:
    return PowerSums(
        e1=x1 + x2 + x3,
        e2=x1 * x2 + x2 * x3 + x3 * x1,
        e3=x1 * x2 * x3,
        p2=x1**2 + x2**2 + x3**2,
        p3=x1**3 + x2**3 + x3**3,
        p4=x1**4 + x2**4 + x3**4,
    )


# ---------------------------------------------------------------------------
# depressed quartic x^4 + beta x^2 + gamma x + delta


class DoubleRootClass(enum.Enum):
    NO_REPEATED_ROOT = "NoRepeatedRoot"
    DOUBLE_PLUS_TWO_DISTINCT_REAL = "DoublePlusTwoDistinctReal"
    DOUBLE_PLUS_COMPLEX_PAIR = "DoublePlusComplexPair"
    TWO_REAL_DOUBLES = "TwoRealDoubles"
    TWO_COMPLEX_DOUBLES = "TwoComplexDoubles"
    TRIPLE_ROOT = "TripleRoot"
    QUADRUPLE_ROOT = "QuadrupleRoot"


def quartic_discriminant_terms(beta: float, gamma: float, delta: float) -> list[float]:
    return [
        256 * delta**3,
        -128 * beta**2 * delta**2,
        144 * beta * gamma**2 * delta,
        -27 * gamma**4,
        16 * beta**4 * delta,
        -4 * beta**3 * gamma**2,
    ]


def quartic_discriminant(beta: float, gamma: float, delta: float) -> float:
    return math.fsum(quartic_discriminant_terms(beta, gamma, delta))


def classify_depressed_quartic(
    beta: float, gamma: float, delta: float, tol: float = 1e-9, assume_repeated: bool = False
) -> DoubleRootClass:
    """Repeated-root structure of ``x^4 + beta x^2 + gamma x + delta``.

    Uses the auxiliary quantities ``P = 8 beta``, ``R = 8 gamma``,
    ``D0 = beta^2 + 12 delta`` and ``D = 64 delta - 16 beta^2``.  Zero tests
    are relative to the homogeneous root scale of the coefficients.
    ``assume_repeated`` skips the discriminant test (the caller knows the
    discriminant vanishes, e.g. at a computed merge time).
    """
    terms = quartic_discriminant_terms(beta, gamma, delta)
    s = max(abs(beta) ** 0.5, abs(gamma) ** (1 / 3), abs(delta) ** 0.25)
    if s == 0.0:
        return DoubleRootClass.QUADRUPLE_ROOT
    repeated = assume_repeated or abs(math.fsum(terms)) <= tol * sum(abs(v) for v in terms)
    if not repeated:
        return DoubleRootClass.NO_REPEATED_ROOT
    P = 8 * beta
    D0 = beta * beta + 12 * delta
    D = 64 * delta - 16 * beta * beta
    zero_D = abs(D) <= tol * 64 * s**4
    zero_D0 = abs(D0) <= tol * 12 * s**4
    zero_R = abs(gamma) <= tol * s**3
    zero_P = abs(beta) <= tol * s**2
    if zero_D:
        if zero_D0 or zero_P:
            return DoubleRootClass.QUADRUPLE_ROOT
        if P < 0:
            return DoubleRootClass.TWO_REAL_DOUBLES
        if zero_R:
            return DoubleRootClass.TWO_COMPLEX_DOUBLES
    if zero_D0:
        return DoubleRootClass.TRIPLE_ROOT
    if P < 0 and D < 0:
        return DoubleRootClass.DOUBLE_PLUS_TWO_DISTINCT_REAL
    return DoubleRootClass.DOUBLE_PLUS_COMPLEX_PAIR


# ---------------------------------------------------------------------------
# polynomials in x with coefficients polynomial in t


@dataclass(frozen=True)
class TPoly:
    """``sum_i tcoeffs[i](t) * x**i``."""

    tcoeffs: tuple[Polynomial, ...]

    def __post_init__(self):
        tc = [p if isinstance(p, Polynomial) else Polynomial(p) for p in self.tcoeffs]
        while len(tc) > 1 and tc[-1].is_zero():
            tc.pop()
        if not tc:
            tc = [Polynomial()]
        object.__setattr__(self, "tcoeffs", tuple(tc))

    @classmethod
    def from_grid(cls, grid) -> "TPoly":
        grid = np.atleast_2d(np.asarray(grid, dtype=float))
        return cls(tuple(Polynomial(row) for row in grid))

    @classmethod
    def constant_in_t(cls, p: Polynomial) -> "TPoly":
        return cls(tuple(Polynomial([c]) for c in p.coeffs))

    @property
    def degree_x(self) -> int:
        return len(self.tcoeffs) - 1

    @property
    def degree_t(self) -> int:
        return max(c.degree for c in self.tcoeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.tcoeffs)

    def grid(self, shape=None) -> np.ndarray:
        nx = len(self.tcoeffs)
        nt = self.degree_t + 1
        if shape is not None:
            nx, nt = max(nx, shape[0]), max(nt, shape[1])
        out = np.zeros((nx, nt))
        for i, c in enumerate(self.tcoeffs):
            out[i, : len(c.coeffs)] = c.coeffs
        return out

    def at(self, t: float) -> Polynomial:
        return Polynomial([c(t) for c in self.tcoeffs])

    def __call__(self, x: float, t: float) -> float:
        acc = 0.0
        for c in reversed(self.tcoeffs):
            acc = acc * x + c(t)
        return acc

    def dx(self, k: int = 1) -> "TPoly":
        tc = list(self.tcoeffs)
        for _ in range(k):
            if len(tc) <= 1:
                return TPoly((Polynomial(),))
            tc = [tc[i] * i for i in range(1, len(tc))]
        return TPoly(tuple(tc))

    def dt(self, k: int = 1) -> "TPoly":
        return TPoly(tuple(c.deriv(k) for c in self.tcoeffs))


def _row_degree_bound(rows_deg, upto, extra):
    return sum(rows_deg[:upto]) + extra


def _trim_rel(c: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    c = np.atleast_1d(c)
    if c.size == 0:
        return np.zeros(1)
    m = np.max(np.abs(c))
    if m == 0.0:
        return np.zeros(1)
    k = c.size
    while k > 1 and abs(c[k - 1]) <= rel * m:
        k -= 1
    return c[:k]


def resultant_in_t(P: TPoly, Q: TPoly) -> Polynomial:
    """Sylvester resultant of ``P`` and ``Q`` with respect to ``x``.

    The determinant is taken by fraction-free (Bareiss) elimination over the
    ring of polynomials in ``t``.  Each intermediate entry is a minor of the
    Sylvester matrix, so its ``t``-degree is bounded by the sum of the row
    degrees involved; entries are truncated to that bound, which removes the
    rounding noise the exact divisions would otherwise amplify.
    """
    if P.is_zero() or Q.is_zero():
        raise DegenerateLeading("resultant with a polynomial identically zero in x")
    m, n = P.degree_x, Q.degree_x
    if m == 0 and n == 0:
        return Polynomial([1.0])
    if m == 0:
        return Polynomial(npoly.polypow(P.tcoeffs[0].coeffs, n))
    if n == 0:
        return Polynomial(npoly.polypow(Q.tcoeffs[0].coeffs, m))
    N = m + n
    zero = np.zeros(1)
    rows = []
    row_deg = []
    pc = [np.array(c.coeffs) for c in reversed(P.tcoeffs)]
    qc = [np.array(c.coeffs) for c in reversed(Q.tcoeffs)]
    for i in range(n):
        row = [zero] * N
        for j, c in enumerate(pc):
            row[i + j] = c
        rows.append(row)
        row_deg.append(P.degree_t)
    for i in range(m):
        row = [zero] * N
        for j, c in enumerate(qc):
            row[i + j] = c
        rows.append(row)
        row_deg.append(Q.degree_t)

    def nz(c):
        return np.max(np.abs(c)) > 0.0

    sign = 1.0
    prev = np.ones(1)
    for k in range(N - 1):
        cand = [i for i in range(k, N) if nz(rows[i][k])]
        if not cand:
            return Polynomial()
        piv = max(cand, key=lambda i: np.max(np.abs(rows[i][k])))
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            row_deg[k], row_deg[piv] = row_deg[piv], row_deg[k]
            sign = -sign
        den = _trim_rel(prev)
        for i in range(k + 1, N):
            bound = _row_degree_bound(row_deg, k + 1, row_deg[i])
            for j in range(k + 1, N):
                num = npoly.polysub(
                    npoly.polymul(rows[k][k], rows[i][j]), npoly.polymul(rows[i][k], rows[k][j])
                )
                num = np.asarray(num)[: bound + len(den)]
                q, _ = npoly.polydiv(num, den)
                rows[i][j] = np.asarray(q)[: bound + 1]
            rows[i][k] = zero
        prev = rows[k][k]
    # leading terms that cancel exactly come out as rounding noise
    det = _trim_rel(sign * np.asarray(rows[N - 1][N - 1]), 1e-13)
    return Polynomial(det)
