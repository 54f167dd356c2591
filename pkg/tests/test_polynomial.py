import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import poly
from ypflow.errors import DegenerateLeading, ZeroPolynomial
from ypflow.polynomial import (
    DoubleRootClass,
    Polynomial,
    TPoly,
    cauchy_bound,
    classify_depressed_quartic,
    derivative,
    power_sums_check,
    quartic_discriminant,
    real_roots,
    resultant_in_t,
    solve_cubic,
    sturm_count,
)

X, T = sp.symbols("x t")


# -- basics ------------------------------------------------------------------


def test_derivative_examples():
    assert derivative(poly([1, 0, 0, 0, 0]), 2).coeffs == (0.0, 0.0, 12.0)
    assert derivative(poly([1, -8, -18, 56, 0]), 1).descending() == [4, -24, -36, 56]
    assert derivative(Polynomial([5.0]), 1).is_zero()


def test_arithmetic_and_shift():
    p = poly([1, -8, -18, 56, 0])
    q = poly([2, 1])
    assert (p * q).descending() == [2, -15, -44, 94, 56, 0]
    s = p.shift(2.0)
    for x in (-1.0, 0.3, 4.0):
        assert math.isclose(s(x), p(x + 2.0), rel_tol=1e-12, abs_tol=1e-12)
    quo, rem = p.deriv().divmod(poly([1, -7]))
    assert max(abs(c) for c in rem.coeffs) < 1e-12
    assert np.allclose((quo * poly([1, -7])).coeffs, p.deriv().coeffs)


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        real_roots(Polynomial([0.0]))
    with pytest.raises(ZeroPolynomial):
        sturm_count(Polynomial([0.0]), -1, 1)


# -- real roots --------------------------------------------------------------


@pytest.mark.parametrize(
    "desc, expected",
    [
        ([1, 0, -1], [(-1, 1), (1, 1)]),
        ([1, -6, -9, 14], [(-2, 1), (1, 1), (7, 1)]),
        ([1, 0, -3, 2], [(-2, 1), (1, 2)]),
    ],
)
def test_real_roots_examples(desc, expected):
    rs = real_roots(poly(desc))
    assert rs.multiplicities == [m for _, m in expected]
    assert np.allclose(rs.values, [v for v, _ in expected], atol=1e-7)


def test_real_roots_recover_constructed(rng):
    for _ in range(200):
        n = int(rng.integers(1, 9))
        roots = np.sort(rng.uniform(-5, 5, n))
        if n > 1 and np.min(np.diff(roots)) < 1e-2:
            continue
        p = Polynomial.from_roots(roots, leading=float(rng.uniform(0.5, 3)))
        got = real_roots(p).values
        assert len(got) == n
        assert np.allclose(got, roots, rtol=1e-8, atol=1e-8)


def test_real_roots_match_numpy_on_random(rng):
    # independent oracle: companion-matrix eigenvalues
    for _ in range(200):
        c = rng.uniform(-5, 5, int(rng.integers(2, 9)))
        p = Polynomial(c)
        ev = np.roots(p.descending())
        real = np.sort(ev[np.abs(ev.imag) < 1e-7].real)
        if len(real) > 1 and np.min(np.diff(real)) < 1e-4:
            continue
        got = real_roots(p).values
        assert len(got) == len(real)
        assert np.allclose(got, real, atol=1e-6)


@pytest.mark.parametrize("desc, a, b, n", [([1, 0, -1], -2, 2, 2), ([1, 0, -1], 0, 2, 1), ([1, 0, 1], -10, 10, 0)])
def test_sturm_examples(desc, a, b, n):
    assert sturm_count(poly(desc), a, b) == n


def test_sturm_matches_real_roots(rng):
    for _ in range(200):
        p = Polynomial(rng.uniform(-3, 3, int(rng.integers(2, 8))))
        B = cauchy_bound(p) + 1.0
        assert sturm_count(p, -B, B) == len(real_roots(p))
        assert sturm_count(p, -math.inf, math.inf) == len(real_roots(p))


# -- cubic ---------------------------------------------------------------------


def test_solve_cubic_examples():
    r = solve_cubic(-6, -9, 14)
    assert r.case == -1 and np.allclose(r.roots.values, [-2, 1, 7], atol=1e-12)
    r = solve_cubic(0, -3, 2)
    assert r.case == 0
    assert np.allclose(r.roots.values, [-2, 1], atol=1e-9) and r.roots.multiplicities == [1, 2]
    r = solve_cubic(0, 0, -8)
    assert r.case == 1 and np.allclose(r.roots.values, [2.0], atol=1e-12)


def test_solve_cubic_agrees_with_real_roots(rng):
    for _ in range(1000):
        al, be, ga = rng.uniform(-10, 10, 3)
        c = solve_cubic(al, be, ga).roots.values
        r = real_roots(Polynomial([ga, be, al, 1.0])).values
        assert len(c) == len(r)
        assert np.allclose(c, r, rtol=1e-10, atol=1e-10)


def test_power_sums_examples():
    ps = power_sums_check(-2, 1, 7)
    assert (ps.e1, ps.e2, ps.e3) == (6, -9, -14)
    assert all(v == 0 for v in vars(power_sums_check(0, 0, 0)).values())
    ps = power_sums_check(1, 1, 1)
    assert ps.e1 == 3 and ps.p2 == 3


@given(st.tuples(*[st.floats(-10, 10, allow_nan=False)] * 3))
def test_power_sum_identities(xs):
    ps = power_sums_check(*xs)
    scale = 1 + max(abs(v) for v in xs) ** 4
    assert max(abs(r) for r in ps.identity_residuals()) <= 1e-12 * scale


# -- depressed quartic ------------------------------------------------------------


def test_quartic_discriminant_matches_sympy(rng):
    be, ga, de = sp.symbols("beta gamma delta")
    disc = sp.discriminant(X**4 + be * X**2 + ga * X + de, X)
    f = sp.lambdify((be, ga, de), disc)
    for _ in range(50):
        v = rng.uniform(-3, 3, 3)
        assert math.isclose(quartic_discriminant(*v), f(*v), rel_tol=1e-9, abs_tol=1e-9)


def test_classify_examples():
    assert classify_depressed_quartic(-2, 0, 1) is DoubleRootClass.TWO_REAL_DOUBLES
    assert classify_depressed_quartic(0, 0, 0) is DoubleRootClass.QUADRUPLE_ROOT
    assert classify_depressed_quartic(2, 0, 1) is DoubleRootClass.TWO_COMPLEX_DOUBLES
    assert classify_depressed_quartic(-1, 0, 0.1) is DoubleRootClass.NO_REPEATED_ROOT


def _brute_class(roots_real: list[float], mults: list[int]) -> DoubleRootClass:
    ms = sorted(mults, reverse=True)
    n_real = sum(mults)
    if ms and ms[0] == 4:
        return DoubleRootClass.QUADRUPLE_ROOT
    if ms and ms[0] == 3:
        return DoubleRootClass.TRIPLE_ROOT
    if ms[:2] == [2, 2]:
        return DoubleRootClass.TWO_REAL_DOUBLES
    if ms and ms[0] == 2:
        return DoubleRootClass.DOUBLE_PLUS_TWO_DISTINCT_REAL if n_real == 4 else DoubleRootClass.DOUBLE_PLUS_COMPLEX_PAIR
    return DoubleRootClass.NO_REPEATED_ROOT


def test_classify_agrees_with_brute_force(rng):
    # quartics with a planted repeated-root structure, depressed by construction
    for _ in range(1000):
        kind = int(rng.integers(0, 5))
        if kind == 0:
            r = rng.uniform(-2, 2)
            others = rng.uniform(-2, 2, 2)
            roots = [r, r, *others]
        elif kind == 1:
            r = rng.uniform(-2, 2)
            roots = [r, r, complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))]
            roots.append(roots[-1].conjugate())
        elif kind == 2:
            r, s = rng.uniform(-2, 2, 2)
            roots = [r, r, s, s]
        elif kind == 3:
            r, s = rng.uniform(-2, 2, 2)
            roots = [r, r, r, s]
        else:
            roots = list(rng.uniform(-2, 2, 4))
        shift = sum(roots).real / 4.0
        roots = [z - shift for z in roots]
        c = np.real(np.poly(roots))
        beta, gamma, delta = c[2], c[3], c[4]
        rr = [z.real for z in roots if abs(complex(z).imag) < 1e-12]
        vals = sorted(rr)
        groups: list[list[float]] = []
        for v in vals:
            if groups and abs(v - groups[-1][-1]) < 1e-6:
                groups[-1].append(v)
            else:
                groups.append([v])
        if kind == 4 and min(np.diff(vals)) < 0.05:
            continue
        if kind in (0, 1) and any(abs(a - b) < 0.05 for i, a in enumerate(vals) for b in vals[i + 1:] if abs(a - b) > 1e-9):
            continue
        if kind in (2, 3) and len(groups) == 2 and abs(groups[0][0] - groups[1][0]) < 0.05:
            continue
        expected = _brute_class([g[0] for g in groups], [len(g) for g in groups])
        got = classify_depressed_quartic(beta, gamma, delta, assume_repeated=kind != 4)
        assert got is expected, (roots, got, expected)


# -- resultant --------------------------------------------------------------------


def test_resultant_quartic_single_root():
    a, b = -8.0, -18.0
    P = TPoly.from_grid([[2 * b, 12.0], [6 * a, 0.0], [12.0, 0.0]])
    Q = TPoly.constant_in_t(Polynomial([6 * a, 24.0]))
    r = resultant_in_t(P, Q)
    assert r.degree == 1
    assert math.isclose(real_roots(r).values[0], a * a / 16 - b / 6, rel_tol=1e-12)


def test_resultant_coprime_constant():
    r = resultant_in_t(TPoly.constant_in_t(Polynomial([1.0, 1.0])), TPoly.constant_in_t(Polynomial([-1.0, 1.0])))
    assert r.degree == 0 and abs(r.coeffs[0]) > 0


def test_resultant_degenerate_leading():
    with pytest.raises(DegenerateLeading):
        resultant_in_t(TPoly.from_grid([[0.0], [0.0]]), TPoly.constant_in_t(Polynomial([1.0, 1.0])))


def _sympy_tpoly(grid):
    return sum(float(grid[i][j]) * X**i * T**j for i in range(len(grid)) for j in range(len(grid[0])))


def test_resultant_matches_sympy(rng):
    for _ in range(20):
        gp = rng.integers(-4, 5, (int(rng.integers(2, 5)), 2)).astype(float)
        gq = rng.integers(-4, 5, (int(rng.integers(2, 4)), 2)).astype(float)
        gp[-1, 0] = gq[-1, 0] = 1.0
        gp[-1, 1] = gq[-1, 1] = 0.0
        r = resultant_in_t(TPoly.from_grid(gp), TPoly.from_grid(gq))
        ref = sp.Poly(sp.resultant(_sympy_tpoly(gp), _sympy_tpoly(gq), X), T)
        ref_c = [float(c) for c in reversed(ref.all_coeffs())] if not ref.is_zero else [0.0]
        n = max(len(ref_c), len(r.coeffs))
        a = np.pad(np.array(ref_c), (0, n - len(ref_c)))
        b = np.pad(np.array(r.coeffs), (0, n - len(r.coeffs)))
        assert np.allclose(a, b, rtol=1e-9, atol=1e-9 * (1 + np.max(np.abs(a))))


def test_resultant_zero_iff_common_root(rng):
    for _ in range(30):
        gp = rng.uniform(-2, 2, (4, 2))
        gq = rng.uniform(-2, 2, (3, 2))
        gp[-1] = [1.0, 0.0]
        gq[-1] = [1.0, 0.0]
        P, Q = TPoly.from_grid(gp), TPoly.from_grid(gq)
        r = resultant_in_t(P, Q)
        for t0 in real_roots(r).values:
            # the gcd of the slices is nonconstant: they share a root
            rp, rq = np.roots(P.at(t0).descending()), np.roots(Q.at(t0).descending())
            assert np.min(np.abs(rp[:, None] - rq[None, :])) < 1e-4
        # away from roots there is no common root
        t1 = 0.37
        if all(abs(t1 - t0) > 0.05 for t0 in real_roots(r).values):
            rp, rq = np.roots(P.at(t1).descending()), np.roots(Q.at(t1).descending())
            assert np.min(np.abs(rp[:, None] - rq[None, :])) > 1e-6


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=7))
def test_tpoly_eval_consistent(cs):
    p = Polynomial(cs)
    tp = TPoly.constant_in_t(p)
    assert np.allclose(tp.at(1.3).coeffs[: len(p.coeffs)], p.coeffs)
