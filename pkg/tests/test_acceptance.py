"""End-to-end acceptance checks, one test per criterion.

A PASS/FAIL line per criterion is printed in the "acceptance criteria"
section of the pytest summary.
"""

import math
import time

import numpy as np
import pytest

from conftest import CEX6, EX4, EX5, EX10, POS6, SYM, poly
from ypflow.fingerprint import fingerprint, fp1_merge_points
from ypflow.flow import Field, attainability, backward_flow_minimize, classify_zones, integrate_yp
from ypflow.heat import evolve_at, evolve_symbolic
from ypflow.oracle import brute_force_min
from ypflow.polynomial import Polynomial, power_sums_check, real_roots, resultant_in_t
from ypflow.quartic import analyze, cubic_discriminant_in_t, fixed_start_descent, value_gap
from ypflow.sextic import delta_t, x_of_t

B5, C5, D5 = -0.3726, 0.0574, 0.0306


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    # compile (or load from cache) the integrator kernels outside the timed sections
    backward_flow_minimize(poly([1, 0, -1, 0, 0]), with_oracle=False)
    classify_zones(poly([1, 0, -1, 0, 0]), grid=8)


@pytest.mark.criterion(1, "Example 10 backward flow gives -1.2307, sub-second")
def test_c1_example10():
    t0 = time.perf_counter()
    r = backward_flow_minimize(poly(EX10))
    elapsed = time.perf_counter() - t0
    assert abs(r.minimizer - (-1.2307)) <= 1e-3
    assert elapsed < 1.0


@pytest.mark.criterion(2, "sextic merge times 0.002341, 0.034887; agree with resultant")
def test_c2_sextic_merge_times():
    roots = real_roots(delta_t(B5, C5, D5)).values
    assert len(roots) == 2
    assert abs(roots[0] - 0.002341) <= 1e-5 and abs(roots[1] - 0.034887) <= 1e-5
    E = evolve_symbolic(poly(EX5))
    res = real_roots(resultant_in_t(E.dx(2), E.dx(3))).values
    assert np.allclose(res, roots, atol=1e-8)


@pytest.mark.criterion(3, "sextic merge points 0.23516, -0.078914 are FP2-FP3 points")
def test_c3_sextic_merge_points():
    p = poly(EX5)
    E = evolve_symbolic(p)
    t1, t2 = real_roots(delta_t(B5, C5, D5)).values
    xs = [x_of_t(B5, C5, D5, t) for t in (t1, t2)]
    assert abs(xs[0] - 0.23516) <= 1e-4 and abs(xs[1] - (-0.078914)) <= 1e-4
    for x, t in zip(xs, (t1, t2)):
        assert abs(E.dx(2)(x, t)) <= 1e-7 * p.scale()
        assert abs(E.dx(3)(x, t)) <= 1e-7 * p.scale()


@pytest.mark.criterion(4, "Example 5 confinement zone, endpoints within 5e-3, <= 10 s")
def test_c4_sextic_zone():
    t0 = time.perf_counter()
    z = classify_zones(poly(EX5))
    elapsed = time.perf_counter() - t0
    want = [(-0.5082, 0.0858), (0.1603, 0.3267)]
    assert len(z.confinement) == 2
    for (lo, hi), (wl, wh) in zip(z.confinement, want):
        assert abs(lo - wl) <= 5e-3 and abs(hi - wh) <= 5e-3
    assert elapsed <= 10.0


@pytest.mark.criterion(5, "attainability: true for the positive sextic, false for the counter-example")
def test_c5_attainability_sextics():
    pos = attainability(poly(POS6))
    cex = attainability(poly(CEX6))
    orc = brute_force_min(poly(CEX6))
    detail = (
        f"positive sextic: attainable={pos.attainable}; counter-example: attainable={cex.attainable}, "
        f"flow -> {cex.flow.minimizer:.6f}, oracle minimisers {orc.minimizers}, zones {cex.zones.confinement}"
    )
    assert pos.attainable and abs(pos.flow.minimizer - pos.oracle.minimizers[0]) <= 1e-4, detail
    assert cex.attainable is False, detail


@pytest.mark.criterion(6, "Example 4 quartic closed forms, zone and oracle")
def test_c6_example4():
    p = poly(EX4)
    r = analyze(-8, -18, 56, 0)
    assert r.t_star == 7.0
    (t_disc,) = real_roots(cubic_discriminant_in_t(-8, -18, 56)).values
    assert abs(r.t_u - (7 - 640 ** (2 / 3) / 16)) <= 1e-12
    assert abs(r.t_u - t_disc) <= 1e-12
    (mp,) = fp1_merge_points(p)
    assert abs(mp.x - (2 - 10 ** (1 / 3))) <= 1e-9 and abs(mp.t - r.t_u) <= 1e-9
    orc = brute_force_min(p)
    assert orc.minimizers == [7.0] and orc.value == -833.0
    assert value_gap(-2, 1, 7) == -729.0
    z = classify_zones(p)
    (iv,) = z.confinement
    assert abs(iv[0] - (2 - math.sqrt(21))) <= 1e-3 and abs(iv[1] - (2 + math.sqrt(21))) <= 1e-3
    assert not z.contains(7.0)


@pytest.mark.criterion(7, "symmetric quartic: t* = t_u = 4/3, equal peaks, constant middle, both minimisers")
def test_c7_symmetric():
    p = poly(SYM)
    r = analyze(-4, -2, 12, 0)
    assert abs(r.t_star - 4 / 3) <= 1e-12 and abs(r.t_u - 4 / 3) <= 1e-12
    assert p(-1.0) == p(3.0) == -9.0
    tr = integrate_yp(p, 1.0, 0.0, 5.0)
    assert tr.termination == "ReachedTarget" and np.max(np.abs(tr.x - 1.0)) < 1e-9
    got = fixed_start_descent(-4, -2, 12, 0)
    assert len(got) == 2 and abs(got[0] + 1) <= 1e-9 and abs(got[1] - 3) <= 1e-9


@pytest.mark.criterion(8, "fixed-start descent equals the oracle on 1000 random quartics, <= 10 s")
def test_c8_fixed_start_corpus():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        a, b, c, d = rng.uniform(-3, 3, 4)
        got = fixed_start_descent(a, b, c, d)
        want = brute_force_min(Polynomial([d, c, b, a, 1.0])).minimizers
        if len(got) != len(want) or not np.allclose(got, want, atol=1e-6):
            bad += 1
    elapsed = time.perf_counter() - t0
    assert bad == 0
    assert elapsed <= 10.0


@pytest.mark.criterion(9, "flow success <=> oracle minimiser outside the zone on 500 polynomials, <= 30 s")
def test_c9_corpus_biconditional():
    rng = np.random.default_rng(2024)
    polys = []
    for i in range(500):
        n = 4 if i % 2 == 0 else 6
        polys.append(Polynomial(list(rng.uniform(-2, 2, n)) + [float(rng.uniform(0.1, 2))]))
    t0 = time.perf_counter()
    violations = []
    for p in polys:
        z = classify_zones(p, method="saddles")
        orc = brute_force_min(p)
        flow = backward_flow_minimize(p, match_tol=1e-4)
        outside = any(not z.contains(m) for m in orc.minimizers)
        if outside != flow.attainable:
            violations.append(p)
    elapsed = time.perf_counter() - t0
    # the shooting construction gives the same zones on a subset
    for p in polys[:30]:
        a = classify_zones(p, grid=200).confinement
        b = classify_zones(p, method="saddles").confinement
        assert len(a) == len(b) and np.allclose(a, b, atol=1e-4) if a else b == []
    assert violations == []
    assert elapsed <= 30.0


@pytest.mark.criterion(10, "structural invariants of the evolution and the flow")
def test_c10_structural_invariants():
    rng = np.random.default_rng(10)
    for _ in range(100):
        p = Polynomial(rng.uniform(-3, 3, int(rng.integers(2, 10))))
        s, t = rng.uniform(0, 5, 2)
        lhs, rhs = np.array(evolve_at(evolve_at(p, s), t).coeffs), np.array(evolve_at(p, s + t).coeffs)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))
        # integer coefficients keep every grid entry exact
        E = evolve_symbolic(Polynomial(np.round(np.array(p.coeffs) * 8)))
        g = E.sym.dx(2).grid(E.sym.grid().shape)
        assert np.array_equal(E.sym.dt(1).grid(g.shape), 0.5 * g)
        k = int(rng.integers(1, 4))
        a, b = np.array(evolve_at(p, t).deriv(k).coeffs), np.array(evolve_at(p.deriv(k), t).coeffs)
        assert np.max(np.abs(a - b)) <= 1e-12 * (1 + np.max(np.abs(b)))
    for desc in (EX4, EX5, POS6):
        p = poly(desc)
        E = evolve_symbolic(p)
        for br in fingerprint(p, 1):
            idx = np.linspace(0, len(br.t) - 2, 100).astype(int)
            vals = np.array([E(x, t) for x, t in zip(br.x[idx], br.t[idx])])
            curv = np.array([E.dx(2)(x, t) for x, t in zip(br.x[idx], br.t[idx])])
            steps = np.diff(vals)
            assert np.all(steps >= -1e-9) if curv[1] > 0 else np.all(steps <= 1e-9)
        F = Field(p)
        for x0 in real_roots(p.deriv()).values:
            tr = integrate_yp(p, x0, 0.0, 1.0, field_=F)
            s2 = np.array([F.deriv(2, x, t) for x, t in zip(tr.x, tr.t)])
            assert np.all(np.sign(s2) == np.sign(s2[0]))
    for _ in range(100):
        xs = rng.uniform(-3, 3, 3)
        res = power_sums_check(*xs).identity_residuals()
        assert max(abs(v) for v in res) <= 1e-12 * (1 + np.max(np.abs(xs)) ** 4)
