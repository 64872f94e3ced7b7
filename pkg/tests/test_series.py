"""Taylor expansions of the normal-form solutions."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import exact
from halleyquad import DomainViolation, HopTooLarge
from halleyquad.taylor import (TaylorMarcher, advance_center, evaluate_pair, hermite_coeffs, legendre_coeffs,
                               max_displacement)


# zero, or clear of the subnormal range
seed = st.one_of(st.just(0.0), st.floats(0.01, 2.0), st.floats(-2.0, -0.01))


def centres(bound):
    return st.one_of(st.just(0.0), st.floats(1e-6, bound), st.floats(-bound, -1e-6))


def rel(a, b):
    return abs(a - b) / abs(b)


class TestCoefficients:
    def test_hermite_second_coefficient(self):
        assert hermite_coeffs(2, 0.0, 1.0, 0.0).coeffs[2] == -2.5

    def test_hermite_third_coefficient(self):
        c = hermite_coeffs(5, 0.0, 0.0, 1.0).coeffs
        assert c[3] == pytest.approx(-11 / 6, rel=1e-15)

    def test_legendre_second_coefficient(self):
        assert legendre_coeffs(2, 0.0, 1.0, 0.0).coeffs[2] == pytest.approx(-3.5, rel=1e-15)

    def test_legendre_third_coefficient(self):
        c = legendre_coeffs(3, 0.0, 0.0, 1.0).coeffs
        assert c[2] == 0.0
        assert c[3] == pytest.approx(-52 / 24, rel=1e-15)

    @pytest.mark.parametrize("build", [hermite_coeffs, legendre_coeffs])
    def test_trivial_solution(self, build):
        assert not np.any(build(7, 0.3, 0.0, 0.0).coeffs)

    @pytest.mark.parametrize("build", [hermite_coeffs, legendre_coeffs])
    def test_seed_stored_exactly(self, build):
        e = build(9, 0.4, 0.123, -4.56)
        assert e.seed == (0.123, -4.56)
        assert e.coeffs[0] == 0.123
        assert e.coeffs[1] == pytest.approx(-4.56, rel=1e-15)

    def test_legendre_rejects_endpoints(self):
        with pytest.raises(DomainViolation):
            legendre_coeffs(3, 1.0, 0.0, 1.0)
        with pytest.raises(DomainViolation):
            legendre_coeffs(3, -1.5, 0.0, 1.0)

    def test_order_limits(self):
        with pytest.raises(ValueError):
            hermite_coeffs(3, 0.0, 1.0, 0.0, max_order=51)
        with pytest.raises(ValueError):
            legendre_coeffs(3, 0.0, 1.0, 0.0, max_order=101)


def hermite_residual(n, x0, c, j):
    # coefficient of t^j in f'' + (2n+1 - (x0+t)^2) f, with f = sum c_k t^k
    term = (j + 2) * (j + 1) * c[j + 2] + (2 * n + 1 - x0 * x0) * c[j]
    if j >= 1:
        term -= 2 * x0 * c[j - 1]
    if j >= 2:
        term -= c[j - 2]
    return term


def legendre_residual(n, x0, c, j):
    # coefficient of t^j in D f'' + E f with D = 4(1-x^2)^2, E = (4n^2+4n)(1-x^2) + 4, x = x0 + t
    t = mp.mpf(1)
    x = x0 + mp.mpf(0)
    # polynomial coefficients of D and E in t
    one_minus = [1 - x * x, -2 * x, -1]
    d = [0] * 5
    for a in range(3):
        for b in range(3):
            d[a + b] += 4 * one_minus[a] * one_minus[b]
    kc = 4 * n * n + 4 * n
    e = [kc * one_minus[0] + 4, kc * one_minus[1], kc * one_minus[2]]
    total = mp.mpf(0)
    scale = mp.mpf(0)
    for a in range(5):
        k = j - a
        if k >= 0:
            v = d[a] * (k + 2) * (k + 1) * c[k + 2]
            total += v
            scale += abs(v)
    for a in range(3):
        k = j - a
        if k >= 0:
            v = e[a] * c[k]
            total += v
            scale += abs(v)
    return total, scale


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), centres(6.0), seed, seed)
def test_hermite_recurrence_residual(n, x0, f0, f1):
    c = [mp.mpf(v) for v in hermite_coeffs(n, x0, f0, f1, max_order=30).coeffs]
    for j in range(28):
        r = hermite_residual(n, mp.mpf(x0), c, j)
        scale = abs((j + 2) * (j + 1) * c[j + 2]) + abs((2 * n + 1 - x0 * x0) * c[j]) + \
            (abs(2 * x0 * c[j - 1]) if j else 0) + (abs(c[j - 2]) if j > 1 else 0)
        assert abs(r) <= 1e-12 * scale or scale == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), centres(0.95), seed, seed)
def test_legendre_recurrence_residual(n, x0, f0, f1):
    c = [mp.mpf(v) for v in legendre_coeffs(n, x0, f0, f1, max_order=30).coeffs]
    for j in range(28):
        r, scale = legendre_residual(n, x0, c, j)
        assert abs(r) <= 1e-12 * scale or scale == 0


class TestEvaluation:
    @pytest.mark.parametrize("build", [hermite_coeffs, legendre_coeffs])
    def test_zero_displacement(self, build):
        e = build(6, 0.25, 0.7, -0.3)
        v = evaluate_pair(e, 0.25)
        assert (v.f, v.fp, v.order) == (0.7, pytest.approx(-0.3, rel=1e-15), 0)

    def test_hermite_root_of_h5(self):
        root = float(exact.hermite_roots(5)[0])
        v = evaluate_pair(hermite_coeffs(5, 0.0, 0.0, 1.0), root)
        assert abs(v.f) < 1e-9
        assert not v.truncated

    def test_legendre_closed_form(self):
        v = evaluate_pair(legendre_coeffs(2, 0.0, 1.0, 0.0), 0.2)
        want = math.sqrt(1 - 0.04) * (3 * 0.04 - 1) / 2 / -0.5
        assert v.f == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("family", ["hermite", "legendre"])
    @pytest.mark.parametrize("frac", [0.3, 0.7, 1.0])
    def test_against_closed_form(self, family, frac):
        n = 30
        build = hermite_coeffs if family == "hermite" else legendre_coeffs
        e = build(n, 0.0, 1.0, 0.0)
        x = frac * max_displacement(e)
        v = evaluate_pair(e, x)
        f, fp = (float(t) for t in exact.pair(family, n, x))
        # f' is compared on the scale of the local amplitude, since it passes through zero
        amp = math.hypot(f, fp * max_displacement(e) / (2 * math.pi))
        assert abs(v.f - f) < 1e-12 * amp
        assert abs(v.fp - fp) * max_displacement(e) / (2 * math.pi) < 1e-12 * amp

    def test_truncation_flag(self):
        e = hermite_coeffs(50, 0.0, 1.0, 0.0, max_order=5)
        assert evaluate_pair(e, 0.4).truncated


class TestAdvance:
    @pytest.mark.parametrize("build", [hermite_coeffs, legendre_coeffs])
    def test_same_centre_is_identity(self, build):
        e = build(8, 0.3, 0.5, 1.5)
        e2 = advance_center(e, 0.3)
        np.testing.assert_allclose(e2.scaled, e.scaled, rtol=1e-15)

    def test_hermite_chain_matches_closed_form(self):
        e = advance_center(hermite_coeffs(5, 0.0, 0.0, 1.0), 0.9472)
        for x in (0.9472, 1.3, 1.8):
            v = evaluate_pair(e, x)
            f, fp = exact.hermite_pair(5, x)
            assert abs(v.f - float(f)) < 1e-10
            assert abs(v.fp - float(fp)) < 1e-10

    def test_legendre_recentrings_agree_on_overlaps(self):
        e = legendre_coeffs(10, 0.0, 1.0, 0.0)
        for c in (0.1, 0.2, 0.3):
            nxt = advance_center(e, c)
            for x in (c - 0.05, c, c + 0.03):
                a, b = evaluate_pair(e, x).f, evaluate_pair(nxt, x).f
                assert abs(a - b) <= 1e-12 * max(1.0, abs(b))
            e = nxt
        f, _ = exact.legendre_pair(10, 0.3)
        assert evaluate_pair(e, 0.3).f == pytest.approx(float(f), rel=1e-12)

    def test_refuses_long_hops(self):
        e = hermite_coeffs(100, 0.0, 1.0, 0.0)
        with pytest.raises(HopTooLarge):
            advance_center(e, 3 * max_displacement(e))

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(["hermite", "legendre"]), st.integers(1, 50), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
    def test_path_independence(self, family, n, u, v):
        build = hermite_coeffs if family == "hermite" else legendre_coeffs
        e = build(n, 0.0, *(0.0, 1.0) if n % 2 else (1.0, 0.0))
        reach = max_displacement(e)
        x = u * reach
        mid = v * x
        direct = evaluate_pair(e, x).f
        chained = evaluate_pair(advance_center(e, mid), x).f
        scale = max(abs(direct), abs(evaluate_pair(e, x).fp) * reach / (2 * math.pi), 1e-300)
        assert abs(direct - chained) <= 1e-11 * max(abs(direct), scale)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(["hermite", "legendre"]), st.integers(1, 50), st.floats(-0.9, 0.9), st.floats(0.01, 1.0))
    def test_order_adaptivity(self, family, n, xc, frac):
        build = hermite_coeffs if family == "hermite" else legendre_coeffs
        x0 = xc * (math.sqrt(2 * n + 1) if family == "hermite" else 1.0)
        e = build(n, x0, 0.3, -0.7)
        d = frac * max_displacement(e)
        o1 = evaluate_pair(e, x0 + d).order
        o2 = evaluate_pair(e, x0 + d / 2).order
        assert o2 <= o1


def test_wronskian_is_constant():
    n = 20
    a = hermite_coeffs(n, 0.0, 1.0, 0.0)
    b = hermite_coeffs(n, 0.0, 0.0, 1.0)
    for x in np.linspace(0.1, 5.5, 40):
        a = advance_center(a, x)
        b = advance_center(b, x)
        (f, fp), (g, gp) = a.seed, b.seed
        w = f * gp - fp * g
        assert w == pytest.approx(1.0, rel=1e-10)


def test_marcher_counts_and_poles():
    m = TaylorMarcher("hermite", 4)
    f, fp = m.pair(0.0)
    assert (f, fp) == (1.0, 0.0)
    assert math.isinf(m.ratio(0.0))
    f, fp = m.pair(1.0)
    want = exact.hermite_pair(4, 1.0)
    assert f == pytest.approx(float(want[0]), rel=1e-13)
    assert m.evaluations == 3
    leg = TaylorMarcher("legendre", 3)
    with pytest.raises(DomainViolation):
        leg.pair(1.0)
