"""Gauss-Legendre rules and the tanh-transformed iteration."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import exact
from halleyquad import (DomainViolation, LegendreProblem, OdeProblem, PoleEncountered, RTrend, compute_legendre_rule,
                        legendre_first_guess, legendre_weights, modified_halley_step, oracle_eval, transformed_step,
                        transformed_sweep)
from halleyquad.dd import DoubleDouble
from halleyquad.legendre import find_positive_zeros_z


def test_first_guess():
    assert legendre_first_guess(3) == pytest.approx(0.719641, abs=2e-6)
    assert legendre_first_guess(3) == math.tanh(math.pi / math.sqrt(12))
    assert legendre_first_guess(2) == pytest.approx(0.565767, abs=2e-6)
    assert legendre_first_guess(1) == math.tanh(math.pi / math.sqrt(2))


def test_problem_functions():
    p = LegendreProblem(7)
    assert p.big_l == 15
    for x in (0.0, 0.3, -0.8, 0.99):
        assert p.k(x) == pytest.approx(56 * (1 - x * x), rel=1e-15)
        w = 1 - x * x
        assert p.r(x) == pytest.approx((224 * w + 4) / (4 * w * w), rel=1e-14)
    zs = np.linspace(0.01, 4, 60)
    ks = [p.k(math.tanh(z)) for z in zs]
    assert all(b < a for a, b in zip(ks, ks[1:]))


@pytest.mark.parametrize("n", [4, 9, 16])
def test_b_vanishes_at_the_zeros(n):
    p = LegendreProblem(n)
    for root in exact.legendre_roots(n):
        x = float(root)
        assert abs(p.b(x)) < 1e-13
        assert p.b(x - 1e-6) * p.b(x + 1e-6) < 0


class TestStep:
    def test_fixed_point(self):
        p = LegendreProblem(3)
        assert transformed_step(p, 0.0, p.k(0.0)) == 0.0

    def test_toward_root(self):
        p = LegendreProblem(2)
        x = 0.565808
        y = transformed_step(p, x, p.k(x))
        assert 0.565808 < y < 0.58
        assert abs(y - 1 / math.sqrt(3)) < abs(x - 1 / math.sqrt(3))

    def test_at_zero(self):
        p = LegendreProblem(4)
        p.marcher.b_ratio = lambda x: 0.3
        k0 = 3.7
        b = p.b(0.0)
        assert transformed_step(p, 0.0, k0) == pytest.approx(-math.tanh(2 * b / (2 + k0 * b * b)), rel=1e-15)

    def test_domain(self):
        p = LegendreProblem(4)
        with pytest.raises(DomainViolation):
            transformed_step(p, 1.0, 1.0)

    def test_pole(self):
        p = LegendreProblem(4)
        p.marcher.b_ratio = lambda x: math.inf
        with pytest.raises(PoleEncountered):
            transformed_step(p, 0.5, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 50), st.floats(0.001, 0.99), st.floats(0.5, 2.0))
    def test_mobius_consistency(self, n, x, kscale):
        # the z-space step, run in extended precision on the same ratio value,
        # then mapped back by tanh
        p = LegendreProblem(n)
        k0 = kscale * p.k(x)
        b = p.b(x)
        if not math.isfinite(b):
            return
        zp = OdeProblem(lambda z: mp.mpf(b), lambda z: mp.mpf(k0), RTrend.DECREASING, (0, 40), ops=mp)
        want = mp.tanh(modified_halley_step(zp, mp.atanh(mp.mpf(x)), mp.mpf(k0)))
        assert transformed_step(p, x, k0) == pytest.approx(float(want), abs=1e-15)

    @pytest.mark.parametrize("n", [3, 20, 50])
    def test_double_precision_z_route(self, n):
        p = LegendreProblem(n)
        zp = p.z_problem()
        for x in np.linspace(0.05, 0.9, 7):
            k0 = p.k(x)
            want = math.tanh(modified_halley_step(zp, math.atanh(x), k0))
            # b is re-evaluated at tanh(atanh(x)), so allow a few ulps of slack
            assert transformed_step(p, x, k0) == pytest.approx(want, abs=2e-14)


class TestSweep:
    def test_already_valid(self):
        p = LegendreProblem(10)
        x = float(exact.legendre_roots(10)[0]) - 0.01
        assert p.b(x) < 0
        assert transformed_sweep(p, x) == (x, 0)

    def test_from_first_guess(self):
        p = LegendreProblem(10)
        x, steps = transformed_sweep(p, legendre_first_guess(10))
        assert steps <= 3
        v = oracle_eval("legendre", 10, x)
        roots = [float(r) for r in exact.legendre_roots(10)]
        assert p.b(x) < 0
        assert x < roots[0]
        assert float(v.value) * float(v.derivative) < 0

    def test_one_sweep_lands_before_next_zero(self):
        p = LegendreProblem(3)
        x = 0.05  # just above the zero at 0, on the b > 0 side
        assert p.b(x) > 0
        y, steps = transformed_sweep(p, x)
        assert steps == 1
        assert 0.0 < y < math.sqrt(0.6)
        assert p.b(y) < 0

    def test_runs_off_the_end(self):
        p = LegendreProblem(3)
        with pytest.raises(DomainViolation):
            transformed_sweep(p, math.sqrt(0.6) + 0.01)


class TestSmallRules:
    def test_one_point(self):
        r = compute_legendre_rule(1)
        assert list(r.nodes) == [0.0] and list(r.weights) == [2.0]

    def test_two_point(self):
        r = compute_legendre_rule(2)
        np.testing.assert_allclose(r.nodes, [-0.5773502691896258, 0.5773502691896258], rtol=1e-15)
        np.testing.assert_allclose(r.weights, [1.0, 1.0], rtol=1e-15)

    def test_three_point(self):
        r = compute_legendre_rule(3)
        np.testing.assert_allclose(r.weights, [5 / 9, 8 / 9, 5 / 9], rtol=1e-14)

    def test_five_point(self):
        r = compute_legendre_rule(5)
        np.testing.assert_allclose(r.nodes[3:], [0.5384693101056831, 0.9061798459386640], rtol=1e-14)
        s = math.sqrt(70)
        np.testing.assert_allclose(r.weights, [(322 - 13 * s) / 900, (322 + 13 * s) / 900, 128 / 225,
                                               (322 + 13 * s) / 900, (322 - 13 * s) / 900], rtol=1e-14)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            compute_legendre_rule(0)
        with pytest.raises(ValueError):
            compute_legendre_rule(3, scheme="x")


class TestWeights:
    def test_pair(self):
        np.testing.assert_allclose(legendre_weights([0.5], [3.0], 2), [1.0, 1.0], rtol=1e-15)

    def test_uniform(self):
        w = legendre_weights([0.3, 0.7], [2.0, 2.0], 5, zero_fprime=2.0)
        np.testing.assert_allclose(w, [0.4] * 5, rtol=1e-15)


@pytest.mark.parametrize("n", range(1, 51))
def test_exactness(n):
    r = compute_legendre_rule(n)
    power = np.ones_like(r.nodes)
    for k in range(2 * n):
        got = math.fsum(r.weights * power)
        power = power * r.nodes
        if k % 2:
            assert abs(got) < 1e-15
        else:
            assert abs(got / (2 / (k + 1)) - 1) < 1e-13


@pytest.mark.parametrize("n", [5, 6, 30, 99, 1000, 4001])
def test_containment_and_clustering(n):
    r = compute_legendre_rule(n)
    assert np.all(np.abs(r.nodes) < 1)
    pos = r.nodes[r.nodes >= 0]
    gaps = np.diff(pos)
    assert np.all(np.diff(gaps) < 0)
    assert np.all(r.nodes == -r.nodes[::-1]) and np.all(r.weights == r.weights[::-1])
    assert math.fsum(r.weights) == pytest.approx(2.0, rel=1e-13)


@pytest.mark.parametrize("n", [2, 7, 50, 120, 200])
def test_weights_match_derivative_identity(n):
    r = compute_legendre_rule(n)
    for x, w in zip(r.nodes, r.weights):
        d = oracle_eval("legendre", n, x).derivative
        xd = DoubleDouble(float(x))
        want = 2 / ((1 - xd * xd) * d * d)
        assert w == pytest.approx(float(want), rel=1e-12)


@pytest.mark.parametrize("n", [3, 10, 64, 101, 250])
def test_engine_and_kernel_agree(n):
    zs, _ = find_positive_zeros_z(n)
    r = compute_legendre_rule(n)
    np.testing.assert_allclose(zs, r.nodes[r.nodes > 0], rtol=1e-15)


def test_full_halley_scheme():
    a = compute_legendre_rule(100)
    b = compute_legendre_rule(100, scheme="halley")
    np.testing.assert_allclose(a.nodes, b.nodes, rtol=1e-13)
    assert b.stats.r_evals >= a.stats.r_evals


@pytest.mark.parametrize("n", [5, 40, 301])
def test_traces(n):
    r = compute_legendre_rule(n, record_traces=True)
    pos = r.nodes[r.nodes > 0]
    assert len(r.traces) == len(pos)
    for tr, z in zip(r.traces, pos):
        assert tr.iterates[0] == tr.initial_guess
        assert abs(tr.iterates[-1] / z - 1) < 1e-14


def test_large_degree_runs():
    r = compute_legendre_rule(100_001)
    assert len(r.nodes) == 100_001
    assert math.fsum(r.weights) == pytest.approx(2.0, rel=1e-13)
    assert r.nodes[-1] < 1.0
