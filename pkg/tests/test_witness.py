"""Tests for the staircase witness construction.

The smoothstep coefficients are checked against an independent binomial
closed form, the assembled function against finite differences and dense
critical-point sampling, and the measured derivative scale against the
certified lower bound (the sandwich).
"""

import json
import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from rigidity.bounds import LambdaProfile, ProblemParams
from rigidity.sets import FinitePoints
from rigidity.witness import (
    Plateau,
    Transition,
    build_witness,
    sandwich_check,
    smoothstep_coefficients,
    witness_derivative_scale,
)


def smoothstep_binomial(order):
    """Independent closed form for the flat-contact step polynomial.

    s(u) = u^(order+1) * sum_k C(order+k, k) C(2*order+1, order-k) (-u)^k,
    a standard identity for the polynomial with flat contact of the given
    order at both endpoints.
    """
    coeffs = np.zeros(2 * order + 2)
    for k in range(order + 1):
        coeffs[order + 1 + k] = (
            (-1) ** k * math.comb(order + k, k) * math.comb(2 * order + 1, order - k)
        )
    return coeffs


class TestSmoothstep:
    def test_order_one_closed_form(self):
        assert np.allclose(smoothstep_coefficients(1), [0, 0, 3, -2], atol=1e-12)

    def test_order_two_closed_form(self):
        assert np.allclose(
            smoothstep_coefficients(2), [0, 0, 0, 10, -15, 6], atol=1e-11
        )

    @pytest.mark.parametrize("order", range(1, 9))
    def test_matches_binomial_identity(self, order):
        got = smoothstep_coefficients(order)
        want = smoothstep_binomial(order)
        # the linear system loses digits to conditioning as the order grows
        assert np.allclose(got, want, rtol=1e-9, atol=2e-6 * np.max(np.abs(want)))

    @pytest.mark.parametrize("order", [1, 2, 3, 5, 8])
    def test_symmetry_and_midpoint(self, order):
        coeffs = smoothstep_coefficients(order)
        tol = 1e-9 if order <= 5 else 2e-6
        u = np.linspace(0.0, 1.0, 513)
        s = npoly.polyval(u, coeffs)
        assert np.allclose(s + s[::-1], 1.0, atol=tol)
        assert npoly.polyval(0.5, coeffs) == pytest.approx(0.5, abs=tol)

    @pytest.mark.parametrize("order", [1, 2, 4, 7])
    def test_flat_contact_at_endpoints(self, order):
        coeffs = smoothstep_coefficients(order)
        scale = np.max(np.abs(coeffs))
        deriv = coeffs
        for _ in range(order):
            deriv = npoly.polyder(deriv)
            for endpoint in (0.0, 1.0):
                assert abs(npoly.polyval(endpoint, deriv)) <= 1e-8 * scale

    def test_monotone_on_unit_interval(self):
        for order in (1, 3, 6):
            deriv = npoly.polyder(smoothstep_coefficients(order))
            vals = npoly.polyval(np.linspace(0.0, 1.0, 401), deriv)
            assert vals.min() >= -1e-7 * vals.max()

    def test_order_validation(self):
        with pytest.raises(ValueError):
            smoothstep_coefficients(0)

    def test_conditioning_warning_past_the_safe_range(self):
        with pytest.warns(RuntimeWarning):
            smoothstep_coefficients(11)


class TestBuildWitness:
    def test_single_value_is_constant(self):
        w = build_witness([0.7], order=3, radius=2.0)
        assert len(w.pieces) == 1
        xs = np.linspace(-2.0, 2.0, 101)
        assert np.all(w(xs) == 0.7)
        assert np.all(w.evaluate(xs, 1) == 0.0)
        assert witness_derivative_scale(w) == 0.0

    def test_two_value_layout(self):
        # ratio 0.5 with two values: transition width 1 centered at 0
        w = build_witness([0.0, 1.0], order=1, radius=1.0)
        # interior junctions only; the domain endpoints are not breakpoints
        assert np.allclose(w.breakpoints, [-0.5, 0.5])
        trans = w.transitions
        assert len(trans) == 1
        assert trans[0].width == pytest.approx(1.0, rel=1e-12)
        assert w(0.0) == pytest.approx(0.5, abs=1e-12)

    def test_pieces_tile_the_domain(self):
        rng = np.random.default_rng(3)
        w = build_witness(rng.standard_normal(6), order=2, radius=1.5)
        assert w.pieces[0].lo == -1.5
        assert w.pieces[-1].hi == 1.5
        for a, b in zip(w.pieces, w.pieces[1:]):
            assert b.lo == pytest.approx(a.hi, abs=1e-12)
            # strict alternation plateau / transition
            assert isinstance(a, Plateau) != isinstance(b, Plateau)

    def test_values_deduplicated_and_sorted(self):
        w = build_witness([3.0, -1.0, 3.0, 0.5], order=1)
        assert np.array_equal(w.plateau_values, [-1.0, 0.5, 3.0])
        jumps = [t.jump for t in w.transitions]
        assert all(j > 0 for j in jumps)  # monotone staircase

    def test_critical_values_are_exactly_the_prescribed_set(self):
        rng = np.random.default_rng(11)
        delta = np.sort(rng.uniform(-2.0, 2.0, size=7))
        w = build_witness(delta, order=5)
        xs = np.linspace(-1.0, 1.0, 20001)
        fx = w(xs)
        slope = w.evaluate(xs, 1)
        flat = np.abs(slope) < 1e-10
        # interior criterion: drop the domain endpoints themselves
        flat[0] = flat[-1] = False
        attained = fx[flat]
        assert attained.size > 0
        # every flat sample sits on a prescribed level ...
        dist = np.min(np.abs(attained[:, None] - delta[None, :]), axis=1)
        assert np.max(dist) < 1e-6
        # ... and every prescribed level is attained
        for v in delta:
            assert np.min(np.abs(attained - v)) < 1e-9

    def test_wider_transitions_lower_the_scale(self):
        delta = [0.0, 1.0, 2.5]
        gentle = build_witness(delta, order=2, plateau_ratio=0.25)
        steep = build_witness(delta, order=2, plateau_ratio=2.0)
        assert witness_derivative_scale(gentle) < witness_derivative_scale(steep)

    def test_validation(self):
        with pytest.raises(ValueError):
            build_witness([], order=1)
        with pytest.raises(ValueError):
            build_witness([0.0, math.nan], order=1)
        with pytest.raises(ValueError):
            build_witness([0.0, 1.0], order=1, radius=0.0)
        with pytest.raises(ValueError):
            build_witness([0.0, 1.0], order=1, plateau_ratio=-0.5)


class TestEvaluate:
    def test_vectorized_matches_scalar(self):
        w = build_witness([0.0, 1.0, 3.0], order=2)
        xs = np.linspace(-1.0, 1.0, 57)
        for j in (0, 1, 2):
            vec = w.evaluate(xs, j)
            scal = np.array([w.evaluate(float(x), j) for x in xs])
            assert np.array_equal(vec, scal)

    def test_domain_enforced(self):
        w = build_witness([0.0, 1.0], order=1)
        with pytest.raises(ValueError):
            w.evaluate(1.001)
        with pytest.raises(ValueError):
            w.evaluate(np.array([0.0, -1.5]))

    def test_endpoints_hit_the_extreme_plateaus(self):
        w = build_witness([-2.0, 5.0], order=3, radius=0.5)
        assert w(-0.5) == -2.0
        assert w(0.5) == 5.0

    def test_derivatives_beyond_the_degree_vanish(self):
        w = build_witness([0.0, 1.0], order=1)  # cubic transitions
        xs = np.linspace(-1.0, 1.0, 33)
        assert np.all(w.evaluate(xs, 4) == 0.0)
        assert np.all(w.evaluate(xs, 9) == 0.0)


class TestDerivativeScale:
    def test_canonical_step(self):
        # max of the cubic step slope is 1.5; jump 1 over width 1
        w = build_witness([0.0, 1.0], order=1)
        assert witness_derivative_scale(w) == pytest.approx(1.5, rel=1e-12)

    def test_scales_linearly_with_values(self):
        delta = np.array([0.0, 0.4, 1.0, 2.2])
        base = witness_derivative_scale(build_witness(delta, order=3))
        for a in (0.1, 7.0):
            scaled = witness_derivative_scale(build_witness(a * delta, order=3))
            assert scaled == pytest.approx(a * base, rel=1e-12)

    def test_lower_order_measurement(self):
        w = build_witness([0.0, 1.0], order=4)
        full = witness_derivative_scale(w)
        first = witness_derivative_scale(w, order=1)
        assert full > 0 and first > 0 and first != full

    def test_order_validation(self):
        w = build_witness([0.0, 1.0], order=2)
        with pytest.raises(ValueError):
            witness_derivative_scale(w, order=0)
        with pytest.raises(ValueError):
            witness_derivative_scale(w, order=3)

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_finite_difference_cross_check(self, order):
        delta = [0.0, 0.3, 0.7, 1.1, 2.0]
        w = build_witness(delta, order)
        exact = witness_derivative_scale(w)
        h = 0.002
        xs = np.linspace(-1.0, 1.0, 1001)
        g = w(xs)
        for _ in range(order):
            g = np.gradient(g, h)
        trim = 4 * order
        fd = np.max(np.abs(g[trim:-trim])) / math.factorial(order)
        assert fd == pytest.approx(exact, rel=0.01)


class TestJunctionContinuity:
    @pytest.mark.parametrize("order", [1, 2, 3, 5])
    def test_one_sided_limits_agree(self, order):
        delta = [0.0, 0.3, 0.7, 1.1, 2.0]
        w = build_witness(delta, order)
        xs = np.linspace(-1.0, 1.0, 4001)
        tiny = 1e-9
        for j in range(order + 1):
            gmax = max(float(np.max(np.abs(w.evaluate(xs, j)))), 1e-30)
            for b in w.breakpoints:
                if abs(b) >= 1.0 - tiny:
                    continue
                left = w.evaluate(b - tiny, j)
                right = w.evaluate(b + tiny, j)
                assert abs(left - right) <= 1e-6 * gmax

    @pytest.mark.parametrize("order", [1, 2, 3, 5])
    def test_one_sided_stencils_match_analytic_junction_derivatives(self, order):
        # fourth-order one-sided stencils stay inside a single piece, so the
        # comparison isolates the assembly from the stencil's own error
        delta = [0.0, 0.3, 0.7, 1.1, 2.0]
        w = build_witness(delta, order)
        h = 1e-4
        xs = np.linspace(-1.0, 1.0, 4001)
        for j in range(1, order + 1):
            gmax = float(np.max(np.abs(w.evaluate(xs, j))))

            def g(t, jj=j):
                return w.evaluate(t, jj - 1)

            for b in w.breakpoints:
                if abs(b) >= 1.0 - 5 * h:
                    continue
                forward = (
                    -25 * g(b) + 48 * g(b + h) - 36 * g(b + 2 * h)
                    + 16 * g(b + 3 * h) - 3 * g(b + 4 * h)
                ) / (12 * h)
                backward = (
                    25 * g(b) - 48 * g(b - h) + 36 * g(b - 2 * h)
                    - 16 * g(b - 3 * h) + 3 * g(b - 4 * h)
                ) / (12 * h)
                exact = w.evaluate(b, j)
                assert abs(forward - exact) <= 1e-6 * gmax
                assert abs(backward - exact) <= 1e-6 * gmax


class TestSerialization:
    def test_sample_csv_header_tracks_the_order(self):
        w = build_witness([0.0, 1.0], order=2)
        lines = w.sample_csv_text(num=11).strip().split("\n")
        assert lines[0] == "x,f,f1,f2"
        assert len(lines) == 12
        first = [float(v) for v in lines[1].split(",")]
        assert first[0] == -1.0 and first[1] == 0.0

    def test_sample_table(self):
        w = build_witness([0.0, 1.0], order=1)
        xs, fs = w.sample_table(num=101)
        assert xs.shape == fs.shape == (101,)
        assert fs[0] == 0.0 and fs[-1] == 1.0

    def test_json_dict(self):
        w = build_witness([0.0, 1.0, 2.0], order=2, radius=1.5)
        blob = w.to_json_dict()
        assert blob["order"] == 2
        assert blob["radius"] == 1.5
        assert blob["plateau_values"] == [0.0, 1.0, 2.0]
        kinds = [p["kind"] for p in blob["pieces"]]
        assert kinds == ["plateau", "transition"] * 2 + ["plateau"]
        json.dumps(blob)  # plain python scalars only


class TestSandwich:
    def test_seven_point_instance(self):
        p = ProblemParams(1, 1, 5)  # c = 6
        result = sandwich_check(p, LambdaProfile.zeros(1), FinitePoints(np.arange(7) * 0.1))
        assert result.ok
        assert result.gamma == pytest.approx((7.0 / 6.0) ** 5 * 0.05, rel=1e-6)
        assert result.witness_scale > result.gamma

    def test_tiny_set_is_trivially_consistent(self):
        p = ProblemParams(1, 1, 5)
        result = sandwich_check(p, LambdaProfile.zeros(1), FinitePoints([0.0, 1.0]))
        assert result.gamma == 0.0
        assert result.ok

    def test_univariate_only(self):
        p = ProblemParams(2, 1, 3, c=2.0)
        with pytest.raises(ValueError):
            sandwich_check(p, LambdaProfile.zeros(1), FinitePoints([0.0, 1.0, 2.0]))

    def test_random_sweep(self):
        rng = np.random.default_rng(1234)
        for trial in range(20):
            d = 1 + trial % 3
            p = ProblemParams(1, 1, d)
            delta = FinitePoints(rng.uniform(-1.0, 1.0, size=d + 2))
            result = sandwich_check(p, LambdaProfile.zeros(1), delta)
            assert result.ok, f"bound exceeded the witness scale on trial {trial}"

    def test_json_payload(self):
        p = ProblemParams(1, 1, 2)  # c = 3
        result = sandwich_check(p, LambdaProfile.zeros(1), FinitePoints([0.0, 0.5, 1.0, 2.0]))
        blob = result.to_json_dict()
        for key in ("gamma", "witness_derivative_scale", "witness", "ok"):
            assert key in blob
        assert blob["ok"] is True
        json.dumps(blob)
