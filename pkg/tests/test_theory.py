"""Tests for eta-nets, partitions of unity, and the size calculators.

Frozen numbers below were derived by hand from the closed forms (powers
of two throughout, so float-exact), with cover counts cross-checked by
brute-force nearest-center searches.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molab import theory as th


def _probe_box(rng, bounds, n):
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return lo + rng.random((n, len(bounds))) * (hi - lo)


class TestEtaNet:
    def test_two_center_example(self):
        net = th.build_eta_net([(0.0, 2.0)], 1.0)
        assert net.centers.ravel().tolist() == [0.5, 1.5]

    def test_collapses_to_midpoint(self):
        # eta at least the box diagonal: a single center suffices
        net = th.build_eta_net([(0.0, 2.0)], 2.0)
        assert net.centers.ravel().tolist() == [1.0]
        net3 = th.build_eta_net([(0.0, 1.0), (0.0, 1.0)], 2.0)
        assert net3.n_centers == 1
        assert net3.centers[0].tolist() == [0.5, 0.5]

    def test_every_point_within_half_eta(self):
        rng = np.random.default_rng(7)
        for d in (1, 2, 3):
            for eta in (0.9, 0.37, 0.125):
                bounds = [(-1.0, 1.5)] * d
                net = th.build_eta_net(bounds, eta)
                pts = _probe_box(rng, bounds, 400)
                dists = np.linalg.norm(
                    pts[:, None, :] - net.centers[None, :, :], axis=2
                ).min(axis=1)
                assert dists.max() <= eta / 2 + 1e-12

    def test_halving_eta_at_most_doubles_per_dim(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            d = int(rng.integers(1, 4))
            width = float(rng.uniform(0.3, 3.0))
            eta = float(rng.uniform(0.05, 1.0))
            n_coarse = th.build_eta_net([(0.0, width)] * d, eta).n_centers
            n_fine = th.build_eta_net([(0.0, width)] * d, eta / 2).n_centers
            assert n_fine <= 2**d * n_coarse

    def test_ceil_guard_absorbs_float_noise(self):
        assert th._ceil_safe(20.000000000000004) == 20
        assert th._ceil_safe(20.2) == 21
        assert th._ceil_safe(0.3) == 1

    def test_input_validation(self):
        with pytest.raises(ValueError, match="eta"):
            th.build_eta_net([(0.0, 1.0)], 0.0)
        with pytest.raises(ValueError, match="dimension"):
            th.build_eta_net([], 1.0)
        with pytest.raises(ValueError, match="empty interval"):
            th.build_eta_net([(1.0, 1.0)], 0.5)


class TestPartitionOfUnity:
    def test_weights_sum_to_one(self):
        rng = np.random.default_rng(11)
        for d, eta in ((1, 0.5), (2, 0.3), (3, 0.8)):
            bounds = [(0.0, 1.0)] * d
            pou = th.PartitionOfUnity(th.build_eta_net(bounds, eta))
            pts = _probe_box(rng, bounds, 1000)
            w = th.pou_weights(pou, pts)
            assert np.all(w >= 0.0)
            assert np.max(np.abs(w.sum(axis=1) - 1.0)) < 1e-12

    def test_single_point_matches_batch(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 2.0)], 0.7))
        x = np.array([1.234])
        assert th.pou_eval(pou, x).tolist() == th.pou_weights(pou, x[None, :])[0].tolist()

    def test_uncovered_point_errors(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], 0.25))
        with pytest.raises(ValueError, match="cover violated at x"):
            th.pou_eval(pou, np.array([5.0]))

    def test_dimension_mismatch(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)] * 2, 0.5))
        with pytest.raises(ValueError, match="dim"):
            th.pou_eval(pou, np.array([0.5]))

    @settings(max_examples=40, deadline=None)
    @given(
        d=st.integers(1, 3),
        eta=st.floats(0.1, 1.5),
        seed=st.integers(0, 10_000),
    )
    def test_sum_to_one_property(self, d, eta, seed):
        rng = np.random.default_rng(seed)
        bounds = [(-0.5, 1.0)] * d
        pou = th.PartitionOfUnity(th.build_eta_net(bounds, eta))
        pts = _probe_box(rng, bounds, 50)
        sums = th.pou_weights(pou, pts).sum(axis=1)
        assert np.max(np.abs(sums - 1.0)) < 1e-12


def _random_lipschitz_1d(rng):
    """Random trig sum with a known Lipschitz constant on [0, 1]."""
    amps = rng.uniform(-1.0, 1.0, size=3)
    freqs = rng.uniform(0.5, 6.0, size=3)
    phases = rng.uniform(0.0, 2 * np.pi, size=3)

    def f(x):
        return sum(a * np.sin(k * x + p) for a, k, p in zip(amps, freqs, phases))

    lip = float(np.sum(np.abs(amps * freqs)))
    return f, lip


class TestProjection:
    def test_projection_error_bounded_by_lip_times_eta(self):
        rng = np.random.default_rng(19)
        for eta in (0.5, 0.25, 0.125):
            pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], eta))
            xs = np.linspace(0.0, 1.0, 257)[:, None]
            for _ in range(25):
                f, lip = _random_lipschitz_1d(rng)
                center_vals = f(pou.net.centers[:, 0])
                proj = th.project_function(center_vals, pou, xs)
                err = np.max(np.abs(proj - f(xs[:, 0])))
                assert err <= lip * eta + 1e-12

    def test_constants_reproduced_exactly(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)] * 2, 0.4))
        vals = np.full(pou.net.n_centers, 3.25)
        pts = _probe_box(np.random.default_rng(5), pou.net.bounds, 200)
        out = th.project_function(vals, pou, pts)
        assert np.max(np.abs(out - 3.25)) < 1e-12

    def test_scalar_point_returns_scalar(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], 0.5))
        vals = np.arange(pou.net.n_centers, dtype=float)
        out = th.project_function(vals, pou, np.array([0.3]))
        assert np.ndim(out) == 0

    def test_value_count_mismatch(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], 0.5))
        with pytest.raises(ValueError, match="center values"):
            th.project_function(np.zeros(pou.net.n_centers + 1), pou, np.array([0.3]))

    def test_lifting_is_sup_contraction(self):
        rng = np.random.default_rng(23)
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)] * 2, 0.3))
        pts = _probe_box(rng, pou.net.bounds, 300)
        for _ in range(20):
            z1 = rng.normal(size=pou.net.n_centers)
            z2 = rng.normal(size=pou.net.n_centers)
            gap = np.max(
                np.abs(th.lift_discrete(z1, pou, pts) - th.lift_discrete(z2, pou, pts))
            )
            assert gap <= np.max(np.abs(z1 - z2)) + 1e-12

    def test_lift_matches_projection_arithmetic(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], 0.25))
        z = np.linspace(-1, 1, pou.net.n_centers)
        pts = np.linspace(0, 1, 33)[:, None]
        assert np.array_equal(
            th.lift_discrete(z, pou, pts), th.project_function(z, pou, pts)
        )

    def test_lift_bound_enforced(self):
        pou = th.PartitionOfUnity(th.build_eta_net([(0.0, 1.0)], 0.25))
        z = np.full(pou.net.n_centers, 2.0)
        with pytest.raises(ValueError, match="exceed declared bound"):
            th.lift_discrete(z, pou, np.array([[0.5]]), bound=1.5)


class TestCoveringCount:
    def test_frozen_values(self):
        assert th.covering_count(1.0, 1, 0.0625) == 16
        assert th.covering_count(1.0, 2, 0.5) == 9  # ceil(sqrt(2)/0.5)=3 per dim
        assert th.covering_count(1.0, 1, 2.0) == 1

    def test_halving_radius_at_most_doubles_per_dim(self):
        for d in (1, 2, 3):
            for r in (0.7, 0.31, 0.11):
                assert th.covering_count(1.0, d, r / 2) <= 2**d * th.covering_count(
                    1.0, d, r
                )


class TestScalingSingleFunctionFirst:
    def test_frozen_half_eps_query(self):
        r = th.scaling_single(th.ScalingQuery(d_u=1, d_v=1, eps=0.5))
        assert r.regime == "single-function-first"
        assert r.space_count == 4
        assert r.delta == 0.0625
        assert r.n_cu == 16
        assert r.function_count == 64
        assert r.blowup_side == "function"
        # budgets: K1 = ceil(ln 2) = 1; K2 = ceil(256 (ln 16 + 2 ln 2 + ln 4))
        assert r.space_net.max_nonzero == 1
        assert r.function_net.max_nonzero == math.ceil(
            256 * (math.log(16) + 2 * math.log(2) + math.log(4))
        )
        assert r.space_net.weight_bound == 4.0  # 1^(3/2) * 0.5^-2
        # kappa2 = 16^9 * 0.5^-34 * 4^17 = 2^104
        assert r.function_net.log10_weight_bound == pytest.approx(
            104 * math.log10(2), rel=1e-12
        )
        assert r.function_net.output_bound == 1.0
        assert r.space_net.width == 1

    def test_param_count_recomposition(self):
        r = th.scaling_single(th.ScalingQuery(d_u=1, d_v=1, eps=0.3))
        expect_space = float(r.space_count) ** float(r.d_v) * r.space_net.max_nonzero
        expect_function = (
            float(r.function_count) ** float(r.n_cu) * r.function_net.max_nonzero
        )
        assert math.isfinite(expect_function)
        assert r.n_params_space == expect_space
        assert r.n_params_function == expect_function
        assert r.n_params_total == expect_space + expect_function
        assert r.log10_n_params == pytest.approx(
            math.log10(r.n_params_total), rel=1e-12
        )

    def test_counts_grow_as_eps_shrinks(self):
        reports = [
            th.scaling_single(th.ScalingQuery(d_u=1, d_v=2, eps=e))
            for e in (0.5, 0.3, 0.1, 0.05)
        ]
        for a, b in zip(reports, reports[1:]):
            assert b.space_count >= a.space_count
            assert b.n_cu >= a.n_cu
            assert b.log10_function_count >= a.log10_function_count
            assert b.log10_n_params >= a.log10_n_params

    def test_overflow_is_reported_in_log10(self):
        r = th.scaling_single(th.ScalingQuery(d_u=3, d_v=3, eps=0.01))
        assert r.n_cu == math.inf
        assert math.isfinite(r.log10_n_cu)
        assert r.n_params_total == math.inf
        assert math.isfinite(r.log10_n_params)

    def test_eps_validation(self):
        with pytest.raises(ValueError, match="eps < 1"):
            th.scaling_single(th.ScalingQuery(d_u=1, d_v=1, eps=1.0))
        with pytest.raises(ValueError, match="positive"):
            th.ScalingQuery(d_u=1, d_v=1, eps=-0.5)

    def test_rejects_d_w(self):
        with pytest.raises(ValueError, match="without d_w"):
            th.scaling_single(th.ScalingQuery(d_u=1, d_v=1, eps=0.5, d_w=2))


class TestScalingSingleFunctionalFirst:
    def test_frozen_half_eps_query(self):
        r = th.scaling_single(
            th.ScalingQuery(d_u=1, d_v=1, eps=0.5, order=th.FUNCTIONAL_FIRST)
        )
        assert r.regime == "single-functional-first"
        assert r.delta == 0.25
        assert r.n_cu == 4
        assert r.function_count == 8  # ceil(2 sqrt(4) / 0.5)
        assert r.space_count == 16384  # 2^5 * (sqrt 4)^4 * 0.5^-5
        assert r.blowup_side == "space"
        # K2 = ceil(16 (ln 4 + ln 2)); kappa2 = 4^3 * 0.5^-5
        assert r.function_net.max_nonzero == math.ceil(16 * math.log(8))
        assert r.function_net.weight_bound == 2048.0
        # K1 = ceil(5 ln 2 + ln 512); kappa1 = 0.5^-10 / 512
        assert r.space_net.max_nonzero == math.ceil(5 * math.log(2) + math.log(512))
        assert r.space_net.weight_bound == 2.0

    def test_delta_independent_of_d_v(self):
        r2 = th.scaling_single(
            th.ScalingQuery(d_u=1, d_v=2, eps=0.5, order=th.FUNCTIONAL_FIRST)
        )
        r3 = th.scaling_single(
            th.ScalingQuery(d_u=1, d_v=3, eps=0.5, order=th.FUNCTIONAL_FIRST)
        )
        assert r2.delta == r3.delta == 0.25
        assert r2.n_cu == r3.n_cu

    def test_coarser_delta_than_function_first(self):
        for eps in (0.5, 0.3, 0.1):
            for d_u in (1, 2, 3):
                for d_v in (1, 2, 3):
                    ff = th.scaling_single(th.ScalingQuery(d_u=d_u, d_v=d_v, eps=eps))
                    fcf = th.scaling_single(
                        th.ScalingQuery(
                            d_u=d_u, d_v=d_v, eps=eps, order=th.FUNCTIONAL_FIRST
                        )
                    )
                    assert fcf.delta >= ff.delta
                    assert fcf.n_cu <= ff.n_cu

    def test_param_count_recomposition(self):
        r = th.scaling_single(
            th.ScalingQuery(d_u=1, d_v=1, eps=0.4, order=th.FUNCTIONAL_FIRST)
        )
        assert r.n_params_space == r.space_count**r.d_v * r.space_net.max_nonzero
        assert (
            r.n_params_function
            == r.function_count**r.n_cu * r.function_net.max_nonzero
        )
        assert r.n_params_total == r.n_params_space + r.n_params_function


class TestScalingMulti:
    def test_frozen_half_eps_query(self):
        r = th.scaling_multi(th.ScalingQuery(d_u=1, d_v=1, eps=0.5, d_w=1))
        assert r.regime == "multi"
        assert r.zeta == 0.5
        assert r.n_cw == 2
        assert r.operator_count == 6  # ceil(2 sqrt(2) / 0.5)
        assert r.space_count == 256  # 2^4 * (sqrt 2)^2 * 0.5^-3
        assert r.delta == pytest.approx(1.0 / 4096.0, rel=1e-12)
        assert r.n_cu == 4096
        assert r.function_count == 4194304
        assert r.blowup_side == "function"
        # K3 = ceil(4 (ln 2 + ln 2)); kappa3 = 2^2 * 0.5^-3
        assert r.operator_net.max_nonzero == math.ceil(4 * math.log(4))
        assert r.operator_net.weight_bound == 32.0

    def test_param_count_recomposition(self):
        r = th.scaling_multi(th.ScalingQuery(d_u=1, d_v=1, eps=0.5, d_w=1))
        assert r.n_params_operator == r.operator_count**r.n_cw * r.operator_net.max_nonzero
        assert r.n_params_space == r.space_count**r.d_v * r.space_net.max_nonzero
        # the function term overflows linearly; its log10 dominates the total
        assert r.n_params_function == math.inf
        assert r.n_params_total == math.inf
        lg_fn = r.n_cu * math.log10(r.function_count) + r.function_net.log10_max_nonzero
        assert r.log10_n_params >= lg_fn
        assert r.log10_n_params <= lg_fn + math.log10(3)

    def test_counts_grow_as_eps_shrinks(self):
        reports = [
            th.scaling_multi(th.ScalingQuery(d_u=1, d_v=1, eps=e, d_w=1))
            for e in (0.5, 0.3, 0.1)
        ]
        for a, b in zip(reports, reports[1:]):
            assert b.n_cw >= a.n_cw
            assert b.operator_count >= a.operator_count
            assert b.log10_function_count >= a.log10_function_count
            assert b.log10_n_params >= a.log10_n_params

    def test_requires_d_w(self):
        with pytest.raises(ValueError, match="needs d_w"):
            th.scaling_multi(th.ScalingQuery(d_u=1, d_v=1, eps=0.5))

    def test_constants_scale_the_covers(self):
        cs = th.ScalingConstants(c_zeta=0.5)
        r = th.scaling_multi(th.ScalingQuery(d_u=1, d_v=1, eps=0.5, d_w=1, constants=cs))
        assert r.zeta == 0.25
        assert r.n_cw == 4


class TestEpsilonOfNparams:
    def test_functional_first_closed_form_point(self):
        # at n_params = e^e the log ratio is exactly e
        eps = th.epsilon_of_nparams(math.e**math.e, th.SINGLE_FUNCTIONAL_FIRST, d_u=1)
        assert eps == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_function_first_exponent(self):
        n = math.e**math.e
        eps = th.epsilon_of_nparams(n, th.SINGLE_FUNCTION_FIRST, d_u=1, d_v=1)
        assert eps == pytest.approx(math.exp(-0.5), rel=1e-12)

    def test_functional_first_no_worse_than_function_first(self):
        for n in (1e2, 1e4, 1e8, 1e16):
            for d_u in (1, 2):
                for d_v in (1, 2, 3):
                    ff = th.epsilon_of_nparams(n, th.SINGLE_FUNCTION_FIRST, d_u=d_u, d_v=d_v)
                    fcf = th.epsilon_of_nparams(n, th.SINGLE_FUNCTIONAL_FIRST, d_u=d_u)
                    assert fcf <= ff

    def test_multi_needs_more_params_for_same_eps(self):
        for n in (1e3, 1e6, 1e9, 1e12):
            single = th.epsilon_of_nparams(n, th.SINGLE_FUNCTIONAL_FIRST, d_u=1)
            multi = th.epsilon_of_nparams(n, th.MULTI, d_w=1)
            assert multi > single

    def test_monotone_in_n_params(self):
        vals = [
            th.epsilon_of_nparams(n, th.SINGLE_FUNCTIONAL_FIRST, d_u=2)
            for n in (1e2, 1e4, 1e8, 1e12, 1e20)
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        # the multi law's log ratio only turns monotone once loglog(n) > e,
        # i.e. n beyond about 3.8e6
        multi = [
            th.epsilon_of_nparams(n, th.MULTI, d_w=2)
            for n in (1e7, 1e9, 1e12, 1e20)
        ]
        assert all(b < a for a, b in zip(multi, multi[1:]))

    def test_outside_asymptotic_regime(self):
        with pytest.raises(ValueError, match="asymptotic regime not reached"):
            th.epsilon_of_nparams(2.0, th.SINGLE_FUNCTIONAL_FIRST, d_u=1)
        with pytest.raises(ValueError, match="asymptotic regime not reached"):
            th.epsilon_of_nparams(math.e**math.e, th.MULTI, d_w=1)
        with pytest.raises(ValueError, match="positive"):
            th.epsilon_of_nparams(0.0, th.MULTI, d_w=1)

    def test_missing_dims_and_unknown_regime(self):
        with pytest.raises(ValueError, match="needs d_u and d_v"):
            th.epsilon_of_nparams(1e6, th.SINGLE_FUNCTION_FIRST, d_u=1)
        with pytest.raises(ValueError, match="needs d_u"):
            th.epsilon_of_nparams(1e6, th.SINGLE_FUNCTIONAL_FIRST)
        with pytest.raises(ValueError, match="needs d_w"):
            th.epsilon_of_nparams(1e6, th.MULTI)
        with pytest.raises(ValueError, match="unknown regime"):
            th.epsilon_of_nparams(1e6, "both-at-once", d_u=1)


class TestQueryValidation:
    def test_dimension_checks(self):
        with pytest.raises(ValueError, match="d_u"):
            th.ScalingQuery(d_u=0, d_v=1, eps=0.5)
        with pytest.raises(ValueError, match="d_w"):
            th.ScalingQuery(d_u=1, d_v=1, eps=0.5, d_w=0)
        with pytest.raises(ValueError, match="unknown order"):
            th.ScalingQuery(d_u=1, d_v=1, eps=0.5, order="fastest")

    def test_constants_must_be_positive(self):
        with pytest.raises(ValueError, match="c_delta"):
            th.ScalingConstants(c_delta=0.0)
