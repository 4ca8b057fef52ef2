import numpy as np
import pytest

from gcgames import fimo
from gcgames.game import omega_membership
from gcgames.uncertainty import (
    ConeSpec,
    Realization,
    cone_interval,
    eval_p1_sin,
    eval_p2_sin,
    make_disturbance,
    sample_admissible,
    verify_cone,
)


@pytest.fixture(scope="module")
def cones(baseline_params):
    return fimo.canonical_cones(baseline_params)


class TestSinRealizations:
    def test_zero_at_origin(self):
        assert eval_p1_sin(0.0) == 0.0
        assert eval_p2_sin(0.0) == 0.0

    def test_symmetric_peak_value(self):
        y = 2.0 / np.pi  # 1/y = pi/2, sin = 1
        assert np.isclose(eval_p1_sin(y), np.sqrt(2.0) / np.pi)

    def test_one_sided_boundary_attained(self):
        y = 2.0 / np.pi
        assert np.isclose(eval_p2_sin(y), y)  # upper cone boundary

    def test_bounded_by_cones_under_oscillation_stress(self):
        rng = np.random.default_rng(0)
        # mix of wide-range and near-zero inputs to exercise 1/y oscillation
        ys = np.concatenate([
            rng.uniform(-10, 10, size=500_000),
            rng.uniform(-1e-6, 1e-6, size=500_000),
            [0.0],
        ])
        with np.errstate(divide="ignore", invalid="ignore"):
            osc = np.where(ys != 0.0, np.sin(1.0 / np.where(ys != 0, ys, 1.0)),
                           0.0)
        p1 = np.abs(ys) / np.sqrt(2.0) * osc
        assert np.all(np.abs(p1) <= np.abs(ys) / np.sqrt(2.0) + 1e-15)
        p2 = ys / 2.0 + np.abs(ys) / 2.0 * osc
        assert np.all(p2 >= np.minimum(0.0, ys) - 1e-15)
        assert np.all(p2 <= np.maximum(0.0, ys) + 1e-15)
        # the vectorized forms agree with the scalar evaluators
        for y in ys[::9973]:
            assert np.isclose(eval_p1_sin(y),
                              abs(y) / np.sqrt(2) * (np.sin(1 / y) if y else 0))
            assert np.isclose(eval_p2_sin(y),
                              y / 2 + abs(y) / 2 * (np.sin(1 / y) if y else 0))


class TestConeSpec:
    def test_interval_shapes(self):
        sym = ConeSpec(kind="symmetric", output_row=[1.0], scale=1 / np.sqrt(2))
        one = ConeSpec(kind="one-sided", output_row=[1.0], scale=0.5)
        assert cone_interval(sym, 1.0) == (-1 / np.sqrt(2), 1 / np.sqrt(2))
        assert cone_interval(one, 1.0) == (0.0, 1.0)
        assert cone_interval(one, -2.0) == (-2.0, 0.0)

    def test_verify_cone_endpoints(self):
        sym = ConeSpec(kind="symmetric", output_row=[1.0], scale=1 / np.sqrt(2))
        one = ConeSpec(kind="one-sided", output_row=[1.0], scale=0.5)
        assert verify_cone(sym, [1.0], 0.70)
        assert not verify_cone(sym, [1.0], 0.72)
        assert verify_cone(one, [1.0], 1.0)  # boundary inclusion
        assert verify_cone(sym, [1.0], 0.0)
        assert verify_cone(one, [1.0], 0.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ConeSpec(kind="circular", output_row=[1.0], scale=1.0)


class TestSampler:
    def test_degenerate_interval(self, cones):
        assert sample_admissible(cones[0], [0.0, 0.0], 0) == 0.0

    def test_symmetric_draw_in_range(self):
        cone = ConeSpec(kind="symmetric", output_row=[1.0], scale=1 / np.sqrt(2))
        for seed in range(200):
            v = sample_admissible(cone, [1.0], seed)
            assert -1 / np.sqrt(2) <= v <= 1 / np.sqrt(2)

    def test_one_sided_negative_output(self):
        cone = ConeSpec(kind="one-sided", output_row=[1.0], scale=0.5)
        for seed in range(200):
            v = sample_admissible(cone, [-2.0], seed)
            assert -2.0 <= v <= 0.0

    def test_deterministic_per_seed(self, cones):
        x = [0.3, -0.4]
        a = sample_admissible(cones[0], x, 99)
        b = sample_admissible(cones[0], x, 99)
        assert a == b


class TestEquivalenceWithQuadraticSets:
    def test_cone_iff_omega_for_both_blocks(self, baseline_model, cones):
        rng = np.random.default_rng(7)
        for block, cone in zip(baseline_model.blocks, cones):
            for _ in range(10_000):
                x = rng.uniform(-1.0, 1.0, size=2)
                p = rng.uniform(-0.25, 0.25)
                y = cone.output(x)
                member = omega_membership(block, [p], [y - p], tol=1e-12)
                assert member == verify_cone(cone, x, p, tol=1e-12)


class TestLinearCoefficientForms:
    def test_fluctuating_inflation_coefficient_stays_in_cone(self):
        # p2 = c_t * pi with 0 <= c_t <= cbar satisfies the one-sided cone
        # whose output is y2 = cbar * pi
        rng = np.random.default_rng(17)
        cbar = 0.8
        cone = ConeSpec(kind="one-sided", output_row=[0.0, cbar], scale=0.5)
        for _ in range(5000):
            pi = rng.uniform(-2.0, 2.0)
            c = rng.uniform(0.0, cbar)
            assert verify_cone(cone, [0.0, pi], c * pi)

    def test_symmetric_coefficient_form(self):
        rng = np.random.default_rng(18)
        cbar = 1.3
        cone = ConeSpec(kind="symmetric", output_row=[cbar, 0.0],
                        scale=1 / np.sqrt(2))
        for _ in range(5000):
            z = rng.uniform(-2.0, 2.0)
            c = rng.uniform(-cbar / np.sqrt(2), cbar / np.sqrt(2))
            assert verify_cone(cone, [z, 0.0], c * z)


class TestDisturbanceFactory:
    def test_zero_kind(self, cones):
        d = make_disturbance(Realization(kind="zero"), cones)
        assert np.array_equal(d(0, [0.4, -0.2]), [0.0, 0.0])

    def test_sin_kind_matches_scalar_forms(self, cones, baseline_params):
        d = make_disturbance(Realization(kind="sin"), cones)
        x = np.array([0.3, -0.1])
        y1 = baseline_params.delta1 * x[0] + baseline_params.delta2 * x[1]
        y2 = baseline_params.delta3 * x[0] + baseline_params.delta4 * x[1]
        assert np.allclose(d(0, x), [eval_p1_sin(y1), eval_p2_sin(y2)])

    def test_random_kinds_replay_per_seed(self, cones):
        rng_states = np.random.default_rng(5).uniform(-1, 1, size=(50, 2))
        for kind in ("linear", "random"):
            d1 = make_disturbance(Realization(kind=kind, seed=3), cones)
            d2 = make_disturbance(Realization(kind=kind, seed=3), cones)
            seq1 = [d1(t, x) for t, x in enumerate(rng_states)]
            seq2 = [d2(t, x) for t, x in enumerate(rng_states)]
            assert np.array_equal(seq1, seq2)
            d3 = make_disturbance(Realization(kind=kind, seed=4), cones)
            seq3 = [d3(t, x) for t, x in enumerate(rng_states)]
            assert not np.array_equal(seq1, seq3)

    def test_random_kinds_stay_admissible(self, cones):
        rng = np.random.default_rng(6)
        for kind in ("linear", "random", "sin"):
            d = make_disturbance(Realization(kind=kind, seed=11), cones)
            for t in range(500):
                x = rng.uniform(-0.5, 0.5, size=2)
                p = d(t, x)
                for j, cone in enumerate(cones):
                    assert verify_cone(cone, x, p[j])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            Realization(kind="brownian")
