"""Tests for bivariate barycentric fitting and the rank consistency check."""

import numpy as np
import pytest

from pnlevp.contour import Disk, build_trapezoid_rule, default_sampling, \
    probe_samples
from pnlevp.errors import RankConsistencyError
from pnlevp.paaa import (consistency_rank_check, eval_model, lift_vector,
                         paaa_fit)
from pnlevp.problems import (LinearDemoProblem, SyntheticRationalProblem,
                             get_problem)


def _grid_eval(model, s, p):
    return np.array([[eval_model(model, z, w) for w in p] for z in s])


class TestConsistencyRankCheck:
    def test_linear_demo_m2(self):
        problem = LinearDemoProblem()
        domain = Disk(0.0, 0.6)
        config = default_sampling(domain, 20, 40, (0.75, 1.25), seed=0,
                                  dim=problem.dim)
        rule = build_trapezoid_rule(domain, 512)
        samples = probe_samples(problem, rule, config, domain)
        assert consistency_rank_check(samples, config) == 2

    def test_delay_m4(self):
        problem = get_problem("delay")
        domain = Disk(0.0, 0.075)
        config = default_sampling(domain, 20, 40, (30.0, 35.0), seed=0,
                                  dim=problem.dim)
        rule = build_trapezoid_rule(domain, 128)
        samples = probe_samples(problem, rule, config, domain)
        assert consistency_rank_check(samples, config) == 4

    def test_crossing_pole_raises(self):
        # one eigenvalue moves from inside the disk to outside across P
        domain = Disk(0.0, 1.0)
        problem = SyntheticRationalProblem([(0.2, 0.0), (-0.5, 2.0)], dim=4,
                                           seed=3)
        config = default_sampling(domain, 4, 2, (0.0, 1.0), seed=1,
                                  dim=problem.dim, inflation=2.0)
        rule = build_trapezoid_rule(domain, 128)
        samples = probe_samples(problem, rule, config, domain)
        with pytest.raises(RankConsistencyError) as info:
            consistency_rank_check(samples, config)
        assert info.value.ranks == [2, 1]


class TestPaaaFit:
    def test_reciprocal_difference_exact(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        assert model.converged
        assert len(model.z_nodes) == 2
        assert len(model.p_nodes) == 2
        held_s = np.linspace(1.05, 1.95, 7)
        held_p = np.linspace(4.05, 4.95, 7)
        got = _grid_eval(model, held_s, held_p)
        truth = 1.0 / (held_s[:, None] - held_p[None, :])
        np.testing.assert_allclose(got, truth, atol=1e-12)

    def test_constant_data(self):
        s = np.linspace(0.0, 1.0, 6)
        p = np.linspace(2.0, 3.0, 6)
        D = np.full((6, 6), 3.5 - 1.25j)
        model = paaa_fit(D, s, p)
        assert len(model.z_nodes) == 1
        assert len(model.p_nodes) == 1
        assert abs(eval_model(model, 0.37, 2.61) - (3.5 - 1.25j)) <= 1e-13

    def test_linear_demo_scalar_entry(self):
        # entry (1,1) of the closed-form pole part, z/(z^2 + p - 1), over the
        # benchmark sampling grids
        s = 0.8 * np.exp(2j * np.pi * np.arange(40) / 40)
        p = np.linspace(0.75, 1.25, 40)
        D = s[:, None] / (s[:, None] ** 2 + p[None, :] - 1.0)
        model = paaa_fit(D, s, p)
        assert model.converged
        assert len(model.z_nodes) == 3
        E = np.abs(_grid_eval(model, s, p) - D)
        assert np.max(E) <= 1e-12 * np.max(np.abs(D))

    def test_min_z_nodes_enforced(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p, min_z_nodes=4)
        assert len(model.z_nodes) >= 4
        assert model.converged

    def test_exact_recovery_bivariate_rational(self):
        # z-degree 2 and p-degree 1 denominators, poles away from the grids
        s = np.linspace(-1.0, 1.0, 12)
        p = np.linspace(0.0, 1.0, 8)

        def f(z, w):
            return (1.0 + z * w) / ((z * z - 2.0) * (w + 3.0))

        D = f(s[:, None], p[None, :])
        model = paaa_fit(D, s, p)
        assert model.converged
        held_s = np.linspace(-0.93, 0.93, 9)
        held_p = np.linspace(0.03, 0.97, 9)
        got = _grid_eval(model, held_s, held_p)
        truth = f(held_s[:, None], held_p[None, :])
        scale = np.max(np.abs(truth))
        np.testing.assert_allclose(got, truth, atol=1e-10 * scale)

    def test_error_history_monotone(self):
        s = np.linspace(-1.0, 1.0, 12)
        p = np.linspace(0.0, 1.0, 10)
        D = (s[:, None] + 2.0 * p[None, :]) / ((s[:, None] - 3.0)
                                               * (p[None, :] + 2.0))
        model = paaa_fit(D, s, p)
        hist = model.error_history
        assert len(hist) >= 2
        for a, b in zip(hist, hist[1:]):
            assert b <= a + 10 * np.finfo(float).eps

    def test_unit_norm_coefficients(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        assert abs(np.linalg.norm(model.coeffs) - 1.0) <= 1e-14

    def test_interpolation_at_nodes(self):
        s = np.linspace(-1.0, 1.0, 9)
        p = np.linspace(2.0, 3.0, 9)
        D = np.sin(s)[:, None] * np.exp(1j * p)[None, :]
        model = paaa_fit(D, s, p, tol=1e-8)
        for a, xi in enumerate(model.z_nodes):
            for b, pi in enumerate(model.p_nodes):
                assert eval_model(model, xi, pi) == model.node_values[a, b]

    def test_degenerate_grids_rejected(self):
        s = np.array([1.0, 1.0, 2.0])
        p = np.array([4.0, 5.0, 6.0])
        D = np.ones((3, 3))
        with pytest.raises(ValueError):
            paaa_fit(D, s, p)
        with pytest.raises(ValueError):
            paaa_fit(np.ones((3, 3)), np.array([1.0, 2.0, 3.0]), p,
                     min_z_nodes=5, max_z_nodes=2)
        with pytest.raises(ValueError):
            paaa_fit(np.ones((2, 3)), np.array([1.0, 2.0, 3.0]), p)


class TestLiftVector:
    def test_scalar_lift_matches_parent(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        lifted = lift_vector(model, model.node_values[:, :, None])
        z, w = 1.37, 4.81
        got = eval_model(lifted, z, w)[0]
        want = eval_model(model, z, w)
        assert abs(got - want) <= 4 * np.finfo(float).eps * abs(want)

    def test_zero_vectors(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        shape = model.node_values.shape + (3,)
        lifted = lift_vector(model, np.zeros(shape, dtype=complex))
        np.testing.assert_array_equal(eval_model(lifted, 1.4, 4.6), 0.0)

    def test_wrong_shape_rejected(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        with pytest.raises(ValueError):
            lift_vector(model, np.zeros((1, 1, 3), dtype=complex))

    def test_probed_lift_reproduces_samples(self):
        problem = LinearDemoProblem()
        domain = Disk(0.0, 0.6)
        config = default_sampling(domain, 8, 12, (0.75, 1.25), seed=2,
                                  dim=problem.dim)
        rule = build_trapezoid_rule(domain, 512)
        samples = probe_samples(problem, rule, config, domain)
        r_mean = config.right_dirs.mean(axis=0)
        D = samples.left.mean(axis=0) @ r_mean
        model = paaa_fit(D, config.sample_points, config.parameter_points,
                         min_z_nodes=3)
        assert model.converged
        zi = [int(np.argmin(np.abs(config.sample_points - x)))
              for x in model.z_nodes]
        pj = [int(np.argmin(np.abs(config.parameter_points - x)))
              for x in model.p_nodes]
        k = 0
        lifted = lift_vector(model, samples.left[k][np.ix_(zi, pj)])
        scale = np.max(np.abs(samples.left[k]))
        for i, si in enumerate(config.sample_points):
            for j, pjv in enumerate(config.parameter_points):
                got = eval_model(lifted, si, pjv)
                np.testing.assert_allclose(got, samples.left[k, i, j],
                                           atol=1e-10 * scale)


class TestEvalModel:
    def test_node_line_is_one_dimensional_barycentric(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        xi = model.z_nodes[0]
        w_test = 4.44
        got = eval_model(model, xi, w_test)
        # 1-D barycentric in p over the matching node row
        weights = model.coeffs[0, :] / (w_test - model.p_nodes)
        expected = np.sum(weights * model.node_values[0]) / np.sum(weights)
        assert abs(got - expected) <= 1e-14
        assert abs(got - 1.0 / (xi - w_test)) <= 1e-12

    def test_analytic_value_off_grid(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        assert abs(eval_model(model, 5.0, 2.0) - 1.0 / 3.0) <= 1e-13
