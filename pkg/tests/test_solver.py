"""Tests for the offline/online solver, residuals, scalar probe, and
model persistence."""

import warnings

import numpy as np
import pytest

from pnlevp.contour import Disk, default_sampling
from pnlevp.errors import EvaluationError, ModelFormatError
from pnlevp.paaa import eval_model, paaa_fit
from pnlevp.problems import (LinearDemoProblem, PNlevpProblem,
                             SyntheticRationalProblem)
from pnlevp.solver import (EigenSolution, load_model, offline, online,
                           residuals, save_model, scalar_probe_eigenvalues)


@pytest.fixture(scope="module")
def linear1():
    """Offline model for the 3x3 linear problem on Disk(0, 0.6)."""
    problem = LinearDemoProblem()
    domain = Disk(0.0, 0.6)
    config = default_sampling(domain, 20, 40, (0.75, 1.25), seed=0,
                              dim=problem.dim)
    model = offline(problem, domain, config, 512)
    return problem, model


@pytest.fixture(scope="module")
def synthetic3():
    """Offline model for a synthetic rational problem with 3 poles."""
    domain = Disk(0.0, 1.0)
    problem = SyntheticRationalProblem.inside_domain(domain, 3, (0.0, 1.0),
                                                     seed=21)
    config = default_sampling(domain, 8, 12, (0.0, 1.0), seed=4,
                              dim=problem.dim)
    model = offline(problem, domain, config, 256)
    return problem, model


class TestOffline:
    def test_linear_demo_m2_converged(self, linear1):
        _, model = linear1
        assert model.m == 2
        assert model.metadata["converged"]
        assert len(model.scalar_model.z_nodes) >= 3
        assert len(model.left_models) == 20
        assert len(model.right_models) == 20

    def test_single_parameter_rejected(self):
        problem = LinearDemoProblem()
        domain = Disk(0.0, 0.6)
        config = default_sampling(domain, 4, 1, (1.0, 1.0), seed=0,
                                  dim=problem.dim)
        with pytest.raises(ValueError):
            offline(problem, domain, config, 64)

    def test_unknown_fit_option_rejected(self):
        problem = LinearDemoProblem()
        domain = Disk(0.0, 0.6)
        config = default_sampling(domain, 4, 4, (0.75, 1.25), seed=0,
                                  dim=problem.dim)
        with pytest.raises(ValueError):
            offline(problem, domain, config, 64, fit_opts={"bogus": 1})

    def test_nonconverged_fit_warns(self):
        problem = LinearDemoProblem()
        domain = Disk(0.0, 0.6)
        config = default_sampling(domain, 6, 6, (0.75, 1.25), seed=0,
                                  dim=problem.dim)
        with pytest.warns(UserWarning, match="did not reach tolerance"):
            model = offline(problem, domain, config, 32, fit_opts={"tol": 0.0})
        assert not model.metadata["converged"]

    def test_offline_online_consistency_on_grid(self, linear1):
        # the lifted vector models reproduce the probed samples on the
        # sampling grid to the fit tolerance
        from pnlevp.contour import build_trapezoid_rule, probe_samples

        problem, model = linear1
        config = model.config
        rule = build_trapezoid_rule(model.domain, model.metadata["N"])
        samples = probe_samples(problem, rule, config, model.domain)
        scale = np.max(np.abs(samples.left))
        tol = 100 * model.metadata["fit_tol"]
        rng = np.random.default_rng(0)
        for k in rng.choice(config.r, size=4, replace=False):
            for i in rng.choice(2 * config.r, size=6, replace=False):
                for j in rng.choice(config.q, size=6, replace=False):
                    got = eval_model(model.left_models[k],
                                     config.sample_points[i],
                                     config.parameter_points[j])
                    np.testing.assert_allclose(
                        got, samples.left[k, i, j], atol=tol * scale)


class TestOnline:
    def test_linear_demo_eigenvalues(self, linear1):
        problem, model = linear1
        sol = online(model, 0.75)
        got = np.sort_complex(sol.eigenvalues)
        np.testing.assert_allclose(got, [-0.5, 0.5], atol=1e-8)
        assert max(residuals(problem, sol)) <= 1e-10
        assert sol.in_domain.all()

    def test_defective_parameter(self, linear1):
        problem, model = linear1
        sol = online(model, 1.0)
        assert len(sol.eigenvalues) == 2
        np.testing.assert_allclose(sol.eigenvalues, 0.0, atol=1e-4)
        assert max(residuals(problem, sol)) <= 1e-8

    def test_exact_recovery_chain(self, synthetic3):
        problem, model = synthetic3
        rng = np.random.default_rng(9)
        for p_hat in rng.uniform(0.0, 1.0, size=50):
            sol = online(model, p_hat)
            truth = np.sort_complex(problem.eigenvalues_at(p_hat))
            got = np.sort_complex(sol.eigenvalues)
            assert len(got) == 3
            np.testing.assert_allclose(got, truth, atol=1e-8)

    def test_determinism(self, synthetic3):
        _, model = synthetic3
        a = online(model, 0.377)
        b = online(model, 0.377)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.V, b.V)
        np.testing.assert_array_equal(a.W, b.W)

    def test_sorted_output(self, synthetic3):
        _, model = synthetic3
        lam = online(model, 0.61).eigenvalues
        key = list(zip(lam.real, lam.imag))
        assert key == sorted(key)

    def test_extrapolation_warns(self, linear1):
        _, model = linear1
        with pytest.warns(UserWarning, match="outside the sampled range"):
            online(model, 5.0)

    def test_inside_range_does_not_warn(self, linear1):
        _, model = linear1
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            online(model, 1.1)


class TestResiduals:
    def test_exact_eigenpair_zero(self):
        problem = LinearDemoProblem()
        v = np.array([1.0, 0.5, -2.0], dtype=complex)
        sol = EigenSolution(
            p_hat=0.75, eigenvalues=np.array([0.5 + 0j]),
            V=v[:, None], W=v[:, None], in_domain=np.array([True]),
        )
        assert residuals(problem, sol)[0] <= 1e-14

    def test_random_vector_large_residual(self):
        problem = LinearDemoProblem()
        rng = np.random.default_rng(12)
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        sol = EigenSolution(
            p_hat=0.75, eigenvalues=np.array([0.123 + 0.3j]),
            V=v[:, None], W=v[:, None], in_domain=np.array([False]),
        )
        assert residuals(problem, sol)[0] > 1e-3

    def test_empty_solution_rejected(self):
        problem = LinearDemoProblem()
        sol = EigenSolution(
            p_hat=0.75, eigenvalues=np.array([], dtype=complex),
            V=np.zeros((3, 0)), W=np.zeros((3, 0)),
            in_domain=np.array([], dtype=bool),
        )
        with pytest.raises(ValueError):
            residuals(problem, sol)

    def test_zero_eigenvector_rejected(self):
        problem = LinearDemoProblem()
        sol = EigenSolution(
            p_hat=0.75, eigenvalues=np.array([0.5 + 0j]),
            V=np.zeros((3, 1)), W=np.zeros((3, 1)),
            in_domain=np.array([True]),
        )
        with pytest.raises(ValueError):
            residuals(problem, sol)


class TestScalarProbe:
    def test_moving_pole(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        poles = scalar_probe_eigenvalues(model, 0.3)
        assert len(poles) == 1
        assert abs(poles[0] - 0.3) <= 1e-12

    def test_parameter_on_node(self):
        s = np.linspace(1.0, 2.0, 10)
        p = np.linspace(4.0, 5.0, 10)
        D = 1.0 / (s[:, None] - p[None, :])
        model = paaa_fit(D, s, p)
        p_node = model.p_nodes[0]
        poles = scalar_probe_eigenvalues(model, p_node)
        assert abs(poles[0] - p_node) <= 1e-10

    def test_linear_demo_model(self, linear1):
        _, model = linear1
        poles = scalar_probe_eigenvalues(model, 0.75)
        inside = [z for z in poles if model.domain.contains(z)]
        got = np.sort_complex(np.array(inside))
        np.testing.assert_allclose(got, [-0.5, 0.5], atol=1e-8)

    def test_multiplicity_not_visible(self):
        # H(z, p) = I/(z - p): two coincident eigenvalues, but the scalar
        # probe sees a single pole at p_hat
        class ShiftIdentity(PNlevpProblem):
            dim = 2

            def eval(self, z, p):
                return (z - p) * np.eye(2, dtype=complex)

        problem = ShiftIdentity()
        domain = Disk(0.0, 0.5)
        config = default_sampling(domain, 6, 6, (0.0, 0.2), seed=1,
                                  dim=problem.dim)
        model = offline(problem, domain, config, 128)
        assert model.m == 2
        sol = online(model, 0.1)
        np.testing.assert_allclose(sol.eigenvalues, [0.1, 0.1], atol=1e-8)
        poles = scalar_probe_eigenvalues(model, 0.1)
        inside = [z for z in poles if domain.contains(z)]
        assert len(inside) == 1
        assert abs(inside[0] - 0.1) <= 1e-8


class TestPersistence:
    def test_round_trip_field_equality(self, linear1, tmp_path):
        _, model = linear1
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.m == model.m
        assert loaded.domain == model.domain
        np.testing.assert_array_equal(loaded.config.sample_points,
                                      model.config.sample_points)
        np.testing.assert_array_equal(loaded.config.parameter_points,
                                      model.config.parameter_points)
        np.testing.assert_array_equal(loaded.config.left_dirs,
                                      model.config.left_dirs)
        np.testing.assert_array_equal(loaded.config.right_dirs,
                                      model.config.right_dirs)
        np.testing.assert_array_equal(loaded.scalar_model.z_nodes,
                                      model.scalar_model.z_nodes)
        np.testing.assert_array_equal(loaded.scalar_model.p_nodes,
                                      model.scalar_model.p_nodes)
        np.testing.assert_array_equal(loaded.scalar_model.coeffs,
                                      model.scalar_model.coeffs)
        np.testing.assert_array_equal(loaded.scalar_model.node_values,
                                      model.scalar_model.node_values)
        for a, b in zip(loaded.left_models, model.left_models):
            np.testing.assert_array_equal(a.node_values, b.node_values)
        for a, b in zip(loaded.right_models, model.right_models):
            np.testing.assert_array_equal(a.node_values, b.node_values)
        assert loaded.metadata == model.metadata

    def test_truncated_file_rejected(self, linear1, tmp_path):
        _, model = linear1
        path = tmp_path / "model.json"
        save_model(model, path)
        text = path.read_text()
        path.write_text(text[: len(text) // 2])
        with pytest.raises(ModelFormatError):
            load_model(path)

    def test_version_mismatch_rejected(self, linear1, tmp_path):
        import json

        _, model = linear1
        path = tmp_path / "model.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        doc["format_version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelFormatError):
            load_model(path)

    def test_load_then_online_bit_exact(self, linear1, tmp_path):
        _, model = linear1
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        a = online(model, 0.87)
        b = online(loaded, 0.87)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.V, b.V)
        np.testing.assert_array_equal(a.W, b.W)
