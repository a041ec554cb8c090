import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

import twodiscord as td
from twodiscord import OptimizerConfig
from twodiscord.optimize import (
    _skew_from_params,
    off_diagonal_coords,
    pattern_search_multistart,
    sphere_grid,
)


class TestParametrization:
    def test_zero_params_identity(self):
        np.testing.assert_allclose(td.unitary_from_params(np.zeros(4), 2), np.eye(2), atol=0)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_unitarity(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 5))
        u = td.unitary_from_params(rng.uniform(-3, 3, n * n), n)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(n), atol=1e-12)

    def test_first_order_expansion(self):
        n, eps = 3, 1e-6
        params = np.full(n * n, eps)
        u = td.unitary_from_params(params, n)
        k = _skew_from_params(params[None], n)[0]
        assert np.max(np.abs(u - np.eye(n) - k)) < 10 * eps**2

    def test_matches_scipy_expm(self):
        rng = np.random.default_rng(1)
        params = rng.uniform(-2, 2, 16)
        k = _skew_from_params(params[None], 4)[0]
        np.testing.assert_allclose(
            td.unitary_from_params(params, 4), scipy.linalg.expm(k), atol=1e-13
        )

    def test_round_trip_through_log(self):
        rng = np.random.default_rng(2)
        u = td.unitary_from_params(rng.uniform(-1, 1, 9), 3)
        back = td.unitary_from_params(td.params_from_unitary(u), 3)
        np.testing.assert_allclose(back, u, atol=1e-10)

    def test_wrong_length_rejected(self):
        with pytest.raises(td.DomainError):
            td.unitary_from_params(np.zeros(5), 2)

    def test_off_diagonal_coords_are_gauge_free(self):
        # perturbing only the diagonal phases must leave every projector fixed
        rng = np.random.default_rng(3)
        params = rng.uniform(-1, 1, 9)
        shifted = params.copy()
        shifted[len(off_diagonal_coords(3)):] += 0.7
        u1 = td.unitary_from_params(params, 3)
        u2 = td.unitary_from_params(shifted, 3)
        p1 = np.einsum("ao,co->oac", u1.conj(), u1)
        p2 = np.einsum("ao,co->oac", u2.conj(), u2)
        np.testing.assert_allclose(p1, p2, atol=1e-12)


class TestConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert cfg.restarts == 64 and cfg.max_iterations == 500
        assert cfg.step_tolerance == 1e-10 and cfg.value_tolerance == 1e-12

    @pytest.mark.parametrize(
        "kwargs", [dict(restarts=0), dict(max_iterations=0), dict(step_tolerance=0.0),
                   dict(value_tolerance=-1.0)]
    )
    def test_validation(self, kwargs):
        with pytest.raises(td.DomainError):
            OptimizerConfig(**kwargs)


class TestPatternSearch:
    def test_constant_objective(self):
        res = pattern_search_multistart(
            lambda block: np.full(block.shape[0], 3.25), 4,
            OptimizerConfig(restarts=4, seed=0),
        )
        assert res.best_value == 3.25
        assert res.converged

    def test_concave_quadratic(self):
        target = np.array([0.4, -0.9, 1.3])

        def batch(block):
            return -np.sum((block - target) ** 2, axis=1)

        res = pattern_search_multistart(batch, 3, OptimizerConfig(restarts=8, seed=0))
        np.testing.assert_allclose(res.best_params, target, atol=1e-5)

    def test_deterministic_given_seed(self):
        def batch(block):
            return np.sin(block).sum(axis=1)

        r1 = pattern_search_multistart(batch, 2, OptimizerConfig(restarts=6, seed=3))
        r2 = pattern_search_multistart(batch, 2, OptimizerConfig(restarts=6, seed=3))
        assert r1.best_value == r2.best_value
        assert np.array_equal(r1.best_params, r2.best_params)

    def test_warm_start_wins_tie_break(self):
        # a warm start sitting on the optimum occupies the lowest index, so it
        # must be the reported winner
        def batch(block):
            return -np.sum(block**2, axis=1)

        res = pattern_search_multistart(
            batch, 2, OptimizerConfig(restarts=4, seed=0), warm_starts=[np.zeros(2)]
        )
        assert res.best_value == 0.0
        np.testing.assert_array_equal(res.best_params, np.zeros(2))


class TestMaximizeOverProductBases:
    def test_bell_dephased_purity(self):
        bell = td.bell_state()

        def objective(m):
            return td.dephased_purity(bell, m)

        res = td.maximize_over_product_bases(objective, (2, 2),
                                             OptimizerConfig(restarts=6, seed=0))
        assert res.best_value == pytest.approx(0.5, abs=1e-8)

    def test_werner3_matches_closed_form(self):
        w = td.werner(3, 1.0)

        def objective(m):
            return td.dephased_purity(w, m)

        res = td.maximize_over_product_bases(
            objective, (3, 3), OptimizerConfig(restarts=4, seed=0),
            warm_starts=[np.zeros(18)],
        )
        want = td.purity(w.rho) - td.werner_geo_closed(3, 1.0)
        assert res.best_value == pytest.approx(want, abs=1e-6)


class TestSphereRoutines:
    def test_grid_shape_and_norms(self):
        pts = sphere_grid(8)
        assert pts.shape == (9 * 16, 3)
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
        assert any(np.allclose(p, [0, 0, 1]) for p in pts)

    def test_alternating_decoupled_maxima(self):
        b = td.TwoQubitBloch(np.array([0.0, 0.0, 0.9]), np.array([0.9, 0.0, 0.0]),
                             np.zeros((3, 3)))
        a, bv, value = td.alternating_sphere_max(b, OptimizerConfig(restarts=4, seed=0))
        assert value == pytest.approx(0.81 + 0.81, abs=1e-10)

    def test_alternating_bell_tensor(self):
        b = td.TwoQubitBloch(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))
        _, _, value = td.alternating_sphere_max(b, OptimizerConfig(restarts=4, seed=0))
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_oracle_trivial_zero(self):
        b = td.TwoQubitBloch(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
        assert td.sphere_grid_oracle(b, 16) == pytest.approx(0.0, abs=1e-15)

    def test_oracle_resolution_monotone_toward_one(self):
        b = td.TwoQubitBloch(np.zeros(3), np.zeros(3), 0.99 * np.diag([1.0, -1.0, 1.0]))
        vals = [td.sphere_grid_oracle(b, r) for r in (50, 100, 200)]
        assert vals[0] <= vals[1] + 1e-12 <= vals[2] + 2e-12
        assert vals[2] <= 0.99**2 + 1e-12

    def test_oracle_certifies_alternating(self):
        rng = np.random.default_rng(4)
        for seed in range(3):
            st = td.random_state(2, 2, rank=4, seed=seed)
            b = td.to_bloch(st)
            _, _, alt = td.alternating_sphere_max(b, OptimizerConfig(restarts=8, seed=0))
            grid = td.sphere_grid_oracle(b, 200)
            assert alt == pytest.approx(grid, abs=1e-4)

    def test_oracle_rejects_tiny_resolution(self):
        b = td.TwoQubitBloch(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
        with pytest.raises(td.DomainError):
            td.sphere_grid_oracle(b, 4)
