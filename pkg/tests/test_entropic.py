import numpy as np
import pytest

import twodiscord as td
from twodiscord import OptimizerConfig
from twodiscord.verification import (
    entropic_oracle_two_qubit,
    random_basis,
    random_bipartite,
    random_classical_classical,
    random_product_measurement,
    random_product_state,
)

CFG = OptimizerConfig(restarts=16, seed=0)


def shannon_oracle(probs):
    probs = np.asarray(probs, dtype=float)
    probs = probs[probs > 1e-14]
    return float(-np.sum(probs * np.log2(probs)))


class TestEntropy:
    def test_maximally_mixed(self):
        assert td.entropy(td.DensityMatrix(np.eye(2) / 2)) == pytest.approx(1.0)

    def test_pure(self):
        assert td.entropy(td.bell_state().rho) == pytest.approx(0.0, abs=1e-12)

    def test_frozen_value(self):
        got = td.entropy(td.DensityMatrix(np.diag([0.75, 0.25])))
        assert got == pytest.approx(0.8112781244591328, abs=1e-14)

    def test_matches_shannon_oracle_on_random_spectra(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = rng.dirichlet(np.ones(6))
            got = td.entropy(td.DensityMatrix(np.diag(p)))
            assert got == pytest.approx(shannon_oracle(p), abs=1e-12)

    def test_basis_invariant(self):
        rng = np.random.default_rng(1)
        p = rng.dirichlet(np.ones(4))
        u = random_basis(rng, 4).vectors
        rotated = td.DensityMatrix((u * p) @ u.conj().T)
        assert td.entropy(rotated) == pytest.approx(shannon_oracle(p), abs=1e-12)


class TestMutualInformation:
    def test_product_state_zero(self):
        rng = np.random.default_rng(2)
        assert td.mutual_information(random_product_state(rng, 2, 3)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_bell_is_two(self):
        assert td.mutual_information(td.bell_state()) == pytest.approx(2.0, abs=1e-12)

    def test_classically_correlated_is_one(self):
        st = td.make_bipartite(np.diag([0.5, 0, 0, 0.5]), 2, 2)
        assert td.mutual_information(st) == pytest.approx(1.0, abs=1e-12)


class TestMeasuredLoss:
    def test_cc_state_in_own_bases(self):
        rng = np.random.default_rng(3)
        ba, bb = random_basis(rng, 2), random_basis(rng, 2)
        p = rng.dirichlet(np.ones(4)).reshape(2, 2)
        st = td.classical_classical(p, ba, bb)
        m = td.ProductMeasurement(ba, bb)
        assert td.measured_loss_two_sided(st, m) == pytest.approx(0.0, abs=1e-12)

    def test_bell_computational(self):
        m = td.ProductMeasurement(td.computational_basis(2), td.computational_basis(2))
        assert td.measured_loss_two_sided(td.bell_state(), m) == pytest.approx(1.0, abs=1e-12)

    def test_product_state_any_bases(self):
        rng = np.random.default_rng(4)
        st = random_product_state(rng, 2, 2)
        m = random_product_measurement(rng, 2, 2)
        assert abs(td.measured_loss_two_sided(st, m)) <= 1e-9

    def test_split_bell(self):
        # the A-side dephasing already classicalizes the Bell state, the
        # B-side step is then free
        m = td.ProductMeasurement(td.computational_basis(2), td.computational_basis(2))
        la, lb = td.loss_split(td.bell_state(), m)
        assert la == pytest.approx(1.0, abs=1e-12)
        assert lb == pytest.approx(0.0, abs=1e-12)

    def test_split_components_nonnegative_and_sum(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            st = random_bipartite(rng, 2, 3, rank=int(rng.integers(1, 7)))
            m = random_product_measurement(rng, 2, 3)
            la, lb = td.loss_split(st, m)
            assert la >= -1e-9 and lb >= -1e-9
            assert la + lb == pytest.approx(td.measured_loss_two_sided(st, m), abs=1e-9)


class TestDiscordOneSided:
    def test_classical_state_side_a(self):
        # sum_a p_a |a><a| x rho_a has zero A-discord
        rng = np.random.default_rng(6)
        from twodiscord.verification import random_density

        blocks = [random_density(rng, 2).entries for _ in range(2)]
        rho = np.zeros((4, 4), dtype=complex)
        p = [0.4, 0.6]
        for a in range(2):
            rho[2 * a : 2 * a + 2, 2 * a : 2 * a + 2] = p[a] * blocks[a]
        st = td.make_bipartite(rho, 2, 2)
        assert td.discord_one_sided(st, "A", CFG).value <= 1e-6

    def test_bell(self):
        assert td.discord_one_sided(td.bell_state(), "A", CFG).value == pytest.approx(
            1.0, abs=1e-4
        )

    def test_product(self):
        rng = np.random.default_rng(7)
        st = random_product_state(rng, 2, 2)
        assert abs(td.discord_one_sided(st, "B", CFG).value) <= 1e-6

    def test_bad_side(self):
        with pytest.raises(td.DomainError):
            td.discord_one_sided(td.bell_state(), "C", CFG)


class TestDiscordTwoSided:
    def test_classical_classical(self):
        rng = np.random.default_rng(8)
        st = random_classical_classical(rng, 2, 2)
        assert td.discord_two_sided(st, CFG).value <= 1e-6

    def test_bell(self):
        assert td.discord_two_sided(td.bell_state(), CFG).value == pytest.approx(
            1.0, abs=1e-4
        )

    def test_product(self):
        rng = np.random.default_rng(9)
        st = random_product_state(rng, 2, 2)
        assert abs(td.discord_two_sided(st, CFG).value) <= 1e-6

    def test_never_below_grid_oracle(self):
        # the optimizer searches a superset of the oracle's grid pairs, so its
        # retained mutual information can only be larger
        rng = np.random.default_rng(10)
        for _ in range(3):
            st = random_bipartite(rng, 2, 2, rank=int(rng.integers(1, 5)))
            opt = td.discord_two_sided(st, CFG).value
            oracle = entropic_oracle_two_qubit(st, resolution=48)
            assert opt <= oracle + 1e-9
            assert opt == pytest.approx(oracle, abs=5e-3)

    def test_report_fields(self):
        res = td.discord_two_sided(td.bell_state(), CFG)
        assert isinstance(res.optimal_measurement, td.ProductMeasurement)
        assert res.optimizer_report.restarts_run >= CFG.restarts
