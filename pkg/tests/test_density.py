import math

import numpy as np
import pytest

from critent import dimer
from critent.density import (
    make_density_matrix,
    mutual_information,
    partial_trace,
    random_density_matrix,
    relative_entropy,
    tensor_product,
    von_neumann_entropy,
)
from critent.errors import ValidationError


def singlet():
    psi = np.zeros(4)
    psi[1], psi[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    return make_density_matrix(np.outer(psi, psi), (2, 2))


class TestConstructor:
    def test_maximally_mixed(self):
        rho = make_density_matrix(np.eye(4) / 4, (2, 2))
        assert rho.dims == (2, 2)

    def test_rejects_negative_eigenvalue(self):
        bad = np.diag([0.6, 0.5, -0.1, 0.0])
        with pytest.raises(ValidationError, match="positive semidefinite"):
            make_density_matrix(bad, (2, 2))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="unit trace"):
            make_density_matrix(np.eye(4) / 3, (2, 2))

    def test_rejects_non_hermitian(self):
        m = np.eye(2) / 2
        m[0, 1] = 1e-3
        with pytest.raises(ValidationError, match="hermitian"):
            make_density_matrix(m, (2,))

    def test_rejects_dims_mismatch(self):
        with pytest.raises(ValidationError, match="dims"):
            make_density_matrix(np.eye(4) / 4, (2, 3))

    def test_clips_numerical_dust(self):
        m = np.diag([1.0 + 5e-13, -5e-13, 0.0, 0.0])
        rho = make_density_matrix(m, (2, 2))
        eig = np.linalg.eigvalsh(rho.matrix)
        assert eig[0] >= -1e-15
        assert abs(np.trace(rho.matrix) - 1) < 1e-14

    def test_accepts_dimer_thermal_state(self):
        rho = dimer.thermal_state(1.0)
        assert rho.dims == (2, 2)


class TestEntropy:
    def test_pure_state(self):
        psi = np.zeros(4)
        psi[0] = 1.0
        rho = make_density_matrix(np.outer(psi, psi), (2, 2))
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        rho = make_density_matrix(np.eye(4) / 4, (2, 2))
        assert von_neumann_entropy(rho) == pytest.approx(2.0, abs=1e-12)

    def test_dyadic_spectrum(self):
        rho = make_density_matrix(np.diag([0.5, 0.25, 0.25]), (3,))
        assert von_neumann_entropy(rho) == pytest.approx(1.5, abs=1e-12)

    def test_bounds_on_random_states(self):
        rng = np.random.default_rng(0)
        for dim in (2, 3, 4, 6):
            for _ in range(50):
                s = von_neumann_entropy(random_density_matrix(dim, rng))
                assert -1e-9 <= s <= math.log2(dim) + 1e-9


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(1)
        a = random_density_matrix(2, rng)
        b = random_density_matrix(3, rng)
        joint = tensor_product(a, b)
        assert np.max(np.abs(partial_trace(joint, {0}).matrix - a.matrix)) < 1e-12
        assert np.max(np.abs(partial_trace(joint, {1}).matrix - b.matrix)) < 1e-12

    def test_singlet_marginal_maximally_mixed(self):
        marg = partial_trace(singlet(), {0})
        assert np.max(np.abs(marg.matrix - np.eye(2) / 2)) < 1e-12

    def test_random_state_unit_trace(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            rho = random_density_matrix((2, 2), rng)
            assert abs(np.trace(partial_trace(rho, {1}).matrix) - 1) < 1e-12

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError):
            partial_trace(singlet(), set())

    def test_three_subsystems(self):
        rng = np.random.default_rng(3)
        rho = random_density_matrix((2, 2, 2), rng)
        reduced = partial_trace(rho, {0, 2})
        assert reduced.dims == (2, 2)
        again = partial_trace(reduced, {0})
        direct = partial_trace(rho, {0})
        assert np.max(np.abs(again.matrix - direct.matrix)) < 1e-12


class TestTensorProduct:
    def test_maximally_mixed(self):
        half = make_density_matrix(np.eye(2) / 2, (2,))
        joint = tensor_product(half, half)
        assert np.max(np.abs(joint.matrix - np.eye(4) / 4)) < 1e-14

    def test_pure_times_pure_is_pure(self):
        up = make_density_matrix(np.diag([1.0, 0.0]), (2,))
        assert von_neumann_entropy(tensor_product(up, up)) < 1e-12

    def test_entropy_additive(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a = random_density_matrix(2, rng)
            b = random_density_matrix(3, rng)
            total = von_neumann_entropy(tensor_product(a, b))
            assert total == pytest.approx(
                von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-10
            )


class TestMutualInformation:
    def test_singlet_two_bits(self):
        assert mutual_information(singlet()) == pytest.approx(2.0, abs=1e-12)

    def test_product_state_zero(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            rho = tensor_product(
                random_density_matrix(2, rng), random_density_matrix(2, rng)
            )
            assert 0 <= mutual_information(rho) < 1e-9

    def test_classical_correlated_one_bit(self):
        rho = make_density_matrix(np.diag([0.5, 0.0, 0.0, 0.5]), (2, 2))
        assert mutual_information(rho) == pytest.approx(1.0, abs=1e-12)

    def test_requires_bipartite(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ValueError):
            mutual_information(random_density_matrix((2, 2, 2), rng))

    def test_nonnegative_on_random_states(self):
        rng = np.random.default_rng(7)
        for dims in ((2, 2), (2, 3)):
            for _ in range(1000):
                assert mutual_information(random_density_matrix(dims, rng)) >= -1e-9

    def test_near_product_states_have_near_product_matrices(self):
        # converse of "product implies zero": MI below 1e-12 forces the
        # state to sit within 1e-5 (max norm) of its marginal product
        rng = np.random.default_rng(8)
        hits = 0
        for eps in np.geomspace(1e-9, 1e-3, 40):
            base = tensor_product(
                random_density_matrix(2, rng), random_density_matrix(2, rng)
            )
            perturb = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            perturb = (perturb + perturb.conj().T) / 2
            perturb -= np.trace(perturb) * np.eye(4) / 4
            matrix = base.matrix + eps * perturb
            if np.linalg.eigvalsh(matrix)[0] < 1e-12:
                continue
            rho = make_density_matrix(matrix, (2, 2))
            if mutual_information(rho) < 1e-12:
                hits += 1
                product = tensor_product(
                    partial_trace(rho, {0}), partial_trace(rho, {1})
                )
                assert np.max(np.abs(rho.matrix - product.matrix)) < 1e-5
        assert hits > 0


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            rho = random_density_matrix(3, rng)
            assert abs(relative_entropy(rho, rho)) < 1e-10

    def test_equals_mutual_information(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            rho = random_density_matrix((2, 2), rng)
            product = tensor_product(
                partial_trace(rho, {0}), partial_trace(rho, {1})
            )
            assert relative_entropy(rho, product) == pytest.approx(
                mutual_information(rho), abs=1e-9
            )

    def test_support_violation_is_infinite(self):
        mixed = make_density_matrix(np.eye(2) / 2, (2,))
        pure = make_density_matrix(np.diag([1.0, 0.0]), (2,))
        assert relative_entropy(mixed, pure) == math.inf

    def test_klein_inequality(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            rho = random_density_matrix(4, rng)
            sigma = random_density_matrix(4, rng)
            assert relative_entropy(rho, sigma) >= -1e-9

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(12)
        with pytest.raises(ValueError):
            relative_entropy(
                random_density_matrix(2, rng), random_density_matrix(3, rng)
            )
