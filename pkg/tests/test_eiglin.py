import numpy as np
import pytest

from schrodeig.eiglin import (
    DenseSymMatrix,
    NotPositiveDefiniteError,
    Spectrum,
    SymBandedMatrix,
    nullspace,
    reduce_constrained_gevp,
    solve_gevp,
)
from schrodeig.validate import run_suite


class TestContainers:
    def test_banded_roundtrip(self):
        mat = SymBandedMatrix(np.array([2.0, 3.0, 4.0]), (np.array([1.0, -1.0]),))
        dense = mat.to_dense()
        assert np.allclose(dense, dense.T)
        again = SymBandedMatrix.from_dense(dense, 1)
        assert np.allclose(again.to_dense(), dense)

    def test_band_form_layout(self):
        mat = SymBandedMatrix(np.array([5.0, 6.0, 7.0, 8.0]),
                              (np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.25])))
        ab = mat.band_form()
        assert ab.shape == (3, 4)
        assert np.allclose(ab[2], [5, 6, 7, 8])
        assert np.allclose(ab[1][1:], [1, 2, 3])
        assert np.allclose(ab[0][2:], [0.5, 0.25])

    def test_from_dense_rejects_stray_entries(self):
        dense = np.diag([1.0, 2.0, 3.0])
        dense[0, 2] = dense[2, 0] = 0.1
        with pytest.raises(ValueError):
            SymBandedMatrix.from_dense(dense, 1)

    def test_dense_requires_symmetry(self):
        with pytest.raises(ValueError):
            DenseSymMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_spectrum_grouping(self):
        spec = Spectrum(np.array([1.0, 2.0, 2.0 + 1e-12, 5.0]))
        assert spec.multiplicities.tolist() == [1, 2, 1]
        assert np.allclose(spec.eigenvalues, [1.0, 2.0, 5.0])


class TestSolveGevp:
    def test_identity_mass(self):
        spec = solve_gevp(np.diag([2.0, 6.0]), np.eye(2))
        assert np.allclose(spec.values, [2.0, 6.0])

    def test_scalar(self):
        spec = solve_gevp(np.array([[2.0]]), np.array([[4.0]]))
        assert spec.values[0] == pytest.approx(0.5, rel=1e-15)

    def test_random_pencil_oracle_suite(self):
        results = run_suite("eiglin", seed=0)
        for r in results:
            assert r.passed, r.line()

    def test_banded_path_matches_dense(self):
        rng = np.random.default_rng(8)
        n = 40
        adiag = rng.uniform(1.0, 10.0, n)
        bdiag = rng.uniform(1.0, 2.0, n)
        boff = rng.uniform(-0.3, 0.3, n - 1)
        A = SymBandedMatrix(adiag)
        B = SymBandedMatrix(bdiag, (boff,))
        fast = solve_gevp(A, B, 7)
        slow = solve_gevp(A.to_dense(), B.to_dense(), 7)
        assert np.allclose(fast.values, slow.values, rtol=1e-12)

    def test_eigen_residuals_with_vectors(self):
        rng = np.random.default_rng(4)
        n = 25
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        A = Q @ np.diag(rng.uniform(1, 30, n)) @ Q.T
        A = 0.5 * (A + A.T)
        L = 0.1 * np.tril(rng.standard_normal((n, n)), -1) + np.diag(rng.uniform(1, 2, n))
        B = L @ L.T
        spec, X = solve_gevp(A, B, 5, vectors=True)
        for i, lam in enumerate(spec.values):
            res = np.linalg.norm(A @ X[:, i] - lam * B @ X[:, i])
            assert res <= 1e-9 * np.linalg.norm(A)

    def test_scaling_invariance(self):
        rng = np.random.default_rng(9)
        n = 20
        A = rng.standard_normal((n, n))
        A = A @ A.T + n * np.eye(n)
        L = 0.2 * np.tril(rng.standard_normal((n, n)), -1) + np.eye(n)
        B = L @ L.T
        S = np.diag(rng.uniform(0.01, 100.0, n))
        base = solve_gevp(A, B, 6).values
        scaled = solve_gevp(S @ A @ S, S @ B @ S, 6).values
        assert np.abs(scaled / base - 1).max() < 1e-10

    def test_indefinite_mass_reports_pivot(self):
        B = np.diag([1.0, -1.0, 2.0])
        with pytest.raises(NotPositiveDefiniteError) as info:
            solve_gevp(np.eye(3), B)
        assert info.value.pivot_index == 1

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            solve_gevp(np.eye(3), np.eye(2))


class TestNullspace:
    def test_single_row(self):
        Z = nullspace(np.array([[1.0, 1.0]]))
        assert Z.shape == (2, 1)
        assert abs(abs(Z[0, 0]) - 1 / np.sqrt(2)) < 1e-14
        assert abs(Z[0, 0] + Z[1, 0]) < 1e-14

    def test_zero_matrix_gives_identity(self):
        Z = nullspace(np.zeros((2, 3)))
        assert np.allclose(Z, np.eye(3))

    def test_random_rank(self):
        rng = np.random.default_rng(1)
        C = rng.standard_normal((8, 20))
        Z = nullspace(C)
        assert Z.shape == (20, 12)
        assert np.abs(C @ Z).max() < 1e-12
        assert np.allclose(Z.T @ Z, np.eye(12), atol=1e-13)

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            nullspace(np.eye(2), tol=0.0)


class TestConstrainedReduction:
    def test_empty_constraints_match_plain_solve(self):
        A = np.diag([1.0, 2.0, 3.0])
        B = np.eye(3)
        spec = reduce_constrained_gevp(A, B, None, 3)
        assert np.allclose(spec.values, [1, 2, 3])
        spec = reduce_constrained_gevp(A, B, np.zeros((0, 3)), 3)
        assert np.allclose(spec.values, [1, 2, 3])

    def test_constraint_removes_axis(self):
        A = np.diag([1.0, 2.0, 3.0])
        spec = reduce_constrained_gevp(A, np.eye(3), np.array([[0.0, 0.0, 1.0]]), 2)
        assert np.allclose(spec.values, [1.0, 2.0])

    def test_two_element_toy_matches_conforming(self):
        # two linear elements on (0,1), h = 1/2, with a mortar tie at 1/2
        A = np.diag([2.0, 2.0])
        M = np.diag([1 / 6, 1 / 6])
        C = np.array([[1.0, -1.0]])
        broken = reduce_constrained_gevp(A, M, C, 1)
        conforming = solve_gevp(np.array([[4.0]]), np.array([[1 / 3]]), 1)
        assert broken.values[0] == pytest.approx(conforming.values[0], abs=1e-12)

    def test_redundant_constraints_idempotent(self):
        rng = np.random.default_rng(6)
        n = 12
        A = rng.standard_normal((n, n))
        A = A @ A.T + n * np.eye(n)
        B = np.eye(n)
        C = rng.standard_normal((3, n))
        base = reduce_constrained_gevp(A, B, C, 4).values
        doubled = reduce_constrained_gevp(A, B, np.vstack([C, C[1]]), 4).values
        assert np.abs(doubled / base - 1).max() < 1e-10
