import numpy as np
import pytest

from gcgames import linalg


def quadratic_eigenvalues(m):
    """Closed-form eigenvalues of a symmetric 2x2, ascending."""
    a, b, c = m[0, 0], m[0, 1], m[1, 1]
    mean = 0.5 * (a + c)
    disc = np.sqrt(0.25 * (a - c) ** 2 + b * b)
    return np.array([mean - disc, mean + disc])


class TestSymEigendecompose:
    def test_identity(self):
        w, v = linalg.sym_eigendecompose(np.eye(2))
        assert np.allclose(w, [1.0, 1.0])
        assert np.allclose(v @ v.T, np.eye(2), atol=1e-12)

    def test_diagonal_negative(self):
        w, _ = linalg.sym_eigendecompose(np.diag([-2.0, -2.0]))
        assert np.allclose(w, [-2.0, -2.0])

    def test_symmetrized_transition_matrix_against_closed_form(self):
        m = linalg.symmetrize(np.array([[0.0, 0.16], [0.699, 1.0]]))
        w, v = linalg.sym_eigendecompose(m)
        assert np.allclose(w, quadratic_eigenvalues(m), atol=1e-12)
        recon = v @ np.diag(w) @ v.T
        assert np.linalg.norm(recon - m) <= 1e-10 * (1 + np.linalg.norm(m))

    def test_reconstruction_and_orthogonality_random(self):
        rng = np.random.default_rng(7)
        for n in (1, 2, 3, 5, 8):
            for _ in range(20):
                m = linalg.symmetrize(rng.normal(size=(n, n)))
                w, v = linalg.sym_eigendecompose(m)
                assert np.all(np.diff(w) >= 0)
                err = np.linalg.norm(v @ np.diag(w) @ v.T - m, "fro")
                assert err <= 1e-10 * (1 + np.linalg.norm(m, "fro"))
                gram = v.T @ v - np.eye(n)
                assert np.abs(gram).max() <= 1e-9

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            linalg.sym_eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestDefiniteness:
    def test_negative_definite_cases(self):
        assert linalg.is_negative_definite(np.diag([-2.0, -2.0]), margin=0.0)
        assert not linalg.is_negative_definite(np.zeros((2, 2)), margin=0.0)
        assert not linalg.is_negative_definite(np.diag([-1.0, 1.0]), margin=0.0)

    def test_margin_semantics(self):
        m = np.diag([-1.0, -0.5])
        assert linalg.is_negative_definite(m, margin=0.4)
        assert not linalg.is_negative_definite(m, margin=0.6)

    def test_never_both_definite(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            m = linalg.symmetrize(rng.normal(size=(3, 3)))
            both = (linalg.is_negative_definite(m, 0.0)
                    and linalg.is_negative_definite(-m, 0.0))
            assert not both

    def test_margin_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            linalg.is_negative_definite(np.eye(2), margin=-1.0)


class TestSolveLinear:
    def test_identity(self):
        b = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.allclose(linalg.solve_linear(np.eye(2), b), b)

    def test_diagonal(self):
        x = linalg.solve_linear(np.diag([2.0, 4.0]), np.array([[2.0], [4.0]]))
        assert np.allclose(x, [[1.0], [1.0]])

    def test_residual_on_random_well_conditioned(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            a = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
            b = rng.normal(size=(4, 2))
            x = linalg.solve_linear(a, b)
            res = np.linalg.norm(a @ x - b, "fro")
            assert res <= 1e-9 * (1 + np.linalg.norm(b, "fro"))

    def test_singular_raises_with_condition_estimate(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(linalg.SingularMatrixError) as excinfo:
            linalg.solve_linear(a, np.eye(2))
        assert excinfo.value.cond > 1e10


class TestSpectralRadius:
    def test_open_loop_transition_matrix(self):
        a = np.array([[0.0, 0.16], [0.699, 1.0]])
        # companion-polynomial oracle: lambda^2 - lambda - 0.16*0.699 = 0
        disc = np.sqrt(1.0 + 4.0 * 0.16 * 0.699)
        oracle = max(abs(1.0 + disc), abs(1.0 - disc)) / 2.0
        assert abs(linalg.spectral_radius(a) - oracle) <= 1e-8

    def test_zero_matrix(self):
        assert linalg.spectral_radius(np.zeros((3, 3))) == 0.0

    def test_diagonal(self):
        assert np.isclose(linalg.spectral_radius(np.diag([0.5, -0.9])), 0.9)

    def test_transpose_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            a = rng.normal(size=(4, 4))
            assert abs(linalg.spectral_radius(a)
                       - linalg.spectral_radius(a.T)) <= 1e-9


class TestInvertSpd:
    def test_identity(self):
        assert np.allclose(linalg.invert_spd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        inv = linalg.invert_spd(np.diag([2.0, 4.0]))
        assert np.allclose(inv, np.diag([0.5, 0.25]))

    def test_random_spd_product_is_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            a = rng.normal(size=(3, 3))
            m = a.T @ a + np.eye(3)
            inv = linalg.invert_spd(m)
            err = np.linalg.norm(m @ inv - np.eye(3), "fro")
            assert err <= 1e-9 * 3

    def test_not_positive_definite_raises(self):
        with pytest.raises(linalg.NotPositiveDefiniteError):
            linalg.invert_spd(np.diag([1.0, -1.0]))
        with pytest.raises(linalg.NotPositiveDefiniteError):
            linalg.invert_spd(np.diag([1.0, 0.0]))


class TestPacking:
    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for n in (1, 2, 4, 6):
            m = linalg.symmetrize(rng.normal(size=(n, n)))
            assert np.array_equal(linalg.unpack_upper(linalg.pack_upper(m), n), m)

    def test_pack_order(self):
        m = np.array([[1.0, 2.0], [2.0, 3.0]])
        assert np.array_equal(linalg.pack_upper(m), [1.0, 2.0, 3.0])
