import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from varmesh.exceptions import ContractError, ConvergenceError, InputError
from varmesh.spectral import dense_lowest, fix_signs, lowest_eigenpairs


def laplacian_1d(n, h):
    return sp.diags([np.ones(n - 1), -2 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format="csr") / h**2


def subspace_angle(U, V):
    return float(np.max(sla.subspace_angles(U, V)))


def test_uniform_dirichlet_lowest():
    h = 1 / 100
    L = laplacian_1d(99, h)
    r = lowest_eigenpairs(L, 3, method="lanczos")
    # most negative eigenvalues of L; the smallest of -L is 2(1-cos(pi/100))/h^2
    lam_min_neg = (2 - 2 * np.cos(np.pi / 100)) / h**2
    res = lowest_eigenpairs(-L, 1, method="lanczos")
    assert res.values[0] == pytest.approx(lam_min_neg, rel=1e-9)
    expected_low = -(2 - 2 * np.cos(np.arange(99, 96, -1) * np.pi / 100)) / h**2
    np.testing.assert_allclose(r.values, expected_low, rtol=1e-9)


def test_diagonal_matrix():
    D = sp.diags(np.arange(1.0, 21.0), format="csr")
    for method in ("lanczos", "dense"):
        r = lowest_eigenpairs(D, 3, method=method)
        np.testing.assert_allclose(r.values, [1, 2, 3], rtol=1e-12)
        np.testing.assert_allclose(np.abs(r.vectors), np.eye(20)[:, :3], atol=1e-8)
        assert np.all(r.vectors[np.arange(3), np.arange(3)] > 0)


def test_degenerate_diagonal_recovers_multiplicity():
    d = np.concatenate([[1, 2, 2, 3, 3, 3], np.linspace(4, 50, 300)])
    r = lowest_eigenpairs(sp.diags(d, format="csr"), 6, method="lanczos")
    np.testing.assert_allclose(r.values, [1, 2, 2, 3, 3, 3], rtol=1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_lanczos_vs_dense_random(seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((300, 300))
    M = M + M.T
    k = 5
    lz = lowest_eigenpairs(M, k, method="lanczos", seed=seed)
    de = dense_lowest(M, k)
    scale = np.abs(de.values).max()
    assert np.max(np.abs(lz.values - de.values)) <= 1e-9 * scale
    for i in range(k):
        assert subspace_angle(lz.vectors[:, [i]], de.vectors[:, [i]]) <= 1e-6
    assert np.max(np.abs(lz.vectors.T @ lz.vectors - np.eye(k))) <= 1e-8
    assert np.all(lz.residuals <= 1e-9 * np.abs(np.linalg.eigvalsh(M)).max() * 10)


def test_deterministic_given_seed():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((150, 150))
    M = M + M.T
    a = lowest_eigenpairs(M, 4, method="lanczos", seed=3)
    b = lowest_eigenpairs(M, 4, method="lanczos", seed=3)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.vectors, b.vectors)


def test_values_ascending_and_signs():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((80, 80))
    r = lowest_eigenpairs(M + M.T, 6, method="lanczos")
    assert np.all(np.diff(r.values) >= 0)
    idx = np.argmax(np.abs(r.vectors), axis=0)
    assert np.all(r.vectors[idx, np.arange(6)] > 0)


def test_non_symmetric_rejected():
    A = sp.csr_matrix(np.array([[1.0, 2.0, 0, 0], [0.0, 1.0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    with pytest.raises(ContractError):
        lowest_eigenpairs(A, 1)


@pytest.mark.parametrize("k", [0, 9, 2.5])
def test_k_bounds(k):
    with pytest.raises(InputError):
        lowest_eigenpairs(sp.identity(10, format="csr"), k)


def test_budget_exhaustion_reports_partial():
    L = laplacian_1d(400, 1.0)
    with pytest.raises(ConvergenceError) as info:
        lowest_eigenpairs(L, 2, method="lanczos", max_matvec=15)
    assert info.value.partial is not None
    assert info.value.partial.converged is False


def test_fix_signs():
    V = np.array([[0.1, -0.9], [-0.8, 0.2]])
    np.testing.assert_array_equal(fix_signs(V), [[-0.1, 0.9], [0.8, -0.2]])
