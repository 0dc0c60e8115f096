"""CSR storage, matrix-vector product, CG, and the direct factorization."""

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp

from homsolve import (
    FactorizationError,
    SparseSpd,
    cg_solve,
    direct_solve,
    spmv,
)
from homsolve.sparse import solve
from conftest import random_spd, small_system


def laplacian_1d(n: int) -> SparseSpd:
    main = 2.0 * np.ones(n)
    off = -np.ones(n - 1)
    return SparseSpd.from_scipy(sp.diags([off, main, off], [-1, 0, 1]).tocsr())


def test_roundtrip_scipy():
    dense, A = random_spd(20, np.random.default_rng(0))
    np.testing.assert_allclose(A.to_scipy().toarray(), dense)
    assert A.n == 20
    assert A.nnz == A.to_scipy().nnz
    np.testing.assert_allclose(A.diagonal(), np.diag(dense))


def test_spmv_matches_dense(rng):
    dense, A = random_spd(40, rng)
    x = rng.standard_normal(40)
    np.testing.assert_allclose(spmv(A, x), dense @ x, rtol=1e-13)


def test_spmv_identity():
    A = SparseSpd.from_scipy(sp.eye(7).tocsr())
    x = np.arange(7.0)
    np.testing.assert_array_equal(spmv(A, x), x)


def test_spmv_rejects_wrong_size():
    A = laplacian_1d(5)
    with pytest.raises(ValueError):
        spmv(A, np.zeros(4))


def test_cg_zero_rhs():
    A = laplacian_1d(10)
    x, report = cg_solve(A, np.zeros(10))
    np.testing.assert_array_equal(x, np.zeros(10))
    assert report.iterations == 0
    assert report.converged


def test_cg_identity_one_iteration():
    A = SparseSpd.from_scipy(sp.eye(6).tocsr())
    b = np.arange(1.0, 7.0)
    x, report = cg_solve(A, b)
    np.testing.assert_allclose(x, b, rtol=1e-12)
    assert report.iterations == 1


def test_cg_matches_cholesky_oracle(rng):
    dense, A = random_spd(50, rng)
    b = rng.standard_normal(50)
    c, low = scipy.linalg.cho_factor(dense)
    x_ref = scipy.linalg.cho_solve((c, low), b)
    x, report = cg_solve(A, b, tol=1e-13)
    assert report.converged
    np.testing.assert_allclose(x, x_ref, rtol=1e-8, atol=1e-10)


@pytest.mark.parametrize("precond", [None, "jacobi", "amg"])
def test_preconditioned_cg_agrees(precond, rng):
    A = laplacian_1d(80)
    b = rng.standard_normal(80)
    x_ref = direct_solve(A, b)
    x, report = cg_solve(A, b, tol=1e-12, precond=precond)
    assert report.converged
    assert report.final_residual <= 1e-12
    np.testing.assert_allclose(x, x_ref, rtol=1e-7, atol=1e-9)


def test_cg_report_residual_consistent(rng):
    A = laplacian_1d(30)
    b = rng.standard_normal(30)
    x, report = cg_solve(A, b, tol=1e-10)
    res = np.linalg.norm(b - A.to_scipy() @ x) / np.linalg.norm(b)
    assert report.converged
    assert res <= 1e-10


def test_cg_nonconvergence_reported():
    A = laplacian_1d(200)
    b = np.ones(200)
    x, report = cg_solve(A, b, tol=1e-14, max_iter=3)
    assert not report.converged
    assert report.final_residual > 1e-14


def test_cg_permutation_equivariance(rng):
    dense, A = random_spd(30, rng)
    b = rng.standard_normal(30)
    perm = rng.permutation(30)
    P = sp.csr_matrix((np.ones(30), (np.arange(30), perm)), shape=(30, 30))
    Ap = SparseSpd.from_scipy(P @ A.to_scipy() @ P.T)
    x, _ = cg_solve(A, b, tol=1e-13)
    xp, _ = cg_solve(Ap, P @ b, tol=1e-13)
    np.testing.assert_allclose(xp, P @ x, rtol=1e-7, atol=1e-10)


def test_direct_solve_diagonal():
    A = SparseSpd.from_scipy(sp.diags([1.0, 2.0, 4.0]).tocsr())
    x = direct_solve(A, np.array([1.0, 1.0, 1.0]))
    np.testing.assert_allclose(x, [1.0, 0.5, 0.25])


def test_direct_factor_cached():
    A = laplacian_1d(20)
    direct_solve(A, np.ones(20))
    factor = A._factor
    assert factor is not None
    direct_solve(A, np.zeros(20))
    assert A._factor is factor


def test_direct_vs_cg_on_checkerboard_system():
    system = small_system(r=20, k=1, seed=0)
    b = system.F
    x_dir = direct_solve(system.A_het, b)
    x_cg, report = cg_solve(system.A_het, b, tol=1e-12)
    assert report.converged
    denom = np.linalg.norm(x_dir)
    assert np.linalg.norm(x_cg - x_dir) / denom <= 1e-9


def test_direct_solve_singular_raises():
    A = SparseSpd.from_scipy(sp.csr_matrix((3, 3)))
    with pytest.raises(FactorizationError):
        direct_solve(A, np.ones(3))


def test_solve_dispatch(rng):
    A = laplacian_1d(25)
    b = rng.standard_normal(25)
    x_ref = direct_solve(A, b)
    for method in ("direct", "cg", "cg-jacobi", "amg"):
        x, report = solve(A, b, method=method, tol=1e-12)
        assert report.converged
        np.testing.assert_allclose(x, x_ref, rtol=1e-7, atol=1e-9)
    with pytest.raises(ValueError):
        solve(A, b, method="gauss-seidel")


def test_argument_validation():
    A = laplacian_1d(5)
    with pytest.raises(ValueError):
        cg_solve(A, np.zeros(4))
    with pytest.raises(ValueError):
        cg_solve(A, np.zeros(5), tol=0.0)
    with pytest.raises(ValueError):
        cg_solve(A, np.zeros(5), max_iter=0)
    with pytest.raises(ValueError):
        direct_solve(A, np.zeros(6))
