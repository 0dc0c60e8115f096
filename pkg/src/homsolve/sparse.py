"""Sparse symmetric positive definite linear algebra.

CSR storage plus the three solvers the iteration needs: matrix-vector
product, conjugate gradient (optionally Jacobi- or AMG-preconditioned),
and an exact sparse factorization for reference solutions.  Factorized
operators are cached on the matrix so repeated solves with the same
matrix pay the factorization cost once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


class FactorizationError(RuntimeError):
    """Raised when the exact factorization of a non-SPD matrix breaks down."""


@dataclass
class SolveReport:
    iterations: int
    final_residual: float
    converged: bool


@dataclass
class SparseSpd:
    """Symmetric positive (semi)definite matrix in CSR layout."""

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    _scipy: sp.csr_matrix | None = field(default=None, repr=False, compare=False)
    _factor: object = field(default=None, repr=False, compare=False)

    @classmethod
    def from_scipy(cls, A) -> "SparseSpd":
        A = sp.csr_matrix(A)
        A.sort_indices()
        return cls(
            n=A.shape[0],
            row_ptr=A.indptr,
            col_idx=A.indices,
            values=A.data,
            _scipy=A,
        )

    def to_scipy(self) -> sp.csr_matrix:
        if self._scipy is None:
            self._scipy = sp.csr_matrix(
                (self.values, self.col_idx, self.row_ptr), shape=(self.n, self.n)
            )
        return self._scipy

    def diagonal(self) -> np.ndarray:
        return self.to_scipy().diagonal()

    @property
    def nnz(self) -> int:
        return self.col_idx.size


def spmv(A: SparseSpd, x: np.ndarray) -> np.ndarray:
    """CSR matrix-vector product."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.n,):
        raise ValueError(f"vector of size {x.shape} does not match n={A.n}")
    return A.to_scipy() @ x


def cg_solve(
    A: SparseSpd,
    b: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    precond: str | None = None,
    x0: np.ndarray | None = None,
) -> tuple[np.ndarray, SolveReport]:
    """Conjugate gradient solve of A x = b to a relative residual.

    ``precond`` may be None, "jacobi", or "amg" (a classical AMG V-cycle
    built once per matrix and cached).
    """
    if not (0.0 < tol < 1.0):
        raise ValueError(f"tol must be in (0, 1), got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (A.n,):
        raise ValueError(f"rhs of size {b.shape} does not match n={A.n}")
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(A.n), SolveReport(0, 0.0, True)

    M = _preconditioner(A, precond)
    As = A.to_scipy()
    x = np.zeros(A.n) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    r = b - As @ x if x.any() else b.copy()
    z = M(r)
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        Ap = As @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        res = float(np.linalg.norm(r)) / b_norm
        if res <= tol:
            return x, SolveReport(it, res, True)
        z = M(r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    res = float(np.linalg.norm(b - As @ x)) / b_norm
    return x, SolveReport(max_iter, res, res <= tol)


def _preconditioner(A: SparseSpd, precond: str | None):
    if precond is None:
        return lambda r: r
    if precond == "jacobi":
        inv_diag = 1.0 / A.diagonal()
        return lambda r: inv_diag * r
    if precond == "amg":
        solver = _amg_hierarchy(A)
        M = solver.aspreconditioner(cycle="V")
        return lambda r: M @ r
    raise ValueError(f"unknown preconditioner {precond!r}")


def _amg_hierarchy(A: SparseSpd):
    import pyamg

    if getattr(A, "_amg", None) is None:
        A._amg = pyamg.ruge_stuben_solver(A.to_scipy())
    return A._amg


def factorize(A: SparseSpd):
    """Exact sparse LU factorization, cached on the matrix."""
    if A._factor is None:
        try:
            A._factor = spla.splu(A.to_scipy().tocsc())
        except RuntimeError as exc:
            raise FactorizationError(f"factorization failed: {exc}") from exc
    return A._factor


def direct_solve(A: SparseSpd, b: np.ndarray) -> np.ndarray:
    """Solve A x = b with the exact sparse factorization."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (A.n,):
        raise ValueError(f"rhs of size {b.shape} does not match n={A.n}")
    x = factorize(A).solve(b)
    if not np.all(np.isfinite(x)):
        raise FactorizationError("factorization produced non-finite solution")
    return x


def solve(
    A: SparseSpd,
    b: np.ndarray,
    method: str = "direct",
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> tuple[np.ndarray, SolveReport]:
    """Uniform entry point over the available inner solvers.

    Methods: "direct" (cached exact factorization), "cg" (plain CG),
    "cg-jacobi", "amg" (AMG-preconditioned CG).
    """
    if method == "direct":
        x = direct_solve(A, b)
        b_norm = float(np.linalg.norm(b))
        res = (
            0.0
            if b_norm == 0.0
            else float(np.linalg.norm(b - A.to_scipy() @ x)) / b_norm
        )
        return x, SolveReport(1, res, True)
    if method == "cg":
        return cg_solve(A, b, tol=tol, max_iter=max_iter)
    if method == "cg-jacobi":
        return cg_solve(A, b, tol=tol, max_iter=max_iter, precond="jacobi")
    if method == "amg":
        return cg_solve(A, b, tol=tol, max_iter=max_iter, precond="amg")
    raise ValueError(f"unknown solver method {method!r}")
