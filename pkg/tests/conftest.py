"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from homsolve import analytic_abar, assemble, build_mesh, sample_checkerboard


def random_spd(n: int, rng: np.random.Generator, density: float = 0.3):
    """Dense random SPD matrix returned as (dense, SparseSpd)."""
    import scipy.sparse as sp

    from homsolve import SparseSpd

    B = rng.standard_normal((n, n))
    mask = rng.random((n, n)) < density
    B = B * mask
    dense = B @ B.T + n * np.eye(n)
    return dense, SparseSpd.from_scipy(sp.csr_matrix(dense))


def small_system(r: int = 10, k: int = 1, seed: int = 0, lo=1.0, hi=9.0):
    mesh = build_mesh(r, k)
    fld = sample_checkerboard(r, seed, lo, hi)
    return assemble(mesh, fld, analytic_abar(lo, hi))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
