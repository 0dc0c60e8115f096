"""P1 finite element assembly on the structured mesh.

Builds the heterogeneous stiffness matrix, the constant-coefficient
(homogenized and identity) stiffness matrices, the consistent mass
matrix and the load vector, restricted to interior degrees of freedom
(zero Dirichlet data).  Coefficients are constant on every element, so
all element integrals are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .coeff import CheckerboardField, HomogenizedMatrix, coeff_of_triangles
from .mesh import InteriorDofMap, StructuredMesh, interior_dof_map
from .sparse import SparseSpd

_MASS_REF = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0


def _triangle_geometry(coords: np.ndarray):
    """Signed areas and constant P1 basis gradients.

    coords has shape (..., 3, 2); returns (areas (...,), grads (..., 3, 2)).
    """
    x = coords[..., 0]
    y = coords[..., 1]
    bvec = np.stack(
        [y[..., 1] - y[..., 2], y[..., 2] - y[..., 0], y[..., 0] - y[..., 1]],
        axis=-1,
    )
    cvec = np.stack(
        [x[..., 2] - x[..., 1], x[..., 0] - x[..., 2], x[..., 1] - x[..., 0]],
        axis=-1,
    )
    areas = 0.5 * (
        (x[..., 1] - x[..., 0]) * (y[..., 2] - y[..., 0])
        - (x[..., 2] - x[..., 0]) * (y[..., 1] - y[..., 0])
    )
    # Degenerate triangles are rejected by the callers; avoid the
    # divide-by-zero warning while producing inf/nan placeholders.
    with np.errstate(divide="ignore", invalid="ignore"):
        grads = np.stack([bvec, cvec], axis=-1) / (2.0 * areas[..., None, None])
    return areas, grads


def element_stiffness(coords: np.ndarray, coefficient: np.ndarray) -> np.ndarray:
    """3x3 stiffness of one triangle for a constant 2x2 coefficient matrix."""
    coords = np.asarray(coords, dtype=np.float64)
    coefficient = np.asarray(coefficient, dtype=np.float64)
    area, grads = _triangle_geometry(coords)
    if area == 0.0:
        raise ValueError("degenerate (zero-area) triangle")
    return abs(area) * (grads @ coefficient @ grads.T)


def element_mass(coords: np.ndarray) -> np.ndarray:
    """3x3 consistent mass matrix of one triangle."""
    coords = np.asarray(coords, dtype=np.float64)
    area, _ = _triangle_geometry(coords)
    if area == 0.0:
        raise ValueError("degenerate (zero-area) triangle")
    return abs(area) * _MASS_REF


@dataclass
class FemSystem:
    """Interior-dof discretization of the model problem on one mesh."""

    mesh: StructuredMesh
    field: CheckerboardField
    abar: HomogenizedMatrix
    A_het: SparseSpd
    A_bar: SparseSpd
    A_id: SparseSpd
    M: SparseSpd
    F: np.ndarray
    dof_map: InteriorDofMap

    @property
    def n_dof(self) -> int:
        return self.dof_map.n_int


def _mesh_geometry(mesh: StructuredMesh):
    coords = mesh.vertices[mesh.triangles]  # (n_tri, 3, 2)
    areas, grads = _triangle_geometry(coords)
    return areas, grads


def _scatter_indices(mesh: StructuredMesh):
    tri = mesh.triangles.astype(np.int32)
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    return rows, cols


def _scatter(mesh: StructuredMesh, rows, cols, K_loc) -> sp.csr_matrix:
    n = mesh.n_vertices
    A = sp.coo_matrix((K_loc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def assemble_full_stiffness(mesh: StructuredMesh, coeffs: np.ndarray):
    """Heterogeneous stiffness on all vertices (no Dirichlet elimination).

    Returns (A_full, grads, areas); the geometry arrays are reused by the
    cell-problem flux computation.
    """
    areas, grads = _mesh_geometry(mesh)
    K_id = np.einsum("tic,tjc->tij", grads, grads) * areas[:, None, None]
    rows, cols = _scatter_indices(mesh)
    A_full = _scatter(mesh, rows, cols, coeffs[:, None, None] * K_id)
    return A_full, grads, areas


def assemble_full(
    mesh: StructuredMesh,
    field: CheckerboardField,
    abar: HomogenizedMatrix,
    f: float = 1.0,
    lumped_mass: bool = False,
):
    """Assemble the four global matrices and the load on all vertices.

    Returns (A_het, A_bar, A_id, M, F) as scipy CSR matrices / dense
    vector, without boundary elimination.
    """
    coeffs = coeff_of_triangles(field, mesh)
    areas, grads = _mesh_geometry(mesh)
    rows, cols = _scatter_indices(mesh)

    K_id = np.einsum("tic,tjc->tij", grads, grads) * areas[:, None, None]
    A_id = _scatter(mesh, rows, cols, K_id)
    A_het = _scatter(mesh, rows, cols, coeffs[:, None, None] * K_id)
    K_bar = np.einsum("tic,cd,tjd->tij", grads, abar.abar, grads)
    K_bar *= areas[:, None, None]
    A_bar = _scatter(mesh, rows, cols, K_bar)
    del K_id, K_bar

    M_loc = areas[:, None, None] * _MASS_REF[None, :, :]
    M = _scatter(mesh, rows, cols, M_loc)
    if lumped_mass:
        M = sp.diags(np.asarray(M.sum(axis=1)).ravel()).tocsr()
    del M_loc

    F = np.bincount(
        mesh.triangles.ravel(),
        weights=np.repeat(f * areas / 3.0, 3),
        minlength=mesh.n_vertices,
    )
    return A_het, A_bar, A_id, M, F


def assemble(
    mesh: StructuredMesh,
    field: CheckerboardField,
    abar: HomogenizedMatrix,
    f: float = 1.0,
    lumped_mass: bool = False,
) -> FemSystem:
    """Assemble the interior-dof system for the model problem.

    Zero Dirichlet data on the whole boundary, so elimination is plain
    restriction to interior vertices with no right-side correction.
    """
    if mesh.r != field.r:
        raise ValueError(f"mesh r={mesh.r} does not match field r={field.r}")
    A_het, A_bar, A_id, M, F = assemble_full(
        mesh, field, abar, f=f, lumped_mass=lumped_mass
    )
    dof = interior_dof_map(mesh)
    idx = dof.dof_to_vertex

    def restrict(A):
        return SparseSpd.from_scipy(A[idx][:, idx])

    return FemSystem(
        mesh=mesh,
        field=field,
        abar=abar,
        A_het=restrict(A_het),
        A_bar=restrict(A_bar),
        A_id=restrict(A_id),
        M=restrict(M),
        F=F[idx],
        dof_map=dof,
    )


def h1_seminorm(system: FemSystem, v: np.ndarray) -> float:
    """Discrete H1 seminorm sqrt(v^T A_id v) on interior dofs."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (system.n_dof,):
        raise ValueError(f"vector of size {v.shape} does not match {system.n_dof} dofs")
    return float(np.sqrt(max(v @ (system.A_id.to_scipy() @ v), 0.0)))


def export_matrix_coo(A: SparseSpd, path) -> None:
    """Write a matrix in coordinate text format (row col value per line)."""
    coo = A.to_scipy().tocoo()
    with open(path, "w") as fh:
        fh.write(f"# {A.n} {A.n} {coo.nnz}\n")
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i} {j} {v:.17g}\n")
