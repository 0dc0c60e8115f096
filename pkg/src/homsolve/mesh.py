"""Structured triangular P1 mesh of the square (0, r)^2.

Each unit cell z + [0,1)^2 is subdivided into fine squares of side
h = 2^-k, and every fine square is split along its lower-left to
upper-right diagonal into two counterclockwise triangles.  Vertices are
numbered lexicographically (row-major, x fastest), which fixes the
sparsity pattern of every assembled matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Largest admissible vertex count; keeps vertex indices well inside int64
# and bounds memory for a desk-scale machine.
MAX_VERTICES = 2**26


@dataclass(frozen=True)
class StructuredMesh:
    """Immutable triangulation of (0, r)^2 at refinement level k."""

    r: int
    k: int
    h: float
    n_side: int
    vertices: np.ndarray        # (n_vertices, 2) float64
    triangles: np.ndarray       # (n_triangles, 3) int64, CCW
    boundary_mask: np.ndarray   # (n_vertices,) bool

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]


def build_mesh(r: int, k: int) -> StructuredMesh:
    """Build the structured mesh of (0, r)^2 with mesh size h = 2^-k."""
    if r < 1:
        raise ValueError(f"domain size r must be >= 1, got {r}")
    if k < 0:
        raise ValueError(f"refinement level k must be >= 0, got {k}")
    n_cells = r * 2**k            # fine squares per side
    n_side = n_cells + 1
    if n_side * n_side > MAX_VERTICES:
        raise ValueError(
            f"mesh with {n_side}^2 vertices exceeds the supported size "
            f"({MAX_VERTICES} vertices)"
        )
    h = 2.0**-k

    ii, jj = np.meshgrid(np.arange(n_side), np.arange(n_side), indexing="xy")
    vertices = np.column_stack([ii.ravel() * h, jj.ravel() * h])

    # Fine square (i, j) has corners v00, v10, v11, v01; the diagonal
    # v00 -> v11 yields triangles (v00, v10, v11) and (v00, v11, v01).
    i, j = np.meshgrid(np.arange(n_cells), np.arange(n_cells), indexing="xy")
    i = i.ravel()
    j = j.ravel()
    v00 = j * n_side + i
    v10 = v00 + 1
    v01 = v00 + n_side
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    triangles = np.empty((2 * n_cells * n_cells, 3), dtype=np.int64)
    triangles[0::2] = lower
    triangles[1::2] = upper

    on_edge_x = (ii == 0) | (ii == n_side - 1)
    on_edge_y = (jj == 0) | (jj == n_side - 1)
    boundary_mask = (on_edge_x | on_edge_y).ravel()

    vertices.setflags(write=False)
    triangles.setflags(write=False)
    boundary_mask.setflags(write=False)
    return StructuredMesh(
        r=r, k=k, h=h, n_side=n_side,
        vertices=vertices, triangles=triangles, boundary_mask=boundary_mask,
    )


def cell_of_triangle(mesh: StructuredMesh, t) -> tuple:
    """Unit cell z in Z^2 containing triangle t (floor of its centroid).

    Accepts a scalar index (returns an (x, y) tuple) or an array of
    indices (returns an (n, 2) array).
    """
    t = np.asarray(t)
    if np.any(t < 0) or np.any(t >= mesh.n_triangles):
        raise IndexError(f"triangle index out of range: {t}")
    centroids = mesh.vertices[mesh.triangles[t]].mean(axis=-2)
    cells = np.floor(centroids).astype(np.int64)
    if t.ndim == 0:
        return (int(cells[0]), int(cells[1]))
    return cells


def triangle_cells(mesh: StructuredMesh) -> np.ndarray:
    """Unit cell of every triangle, shape (n_triangles, 2)."""
    return cell_of_triangle(mesh, np.arange(mesh.n_triangles))


@dataclass(frozen=True)
class InteriorDofMap:
    """Bijection between interior (non-boundary) vertices and 0..n_int-1."""

    n_int: int
    vertex_to_dof: np.ndarray   # (n_vertices,) int64, -1 on the boundary
    dof_to_vertex: np.ndarray   # (n_int,) int64


def interior_dof_map(mesh: StructuredMesh) -> InteriorDofMap:
    """Number the interior vertices for Dirichlet elimination."""
    interior = ~mesh.boundary_mask
    dof_to_vertex = np.flatnonzero(interior)
    vertex_to_dof = np.full(mesh.n_vertices, -1, dtype=np.int64)
    vertex_to_dof[dof_to_vertex] = np.arange(dof_to_vertex.size)
    vertex_to_dof.setflags(write=False)
    dof_to_vertex.setflags(write=False)
    return InteriorDofMap(
        n_int=dof_to_vertex.size,
        vertex_to_dof=vertex_to_dof,
        dof_to_vertex=dof_to_vertex,
    )


def export_mesh_text(mesh: StructuredMesh, path) -> None:
    """Write a plain-text vertex/triangle listing for debugging."""
    with open(path, "w") as fh:
        fh.write(f"# structured mesh r={mesh.r} k={mesh.k} h={mesh.h}\n")
        fh.write(f"# {mesh.n_vertices} vertices (x y boundary)\n")
        for (x, y), b in zip(mesh.vertices, mesh.boundary_mask):
            fh.write(f"{x:.17g} {y:.17g} {int(b)}\n")
        fh.write(f"# {mesh.n_triangles} triangles (v0 v1 v2)\n")
        for v0, v1, v2 in mesh.triangles:
            fh.write(f"{v0} {v1} {v2}\n")
