"""Mesh construction, cell lookup, and interior dof numbering."""

import collections

import numpy as np
import pytest

from homsolve import build_mesh, cell_of_triangle, interior_dof_map
from homsolve.mesh import MAX_VERTICES, export_mesh_text, triangle_cells


def signed_areas(mesh):
    coords = mesh.vertices[mesh.triangles]
    x, y = coords[..., 0], coords[..., 1]
    return 0.5 * (
        (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0])
        - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    )


def test_smallest_mesh_counts():
    mesh = build_mesh(1, 0)
    assert mesh.n_vertices == 4
    assert mesh.n_triangles == 2
    assert mesh.boundary_mask.all()
    assert mesh.h == 1.0


def test_refined_mesh_counts():
    mesh = build_mesh(2, 1)
    assert mesh.n_vertices == 25
    assert mesh.n_triangles == 32
    assert mesh.boundary_mask.sum() == 16
    assert mesh.h == 0.5


@pytest.mark.parametrize("r,k", [(1, 0), (2, 1), (3, 2), (7, 0)])
def test_counts_formula(r, k):
    mesh = build_mesh(r, k)
    n = r * 2**k
    assert mesh.n_vertices == (n + 1) ** 2
    assert mesh.n_triangles == 2 * n * n
    assert mesh.boundary_mask.sum() == 4 * n


def test_large_mesh_counts():
    mesh = build_mesh(100, 3)
    assert mesh.n_vertices == 801**2
    assert mesh.n_triangles == 2 * 800**2


@pytest.mark.parametrize("r,k", [(1, 0), (2, 1), (4, 2)])
def test_all_triangles_ccw_with_area_half_h_squared(r, k):
    mesh = build_mesh(r, k)
    areas = signed_areas(mesh)
    np.testing.assert_allclose(areas, 0.5 * mesh.h**2, rtol=1e-14)


def test_total_area_is_r_squared():
    mesh = build_mesh(3, 2)
    assert abs(signed_areas(mesh).sum() - 9.0) < 1e-12


def test_vertices_lexicographic():
    mesh = build_mesh(2, 0)
    expected = [(x, y) for y in range(3) for x in range(3)]
    np.testing.assert_allclose(mesh.vertices, np.array(expected, dtype=float))


def test_edge_sharing_counts():
    # Interior edges belong to exactly 2 triangles, boundary edges to 1.
    mesh = build_mesh(2, 1)
    edge_count = collections.Counter()
    for tri in mesh.triangles:
        for a, b in [(0, 1), (1, 2), (2, 0)]:
            edge_count[frozenset((tri[a], tri[b]))] += 1
    assert set(edge_count.values()) <= {1, 2}
    n_boundary_edges = sum(1 for c in edge_count.values() if c == 1)
    assert n_boundary_edges == 4 * (mesh.n_side - 1)


def test_determinism():
    m1 = build_mesh(5, 2)
    m2 = build_mesh(5, 2)
    np.testing.assert_array_equal(m1.vertices, m2.vertices)
    np.testing.assert_array_equal(m1.triangles, m2.triangles)
    np.testing.assert_array_equal(m1.boundary_mask, m2.boundary_mask)


def test_triangles_never_straddle_cells():
    mesh = build_mesh(4, 2)
    cells = triangle_cells(mesh)
    coords = mesh.vertices[mesh.triangles]
    # Every vertex of a triangle lies inside (the closure of) its cell.
    lo = cells[:, None, :].astype(float)
    assert np.all(coords >= lo - 1e-12)
    assert np.all(coords <= lo + 1.0 + 1e-12)


def test_cell_of_triangle_scalar_and_errors():
    mesh = build_mesh(2, 1)
    assert cell_of_triangle(mesh, 0) == (0, 0)
    assert cell_of_triangle(mesh, mesh.n_triangles - 1) == (1, 1)
    with pytest.raises(IndexError):
        cell_of_triangle(mesh, mesh.n_triangles)
    with pytest.raises(IndexError):
        cell_of_triangle(mesh, -1)


def test_interior_dof_map_roundtrip():
    mesh = build_mesh(2, 1)
    dof = interior_dof_map(mesh)
    assert dof.n_int == 9
    np.testing.assert_array_equal(
        dof.vertex_to_dof[dof.dof_to_vertex], np.arange(9)
    )
    assert (dof.vertex_to_dof[mesh.boundary_mask] == -1).all()


def test_interior_dof_single_center():
    mesh = build_mesh(2, 0)
    dof = interior_dof_map(mesh)
    assert dof.n_int == 1
    np.testing.assert_allclose(mesh.vertices[dof.dof_to_vertex[0]], [1.0, 1.0])


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_mesh(0, 1)
    with pytest.raises(ValueError):
        build_mesh(4, -1)
    too_big = int(np.sqrt(MAX_VERTICES)) + 2
    with pytest.raises(ValueError):
        build_mesh(too_big, 0)


def test_export_mesh_text(tmp_path):
    mesh = build_mesh(1, 0)
    path = tmp_path / "mesh.txt"
    export_mesh_text(mesh, path)
    text = path.read_text()
    assert "4 vertices" in text
    assert "2 triangles" in text
