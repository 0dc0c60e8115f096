"""Random checkerboard coefficient field and homogenized matrix.

The field assigns an independent fair-coin value in {lo, hi} to every
unit cell z + [0,1)^2.  The coin for cell z is derived from a
counter-based hash of (seed, z), so regeneration is bit-exact and
independent of traversal order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import StructuredMesh, build_mesh, interior_dof_map, triangle_cells

_SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """Finalizer of the splitmix64 generator; a bijective 64-bit mixer."""
    # Arithmetic is mod 2^64 by design; silence the wraparound warning.
    with np.errstate(over="ignore"):
        z = (x + _SPLITMIX_GAMMA).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * _MIX_1
        z = (z ^ (z >> np.uint64(27))) * _MIX_2
        return z ^ (z >> np.uint64(31))


def cell_coin(seed: int, zx, zy) -> np.ndarray:
    """Fair coin in {0, 1} for cell (zx, zy) under the given seed."""
    counter = (np.asarray(zx, dtype=np.uint64) << np.uint64(32)) | np.asarray(
        zy, dtype=np.uint64
    )
    mixed = _splitmix64(np.uint64(seed) ^ _splitmix64(counter))
    return (mixed >> np.uint64(63)).astype(np.int64)


@dataclass(frozen=True)
class CheckerboardField:
    """Piecewise-constant scalar coefficient on the cells of (0, r)^2."""

    r: int
    seed: int
    lo: float
    hi: float
    values: np.ndarray  # (r, r), values[x, y] = b(z) for z = (x, y)


def sample_checkerboard(
    r: int, seed: int, lo: float = 1.0, hi: float = 9.0
) -> CheckerboardField:
    """Sample the random checkerboard with i.i.d. fair coins per cell."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if lo <= 0 or hi <= 0:
        raise ValueError(f"coefficient values must be positive, got {lo}, {hi}")
    if lo > hi:
        raise ValueError(f"need lo <= hi, got {lo} > {hi}")
    zx, zy = np.meshgrid(np.arange(r), np.arange(r), indexing="ij")
    coins = cell_coin(seed, zx, zy)
    values = np.where(coins == 1, hi, lo).astype(np.float64)
    values.setflags(write=False)
    return CheckerboardField(r=r, seed=seed, lo=lo, hi=hi, values=values)


def coeff_of_cell(field: CheckerboardField, z) -> float:
    """Scalar coefficient on cell z = (x, y)."""
    zx, zy = int(z[0]), int(z[1])
    if not (0 <= zx < field.r and 0 <= zy < field.r):
        raise IndexError(f"cell {z} outside {{0..{field.r - 1}}}^2")
    return float(field.values[zx, zy])


def coeff_of_triangles(field: CheckerboardField, mesh: StructuredMesh) -> np.ndarray:
    """Per-triangle scalar coefficient (exact: triangles never straddle cells)."""
    if mesh.r != field.r:
        raise ValueError(f"mesh r={mesh.r} does not match field r={field.r}")
    cells = triangle_cells(mesh)
    return field.values[cells[:, 0], cells[:, 1]]


def export_field_text(field: CheckerboardField, path) -> None:
    """Write the cell values as a row-major text grid (one row per y)."""
    with open(path, "w") as fh:
        fh.write(f"# checkerboard r={field.r} seed={field.seed} "
                 f"lo={field.lo} hi={field.hi}\n")
        for y in range(field.r):
            fh.write(" ".join(f"{v:.17g}" for v in field.values[:, y]) + "\n")


def import_field_text(path) -> CheckerboardField:
    """Read a field written by :func:`export_field_text`."""
    with open(path) as fh:
        header = fh.readline()
        meta = dict(
            item.split("=") for item in header.lstrip("# ").split() if "=" in item
        )
        rows = [np.array(line.split(), dtype=float) for line in fh if line.strip()]
    values = np.column_stack(rows)
    values.setflags(write=False)
    return CheckerboardField(
        r=int(meta["r"]),
        seed=int(meta["seed"]),
        lo=float(meta["lo"]),
        hi=float(meta["hi"]),
        values=values,
    )


@dataclass(frozen=True)
class HomogenizedMatrix:
    """Constant 2x2 symmetric positive definite effective coefficient."""

    abar: np.ndarray  # (2, 2)


def analytic_abar(lo: float, hi: float) -> HomogenizedMatrix:
    """Effective matrix sqrt(lo*hi) * I for the two-phase fair checkerboard.

    For {1, 9} this is the known exact value 3*I.  Other pairs use the
    same duality formula and are cross-checked numerically by
    :func:`rve_estimate_abar`.  The formula is symmetric in (lo, hi), so
    argument order is not restricted; this keeps the duality identity
    abar(lo, hi) @ inv(abar(hi, lo)) = I directly checkable.
    """
    if lo <= 0 or hi <= 0:
        raise ValueError(f"coefficient values must be positive, got {lo}, {hi}")
    value = float(np.sqrt(lo * hi))
    return HomogenizedMatrix(abar=value * np.eye(2))


def rve_estimate_abar(
    field: CheckerboardField,
    k: int = 3,
    bc: str = "dirichlet-affine",
) -> HomogenizedMatrix:
    """Estimate the effective matrix from one field realization.

    For each basis direction p, solves the cell problem
    -div(a (p + grad phi)) = 0 on the full (0, L)^2 block and returns the
    volume-averaged flux as column p, symmetrized.  The default boundary
    condition pins phi = 0 on the block boundary (affine Dirichlet);
    ``bc="periodic"`` identifies opposite sides instead.
    """
    # Imported here to avoid an import cycle with assembly.
    import scipy.sparse as sp

    from .assembly import assemble_full_stiffness
    from .sparse import SparseSpd, direct_solve

    L = field.r
    if L < 8:
        raise ValueError(f"RVE block must have L >= 8 cells, got L={L}")
    if k < 2:
        raise ValueError(f"RVE mesh needs k >= 2, got k={k}")
    if bc not in ("dirichlet-affine", "periodic"):
        raise ValueError(f"unknown boundary condition {bc!r}")

    mesh = build_mesh(L, k)
    coeffs = coeff_of_triangles(field, mesh)
    A_full, grads, areas = assemble_full_stiffness(mesh, coeffs)

    if bc == "dirichlet-affine":
        # phi = 0 on the block boundary: restrict to interior vertices.
        idx = interior_dof_map(mesh).dof_to_vertex
        P = sp.csr_matrix(
            (np.ones(idx.size), (idx, np.arange(idx.size))),
            shape=(mesh.n_vertices, idx.size),
        )
        A = SparseSpd.from_scipy(P.T @ A_full @ P)
    else:
        # Identify opposite sides; pin vertex 0 against the constant mode.
        master = _periodic_master(mesh)
        P = sp.csr_matrix(
            (np.ones(mesh.n_vertices), (np.arange(mesh.n_vertices), master)),
            shape=(mesh.n_vertices, int(master.max()) + 1),
        )
        Ap = (P.T @ A_full @ P).tolil()
        Ap[0, :] = 0.0
        Ap[:, 0] = 0.0
        Ap[0, 0] = 1.0
        A = SparseSpd.from_scipy(Ap)

    estimate = np.zeros((2, 2))
    total_area = float(areas.sum())
    tri = mesh.triangles
    for col, p in enumerate(np.eye(2)):
        # rhs_i = -int a grad(psi_i) . p over each element.
        contrib = -(coeffs * areas)[:, None] * (grads @ p)  # (n_tri, 3)
        rhs_full = np.zeros(mesh.n_vertices)
        np.add.at(rhs_full, tri.ravel(), contrib.ravel())
        rhs = np.asarray(P.T @ rhs_full).ravel()
        if bc == "periodic":
            rhs[0] = 0.0
        phi = np.asarray(P @ direct_solve(A, rhs)).ravel()
        grad_phi = np.einsum("tij,ti->tj", grads, phi[tri])  # (n_tri, 2)
        flux = (coeffs * areas)[:, None] * (p[None, :] + grad_phi)
        estimate[:, col] = flux.sum(axis=0) / total_area

    abar = 0.5 * (estimate + estimate.T)
    return HomogenizedMatrix(abar=abar)


def _periodic_master(mesh: StructuredMesh) -> np.ndarray:
    """Map each vertex to a contiguous master index, gluing opposite sides."""
    n = mesh.n_side
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    im = np.where(ii == n - 1, 0, ii)
    jm = np.where(jj == n - 1, 0, jj)
    master_vertex = (jm * n + im).ravel()
    _, master = np.unique(master_vertex, return_inverse=True)
    return master
