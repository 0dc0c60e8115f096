"""Homogenization-accelerated iterative solver for 2D elliptic problems
with rapidly oscillating random coefficients.

The package discretizes -div(a(x) grad u) = f on (0, r)^2 with P1
finite elements on a structured triangular mesh, samples the random
checkerboard coefficient field, and implements an iteration whose steps
combine heterogeneous smoothing solves with a coarse solve using the
homogenized operator.  The experiment harness measures the contraction
factor of the iteration.
"""

from .assembly import (
    FemSystem,
    assemble,
    assemble_full,
    element_mass,
    element_stiffness,
    export_matrix_coo,
    h1_seminorm,
)
from .coeff import (
    CheckerboardField,
    HomogenizedMatrix,
    analytic_abar,
    coeff_of_cell,
    export_field_text,
    import_field_text,
    rve_estimate_abar,
    sample_checkerboard,
)
from .iteration import (
    ContractionEstimate,
    IterationConfig,
    IterationRecord,
    StepOperator,
    SubSolveError,
    aggregate_rho,
    ell,
    estimate_rho,
    predicted_bound_shape,
    reference_solution,
    run,
    step,
)
from .mesh import (
    InteriorDofMap,
    StructuredMesh,
    build_mesh,
    cell_of_triangle,
    export_mesh_text,
    interior_dof_map,
)
from .sparse import (
    FactorizationError,
    SolveReport,
    SparseSpd,
    cg_solve,
    direct_solve,
    spmv,
)

__all__ = [
    "CheckerboardField",
    "ContractionEstimate",
    "FactorizationError",
    "FemSystem",
    "HomogenizedMatrix",
    "InteriorDofMap",
    "IterationConfig",
    "IterationRecord",
    "SolveReport",
    "SparseSpd",
    "StepOperator",
    "StructuredMesh",
    "SubSolveError",
    "aggregate_rho",
    "analytic_abar",
    "assemble",
    "assemble_full",
    "build_mesh",
    "cell_of_triangle",
    "cg_solve",
    "coeff_of_cell",
    "direct_solve",
    "element_mass",
    "element_stiffness",
    "ell",
    "estimate_rho",
    "export_field_text",
    "export_matrix_coo",
    "export_mesh_text",
    "h1_seminorm",
    "import_field_text",
    "interior_dof_map",
    "predicted_bound_shape",
    "reference_solution",
    "rve_estimate_abar",
    "run",
    "sample_checkerboard",
    "spmv",
    "step",
]

__version__ = "0.1.0"
