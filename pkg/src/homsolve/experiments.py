"""Experiment harness and CLI.

Reproduces the checkerboard contraction experiments: single runs with
per-iteration error history, sweeps over the domain size r and the
scale parameter lambda, a per-seed histogram of the contraction factor,
the RVE estimate of the homogenized matrix, and a mesh-refinement
verification of the FEM discretization.  Results are written as CSV.

Iteration-based modes (run, sweep-r, sweep-lambda, histogram) share one
fixed schema:

    mode,r,k,lambda,seed,iter,h1_error,rel_error,rho,converged,wall_ms

Per-iteration rows fill iter/h1_error/rel_error; summary rows leave
iter empty and fill rho/converged.  Aggregate rows (means over seeds)
leave seed empty.  The rve and fem-verify modes measure different
quantities and use their own documented schemas.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .assembly import FemSystem, assemble, h1_seminorm
from .coeff import analytic_abar, rve_estimate_abar, sample_checkerboard
from .iteration import (
    ContractionEstimate,
    IterationConfig,
    IterationRecord,
    SubSolveError,
    aggregate_rho,
    ell,
    estimate_rho,
    reference_solution,
    run,
)
from .mesh import build_mesh
from .sparse import direct_solve

ITER_COLUMNS = [
    "mode", "r", "k", "lambda", "seed", "iter",
    "h1_error", "rel_error", "rho", "converged", "wall_ms",
]
RVE_COLUMNS = ["mode", "L", "k", "seed", "bc", "a11", "a12", "a21", "a22"]
FEM_VERIFY_COLUMNS = ["mode", "r", "k", "h1_error", "ratio"]

PRE_ASYMPTOTIC_FACTOR = 10.0  # regime boundary r ~ 10 / lambda


@dataclass
class ExperimentConfig:
    mode: str
    r_values: list[int]
    lam_values: list[float]
    n_seeds: int = 10
    base_seed: int = 0
    k: int = 3
    tol: float = 1e-9
    inner_tol: float = 1e-12
    inner_solver: str = "auto"
    max_iter: int = 50
    lo: float = 1.0
    hi: float = 9.0
    f: float = 1.0
    out: str | None = None
    keep_going: bool = False
    workers: int = 1
    bc: str = "dirichlet-affine"

    def __post_init__(self):
        if not self.r_values:
            raise ValueError("need at least one r value")
        if self.mode not in ("rve", "fem-verify") and not self.lam_values:
            raise ValueError("need at least one lambda value")
        if self.n_seeds < 1:
            raise ValueError("need at least one seed")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        # Duplicate sweep points only waste time; drop them, keep order.
        self.r_values = list(dict.fromkeys(self.r_values))
        self.lam_values = list(dict.fromkeys(self.lam_values))

    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.n_seeds)]


def build_system(cfg: ExperimentConfig, r: int, seed: int) -> FemSystem:
    mesh = build_mesh(r, cfg.k)
    fld = sample_checkerboard(r, seed, cfg.lo, cfg.hi)
    return assemble(mesh, fld, analytic_abar(cfg.lo, cfg.hi), f=cfg.f)


def run_point(
    cfg: ExperimentConfig,
    r: int,
    lam: float,
    seed: int,
    system: FemSystem | None = None,
    u_ref: np.ndarray | None = None,
) -> tuple[IterationRecord, ContractionEstimate]:
    """One (r, lambda, seed) run plus its contraction estimate."""
    if system is None:
        system = build_system(cfg, r, seed)
    config = IterationConfig(
        lam=lam,
        tol=cfg.tol,
        max_iter=cfg.max_iter,
        inner_tol=cfg.inner_tol,
        inner_solver=cfg.inner_solver,
    )
    record = run(system, config, u_ref=u_ref)
    if r < PRE_ASYMPTOTIC_FACTOR / lam:
        record.flags.append("pre-asymptotic")
    return record, estimate_rho(record)


def _iter_rows(mode, record: IterationRecord, lam: float):
    """Per-iteration rows for one run."""
    rows = []
    for i, (err, rel) in enumerate(zip(record.errors, record.rel_errors)):
        wall = sum(record.subsolve_ms[i - 1]) if i >= 1 else 0.0
        rows.append({
            "mode": mode, "r": record.r, "k": record.k, "lambda": lam,
            "seed": record.seed, "iter": i + 1,
            "h1_error": repr(err), "rel_error": repr(rel),
            "rho": "", "converged": "", "wall_ms": f"{wall:.3f}",
        })
    return rows


def _summary_row(mode, r, k, lam, seed, rho, converged, wall_ms):
    return {
        "mode": mode, "r": r, "k": k, "lambda": lam, "seed": seed,
        "iter": "", "h1_error": "", "rel_error": "",
        "rho": repr(float(rho)), "converged": converged,
        "wall_ms": f"{wall_ms:.3f}",
    }


def run_single(cfg: ExperimentConfig) -> list[dict]:
    """Single (r, lambda, seed) run: iteration rows plus one summary row."""
    r = cfg.r_values[0]
    lam = cfg.lam_values[0]
    seed = cfg.seeds()[0]
    t0 = time.perf_counter()
    record, est = run_point(cfg, r, lam, seed)
    wall = 1e3 * (time.perf_counter() - t0)
    rows = _iter_rows("run", record, lam)
    rows.append(_summary_row(
        "run", r, cfg.k, lam, seed, est.rho,
        record.iterations_to_converge is not None, wall,
    ))
    return rows


def _seed_estimates(cfg: ExperimentConfig, r: int, lam_values: list[float]):
    """Per-seed runs for all lambdas on shared systems.

    Returns {lam: [(seed, record, estimate, wall_ms), ...]}.  Building
    the system and reference solution once per seed amortizes them over
    every lambda.
    """
    out = {lam: [] for lam in lam_values}
    for seed in cfg.seeds():
        system = build_system(cfg, r, seed)
        u_ref = reference_solution(system, cfg.inner_solver)
        for lam in lam_values:
            t0 = time.perf_counter()
            record, est = run_point(cfg, r, lam, seed, system=system, u_ref=u_ref)
            wall = 1e3 * (time.perf_counter() - t0)
            out[lam].append((seed, record, est, wall))
    return out


def run_sweep_r(cfg: ExperimentConfig) -> list[dict]:
    """Per-seed and seed-mean contraction factors over the r grid."""
    rows = []
    for r in cfg.r_values:
        by_lam = _seed_estimates(cfg, r, cfg.lam_values)
        for lam in cfg.lam_values:
            ests = []
            for seed, record, est, wall in by_lam[lam]:
                rows.append(_summary_row(
                    "sweep-r", r, cfg.k, lam, seed, est.rho,
                    record.iterations_to_converge is not None, wall,
                ))
                ests.append(est)
            agg = aggregate_rho(ests)
            rows.append(_summary_row("sweep-r", r, cfg.k, lam, "", agg.mean, "", 0.0))
    return rows


def run_sweep_lambda(cfg: ExperimentConfig) -> list[dict]:
    """Per-seed and seed-mean contraction factors over the lambda grid."""
    for lam in cfg.lam_values:
        if not (0.0 < lam <= 0.5):
            raise ValueError(f"sweep-lambda expects lambda in (0, 0.5], got {lam}")
    rows = []
    for r in cfg.r_values:
        by_lam = _seed_estimates(cfg, r, cfg.lam_values)
        for lam in cfg.lam_values:
            ests = []
            for seed, record, est, wall in by_lam[lam]:
                rows.append(_summary_row(
                    "sweep-lambda", r, cfg.k, lam, seed, est.rho,
                    record.iterations_to_converge is not None, wall,
                ))
                ests.append(est)
            agg = aggregate_rho(ests)
            rows.append(_summary_row(
                "sweep-lambda", r, cfg.k, lam, "", agg.mean, "", 0.0,
            ))
    return rows


def run_histogram(cfg: ExperimentConfig) -> list[dict]:
    """Per-seed contraction factors for the empirical distribution."""
    if cfg.n_seeds < 2:
        raise ValueError("histogram needs at least 2 seeds")
    r = cfg.r_values[0]
    lam = cfg.lam_values[0]
    rows = []
    ests = []
    for seed, record, est, wall in _seed_estimates(cfg, r, [lam])[lam]:
        rows.append(_summary_row(
            "histogram", r, cfg.k, lam, seed, est.rho,
            record.iterations_to_converge is not None, wall,
        ))
        ests.append(est)
    agg = aggregate_rho(ests)
    rows.append(_summary_row("histogram", r, cfg.k, lam, "", agg.mean, "", 0.0))
    return rows


def run_rve(cfg: ExperimentConfig) -> list[dict]:
    """RVE estimates of the homogenized matrix, one row per seed."""
    L = cfg.r_values[0]
    k = max(cfg.k, 2)
    rows = []
    mats = []
    for seed in cfg.seeds():
        fld = sample_checkerboard(L, seed, cfg.lo, cfg.hi)
        est = rve_estimate_abar(fld, k=k, bc=cfg.bc)
        mats.append(est.abar)
        a = est.abar
        rows.append({
            "mode": "rve", "L": L, "k": k, "seed": seed, "bc": cfg.bc,
            "a11": repr(float(a[0, 0])), "a12": repr(float(a[0, 1])),
            "a21": repr(float(a[1, 0])), "a22": repr(float(a[1, 1])),
        })
    mean = np.mean(mats, axis=0)
    rows.append({
        "mode": "rve", "L": L, "k": k, "seed": "", "bc": cfg.bc,
        "a11": repr(float(mean[0, 0])), "a12": repr(float(mean[0, 1])),
        "a21": repr(float(mean[1, 0])), "a22": repr(float(mean[1, 1])),
    })
    return rows


def manufactured_h1_error(r: int, k: int) -> float:
    """H1-seminorm FEM error for u = sin(pi x / r) sin(pi y / r), a = I.

    The load is the nodal interpolant of f = 2 (pi/r)^2 u; the error
    integrates |grad u_h - grad u|^2 with a 3-point edge-midpoint rule.
    """
    mesh = build_mesh(r, k)
    fld = sample_checkerboard(r, 0, 1.0, 1.0)  # constant field = identity
    system = assemble(mesh, fld, analytic_abar(1.0, 1.0), f=0.0)

    w = np.pi / r
    xy = mesh.vertices
    f_nodal = 2.0 * w**2 * np.sin(w * xy[:, 0]) * np.sin(w * xy[:, 1])
    # Consistent load F_i = int f_h psi_i via the full mass matrix.
    from .assembly import assemble_full

    _, _, _, M_full, _ = assemble_full(mesh, fld, analytic_abar(1.0, 1.0))
    idx = system.dof_map.dof_to_vertex
    F = (M_full @ f_nodal)[idx]
    u_int = direct_solve(system.A_id, F)
    u_h = np.zeros(mesh.n_vertices)
    u_h[idx] = u_int

    from .assembly import _mesh_geometry

    areas, grads = _mesh_geometry(mesh)
    grad_uh = np.einsum("tij,ti->tj", grads, u_h[mesh.triangles])
    coords = mesh.vertices[mesh.triangles]
    mids = 0.5 * (coords + np.roll(coords, -1, axis=1))  # (n_tri, 3, 2)
    gx = w * np.cos(w * mids[..., 0]) * np.sin(w * mids[..., 1])
    gy = w * np.sin(w * mids[..., 0]) * np.cos(w * mids[..., 1])
    diff = np.stack([gx, gy], axis=-1) - grad_uh[:, None, :]
    err_sq = float((areas[:, None] / 3.0 * np.einsum("tqc,tqc->tq", diff, diff)).sum())
    return float(np.sqrt(err_sq))


def run_fem_verify(cfg: ExperimentConfig) -> list[dict]:
    """Refinement study of the manufactured-solution H1 error."""
    r = cfg.r_values[0]
    k_coarse = max(cfg.k - 1, 0)
    k_fine = cfg.k
    e_coarse = manufactured_h1_error(r, k_coarse)
    e_fine = manufactured_h1_error(r, k_fine)
    return [
        {"mode": "fem-verify", "r": r, "k": k_coarse,
         "h1_error": repr(e_coarse), "ratio": ""},
        {"mode": "fem-verify", "r": r, "k": k_fine,
         "h1_error": repr(e_fine), "ratio": repr(e_coarse / e_fine)},
    ]


_RUNNERS = {
    "run": (run_single, ITER_COLUMNS),
    "sweep-r": (run_sweep_r, ITER_COLUMNS),
    "sweep-lambda": (run_sweep_lambda, ITER_COLUMNS),
    "histogram": (run_histogram, ITER_COLUMNS),
    "rve": (run_rve, RVE_COLUMNS),
    "fem-verify": (run_fem_verify, FEM_VERIFY_COLUMNS),
}


def write_csv(rows: list[dict], columns: list[str], out) -> None:
    writer = csv.DictWriter(out, fieldnames=columns)
    writer.writeheader()
    writer.writerows(rows)


def execute(cfg: ExperimentConfig) -> list[dict]:
    """Run the configured experiment and write its CSV (if cfg.out set)."""
    runner, columns = _RUNNERS[cfg.mode]
    rows = runner(cfg)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_csv(rows, columns, fh)
    return rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homsolve",
        description="Contraction-factor experiments for the homogenization-"
                    "accelerated elliptic solver on the random checkerboard.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in _RUNNERS:
        p = sub.add_parser(mode)
        p.add_argument("--r", type=int, action="append", default=None,
                       help="domain size in cells (repeatable)")
        p.add_argument("--lambda", dest="lam", type=float, action="append",
                       default=None, help="scale parameter (repeatable)")
        p.add_argument("--seeds", type=int, default=None,
                       help="number of seeds")
        p.add_argument("--base-seed", type=int, default=0)
        p.add_argument("--refine", type=int, default=3, metavar="K",
                       help="uniform refinement level (mesh size 2^-K)")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--inner-tol", type=float, default=1e-12)
        p.add_argument("--inner-solver", default="auto",
                       choices=["auto", "direct", "cg", "cg-jacobi", "amg"])
        p.add_argument("--max-iter", type=int, default=50)
        p.add_argument("--lo", type=float, default=1.0)
        p.add_argument("--hi", type=float, default=9.0)
        p.add_argument("--out", default=None, metavar="FILE.csv")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--keep-going", action="store_true")
        if mode == "rve":
            p.add_argument("--bc", default="dirichlet-affine",
                           choices=["dirichlet-affine", "periodic"])
    return parser


_MODE_DEFAULTS = {
    # mode: (r values, lambda values, seeds)
    "run": ([100], [0.1], 1),
    "sweep-r": ([10, 20, 40, 80, 160], [0.1, 0.2, 0.4], 10),
    "sweep-lambda": ([100], [0.1, 0.2, 0.3, 0.4, 0.5], 10),
    "histogram": ([100], [0.1], 100),
    "rve": ([64], [], 8),
    "fem-verify": ([8], [], 1),
}


def config_from_args(args) -> ExperimentConfig:
    r_default, lam_default, seeds_default = _MODE_DEFAULTS[args.mode]
    return ExperimentConfig(
        mode=args.mode,
        r_values=args.r if args.r else list(r_default),
        lam_values=args.lam if args.lam else list(lam_default),
        n_seeds=args.seeds if args.seeds is not None else seeds_default,
        base_seed=args.base_seed,
        k=args.refine,
        tol=args.tol,
        inner_tol=args.inner_tol,
        inner_solver=args.inner_solver,
        max_iter=args.max_iter,
        lo=args.lo,
        hi=args.hi,
        out=args.out,
        keep_going=args.keep_going,
        workers=args.workers,
        bc=getattr(args, "bc", "dirichlet-affine"),
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        rows = execute(cfg)
    except SubSolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not cfg.out:
        write_csv(rows, _RUNNERS[cfg.mode][1], sys.stdout)
    failed = [row for row in rows if row.get("converged") is False]
    if failed and not cfg.keep_going:
        print(f"error: {len(failed)} runs did not converge", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
