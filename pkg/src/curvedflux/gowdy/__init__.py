from .fluid import (
    FluidState,
    ConservedFluid,
    primitive_to_conserved,
    conserved_to_primitive,
    wave_speeds,
    fluid_sources,
    fluid_source_step,
)
from .riemann import RiemannSolution, riemann_solve, solve_riemann_batch
from .glimm import van_der_corput, glimm_step, glimm_dt
from .geometry import (
    GeometryState,
    geometry_rhs,
    geometry_step,
    reconstruct_metric,
    constraint_residual,
)
from .evolve import (
    GowdyConfig,
    GowdyState,
    GowdyRun,
    StepSummary,
    tv_norm,
    blowup_monitor,
    run_gowdy,
    make_initial_data,
    INITIAL_FAMILIES,
)

__all__ = [
    "FluidState",
    "ConservedFluid",
    "primitive_to_conserved",
    "conserved_to_primitive",
    "wave_speeds",
    "fluid_sources",
    "fluid_source_step",
    "RiemannSolution",
    "riemann_solve",
    "solve_riemann_batch",
    "van_der_corput",
    "glimm_step",
    "glimm_dt",
    "GeometryState",
    "geometry_rhs",
    "geometry_step",
    "reconstruct_metric",
    "constraint_residual",
    "GowdyConfig",
    "GowdyState",
    "GowdyRun",
    "StepSummary",
    "tv_norm",
    "blowup_monitor",
    "run_gowdy",
    "make_initial_data",
    "INITIAL_FAMILIES",
]
