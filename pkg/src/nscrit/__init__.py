"""Pseudo-spectral periodic-box Navier-Stokes with one-entry gradient diagnostics."""

__version__ = "0.1.0"

from .grid import GridSpec
from .fields import (
    ScalarField,
    VectorField,
    SpectralScalarField,
    SpectralVectorField,
    forward,
    inverse,
    forward_vector,
    inverse_vector,
    derivative,
    divergence,
    leray_project,
    dealias,
    taylor_green,
    random_solenoidal,
)
from .norms import grad_norms, h1_norm, lp_norm, sup_axis_lr_norm
from .inequalities import (
    eval_ladyzhenskaya,
    eval_trilinear_x1,
    eval_trilinear_x3,
    exponent_map_r_of_alpha,
    sweep_constants,
)
from .criterion import (
    CriterionSpec,
    audit_energy,
    beta_min,
    entry_norm,
    gronwall_exponent,
    gronwall_tracker,
    is_admissible,
)
from .solver import (
    NumericalBreakdown,
    RandomIC,
    SolverConfig,
    TaylorGreenIC,
    nonlinear_term,
    run,
    step,
)

__all__ = [
    "__version__",
    "GridSpec",
    "ScalarField",
    "VectorField",
    "SpectralScalarField",
    "SpectralVectorField",
    "forward",
    "inverse",
    "forward_vector",
    "inverse_vector",
    "derivative",
    "divergence",
    "leray_project",
    "dealias",
    "taylor_green",
    "random_solenoidal",
    "lp_norm",
    "h1_norm",
    "sup_axis_lr_norm",
    "grad_norms",
    "eval_trilinear_x1",
    "eval_trilinear_x3",
    "eval_ladyzhenskaya",
    "sweep_constants",
    "exponent_map_r_of_alpha",
    "CriterionSpec",
    "beta_min",
    "gronwall_exponent",
    "is_admissible",
    "entry_norm",
    "audit_energy",
    "gronwall_tracker",
    "SolverConfig",
    "TaylorGreenIC",
    "RandomIC",
    "NumericalBreakdown",
    "nonlinear_term",
    "step",
    "run",
]
