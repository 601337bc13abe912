"""Stationary states of self-trapped condensates with attractive 1/r interaction."""

__version__ = "0.1.0"

from .continuation import BranchDiagram, Fold, fold_curve, locate_fold, trace_branch
from .errors import (
    BracketError,
    ConvergenceError,
    InvalidContextError,
    InvalidDensityError,
    NoSolutionError,
    SelftrapError,
    StepSizeError,
    WindowError,
)
from .model import (
    ModelParams,
    PhysicalContext,
    ScaledObservables,
    atomic_units,
    interaction_strength,
    rescale_observables,
    scaled_from_dimensionless,
    to_scaled,
)
from .observables import consistency_report, energy_components, n_body_observables, tf_profile
from .radial import RadialField, RadialGrid, poisson_gravity
from .scf import scf_solve
from .shooting import LOWER, UPPER, RadialSolution, shoot_raw, solve
from .variational import gaussian_stationary_points, variational_fold, variational_observables
