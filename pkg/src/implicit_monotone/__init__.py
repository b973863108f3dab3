"""Implicit monotone finite-volume schemes for scalar balance laws.

Solves ``u_t + sum_l d/dx_l f_l(x, t, u) = q`` on uniform Cartesian grids in
one or two space dimensions with a fully implicit conservative update, and
ships executable checks of monotonicity, the comparison principle, the
discrete entropy inequality and the maximum-norm bound.
"""

from .errors import (
    ConfigError,
    DataError,
    DivergenceError,
    ImplicitMonotoneError,
    ModelError,
    SolverError,
)
from .flux import (
    FluxModel,
    NumericalFlux,
    burgers,
    cubic,
    entropy_flux,
    eval_godunov,
    eval_lax_friedrichs,
    eval_upwind,
    kruzhkov_flux,
    linear,
    make_numerical_flux,
    sine,
)
from .grid import (
    BoundaryPolicy,
    Ghost,
    GridSpec,
    StateField,
    discretize_initial,
    linear_index,
    multi_index,
    neighbor,
)
from .source import SourceModel, eval_source, stiff_bistable
from .stepper import SchemeConfig, SolverConfig, StepReport, assemble_jacobian, residual, run, step
from .verify import (
    ComparisonReport,
    EntropyReport,
    MonotonicityReport,
    check_comparison,
    check_discrete_entropy,
    check_flux_monotonicity,
    check_linf_stability,
    predicted_monotone,
)
from .experiments import (
    ErrorTable,
    ExperimentConfig,
    run_example1,
    run_example2,
    run_example3,
    run_lf2d_demo,
    run_verification_suite,
)

__version__ = "0.1.0"
