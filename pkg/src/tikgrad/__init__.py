"""First-order convex solvers with two-level Tikhonov regularization.

Fixed-step projected gradient and conditional gradient baselines converge in
objective value only; the two-level variants here (run_gprm, run_cgrm) drive
their iterates to the minimal-norm solution by solving a shrinking sequence
of strongly convex perturbed problems, with measurable iteration complexity.
The bench module bundles problems with known ground truth and the machinery
to check measured complexity against the closed-form bounds.
"""

from .core import (
    Array,
    FeasibleSet,
    LineSearchFailure,
    Objective,
    OracleCounters,
    OracleFailure,
    Problem,
    RunawayInnerLoop,
    as_vector,
    check_gradient,
    estimate_lipschitz_quadratic,
)
from .oracles import (
    BallSet,
    BoxSet,
    SimplexSet,
    lmo_ball,
    lmo_box,
    lmo_simplex,
    project_ball,
    project_box,
    project_simplex,
)
from .regularization import (
    GeometricSchedule,
    IterRegSchedule,
    PathCheckReport,
    PerturbedObjective,
    TikhonovRecord,
    iterreg_params,
    path_check,
    perturbed_value,
    schedule_params,
    tikhonov_path,
    tikhonov_solve,
)
from .solvers import (
    InnerSample,
    MethodConstants,
    OuterRecord,
    SolverTrace,
    StopPolicy,
    armijo_search,
    cgrm_constants,
    gprm_constants,
    run_cgm,
    run_cgrm,
    run_gpm,
    run_gprm,
    run_iterreg,
)
from .bench import (
    ComplexityReport,
    ConfigError,
    DEFAULT_ALPHA_GRID,
    ExperimentConfig,
    GeneratedProblem,
    bound_constants,
    bundled_problem,
    make_illposed_box,
    make_illposed_simplex,
    make_rankdef_lsq,
    measure_complexity,
    read_trace_csv,
    run_experiment,
    theoretical_bound,
    with_bounds,
    write_trace_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Array",
    "FeasibleSet",
    "LineSearchFailure",
    "Objective",
    "OracleCounters",
    "OracleFailure",
    "Problem",
    "RunawayInnerLoop",
    "as_vector",
    "check_gradient",
    "estimate_lipschitz_quadratic",
    "BallSet",
    "BoxSet",
    "SimplexSet",
    "lmo_ball",
    "lmo_box",
    "lmo_simplex",
    "project_ball",
    "project_box",
    "project_simplex",
    "GeometricSchedule",
    "IterRegSchedule",
    "PathCheckReport",
    "PerturbedObjective",
    "TikhonovRecord",
    "iterreg_params",
    "path_check",
    "perturbed_value",
    "schedule_params",
    "tikhonov_path",
    "tikhonov_solve",
    "InnerSample",
    "MethodConstants",
    "OuterRecord",
    "SolverTrace",
    "StopPolicy",
    "armijo_search",
    "cgrm_constants",
    "gprm_constants",
    "run_cgm",
    "run_cgrm",
    "run_gpm",
    "run_gprm",
    "run_iterreg",
    "ComplexityReport",
    "ConfigError",
    "DEFAULT_ALPHA_GRID",
    "ExperimentConfig",
    "GeneratedProblem",
    "bound_constants",
    "bundled_problem",
    "make_illposed_box",
    "make_illposed_simplex",
    "make_rankdef_lsq",
    "measure_complexity",
    "read_trace_csv",
    "run_experiment",
    "theoretical_bound",
    "with_bounds",
    "write_trace_csv",
    "__version__",
]
