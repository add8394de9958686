"""Benchmark harness: bundled problems, complexity bounds, experiment runner.

The generators build problems whose minimal-norm solution is known exactly
(by symmetry) or computed once by an independent high-accuracy oracle and
cross-checked from two starting points.  measure_complexity turns a solver
trace into N(alpha) counts on an accuracy grid and fits the growth exponent;
theoretical_bound evaluates the closed-form upper bound the two-level
methods must stay under.  run_experiment ties a validated config to a
bundled problem, runs the configured method, and serializes the trace as
CSV plus a JSON sidecar.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    Array,
    FeasibleSet,
    Objective,
    OracleFailure,
    Problem,
    as_vector,
    estimate_lipschitz_quadratic,
)
from .oracles import BoxSet, SimplexSet
from .regularization import GeometricSchedule, IterRegSchedule
from .solvers import (
    MethodConstants,
    OuterRecord,
    SolverTrace,
    StopPolicy,
    cgrm_constants,
    gprm_constants,
    run_cgm,
    run_cgrm,
    run_gpm,
    run_gprm,
    run_iterreg,
)

__all__ = [
    "ConfigError",
    "GeneratedProblem",
    "ExperimentConfig",
    "ComplexityReport",
    "DEFAULT_ALPHA_GRID",
    "METHODS",
    "make_illposed_box",
    "make_illposed_simplex",
    "make_rankdef_lsq",
    "bundled_problem",
    "bundled_labels",
    "default_start",
    "theoretical_bound",
    "bound_constants",
    "measure_complexity",
    "with_bounds",
    "run_experiment",
    "solver_constants",
    "write_trace_csv",
    "read_trace_csv",
    "write_sidecar",
    "sidecar_path",
]

METHODS = ("gpm", "cgm", "iterreg", "gprm", "cgrm")

# spans two decades of accuracy while keeping bundled runs under a second
DEFAULT_ALPHA_GRID = (0.1, 0.03, 0.01, 0.003, 0.001)


class ConfigError(ValueError):
    """Invalid experiment configuration; message lists field-level problems."""


@dataclass(frozen=True, eq=False)
class GeneratedProblem:
    """A Problem plus the analytic ground truth it was built from."""

    problem: Problem
    label: str
    analytic_L: float
    analytic_xstar_n: Array
    analytic_fstar: float
    dstar_description: str

    def __post_init__(self):
        if not (np.isfinite(self.analytic_L) and self.analytic_L > 0.0):
            raise ValueError("analytic_L must be positive")
        value = float(self.problem.objective.value_fn(self.analytic_xstar_n))
        if abs(value - self.analytic_fstar) > 1e-10:
            raise ValueError("f(x*_n) does not match f* within 1e-10")


def make_illposed_box(dim: int) -> GeneratedProblem:
    """f(x) = 0.5 (sum x - 1)^2 on [-1, 1]^dim.

    Every point of the hyperplane slice {sum x = 1} inside the box is a
    minimizer, so plain gradient methods stall wherever they first touch it;
    the minimal-norm solution is (1/dim, ..., 1/dim) by symmetry.  L = dim.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    ones = np.ones(dim)

    def value(x: Array) -> float:
        s = float(np.sum(x)) - 1.0
        return 0.5 * s * s

    def gradient(x: Array) -> Array:
        return (np.sum(x) - 1.0) * ones

    box = BoxSet(-np.ones(dim), np.ones(dim))
    xstar = ones / dim
    problem = Problem(
        objective=Objective(value, gradient, float(dim)),
        feasible_set=box.to_feasible_set(),
        known_fstar=0.0,
        known_xstar_n=xstar,
    )
    return GeneratedProblem(
        problem=problem,
        label=f"illposed_box({dim})",
        analytic_L=float(dim),
        analytic_xstar_n=xstar,
        analytic_fstar=0.0,
        dstar_description=f"{{x in [-1,1]^{dim} : sum(x) = 1}}",
    )


def make_illposed_simplex(dim: int) -> GeneratedProblem:
    """f(x) = 0.5 (x_1 - x_2)^2 on the unit simplex.

    Minimizers are the whole slice {x_1 = x_2}; the minimal-norm one is the
    barycenter.  L = 2 and the simplex gives the conditional-gradient
    methods their B = sqrt(2) diameter.
    """
    if dim < 3:
        raise ValueError("dim must be >= 3")
    direction = np.zeros(dim)
    direction[0] = 1.0
    direction[1] = -1.0

    def value(x: Array) -> float:
        t = float(x[0] - x[1])
        return 0.5 * t * t

    def gradient(x: Array) -> Array:
        return (x[0] - x[1]) * direction

    simplex = SimplexSet(dim)
    xstar = np.full(dim, 1.0 / dim)
    problem = Problem(
        objective=Objective(value, gradient, 2.0),
        feasible_set=simplex.to_feasible_set(),
        known_fstar=0.0,
        known_xstar_n=xstar,
    )
    return GeneratedProblem(
        problem=problem,
        label=f"illposed_simplex({dim})",
        analytic_L=2.0,
        analytic_xstar_n=xstar,
        analytic_fstar=0.0,
        dstar_description=f"{{x in unit simplex of R^{dim} : x_1 = x_2}}",
    )


def _dykstra(
    x0: Array,
    project_affine: Callable[[Array], Array],
    affine_residual: Callable[[Array], float],
    project_set: Callable[[Array], Array],
    tol: float = 1e-13,
    max_cycles: int = 50_000,
) -> Array:
    """Project x0 onto (affine set) & (feasible set) by Dykstra's scheme."""
    x = x0
    p = np.zeros_like(x0)
    q = np.zeros_like(x0)
    for _ in range(max_cycles):
        u = project_affine(x + p)
        p = x + p - u
        v = project_set(u + q)
        q = u + q - v
        if float(np.linalg.norm(v - x)) <= tol and affine_residual(v) <= 1e-11:
            return v
        x = v
    raise OracleFailure("Dykstra projection did not converge; intersection suspect")


def _minimal_norm_in_slice(A: Array, b_proj: Array, fs: FeasibleSet) -> Array:
    """argmin 0.5 ||x||^2 over {x in D : A x = b_proj}.

    Projected gradient with step 0.9 on the intersection, whose projection
    is itself computed by Dykstra on the two constraints.  Run from two
    starts; disagreement beyond 1e-8 means the ground truth cannot be
    trusted and the generator refuses to hand it out.
    """
    if fs.project_fn is None or fs.dimension is None:
        raise ValueError("rank-deficient generator needs a projection oracle with dimension")
    pinv = np.linalg.pinv(A)

    def project_affine(x: Array) -> Array:
        return x - pinv @ (A @ x - b_proj)

    def affine_residual(x: Array) -> float:
        return float(np.linalg.norm(A @ x - b_proj))

    def solve_from(start: Array) -> Array:
        x = _dykstra(start, project_affine, affine_residual, fs.project_fn)
        for _ in range(500):
            # gradient of 0.5||x||^2 is x; step 0.9 leaves the contraction 0.1*x
            x_new = _dykstra(0.1 * x, project_affine, affine_residual, fs.project_fn)
            if float(np.linalg.norm(x_new - x)) <= 1e-12:
                return x_new
            x = x_new
        raise OracleFailure("minimal-norm oracle did not reach tolerance 1e-10")

    n = fs.dimension
    za = solve_from(fs.project_fn(np.zeros(n)))
    zb = solve_from(fs.project_fn(np.full(n, 0.7)))
    if float(np.linalg.norm(za - zb)) > 1e-8:
        raise OracleFailure("minimal-norm oracle starts disagree; ground truth not trusted")
    return za


def make_rankdef_lsq(A: Array, b: Array, fs: FeasibleSet, label: Optional[str] = None) -> GeneratedProblem:
    """f(x) = 0.5 ||A x - b||^2 over the given set, A allowed rank-deficient.

    Requires the residual-minimal slice {A x = proj_range(A) b} to meet the
    set, so the solution set is the polyhedron D cap slice.  The
    minimal-norm solution is computed by _minimal_norm_in_slice and frozen
    into the returned problem as ground truth.
    """
    A = np.asarray(A, dtype=np.float64)
    b = as_vector(b)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError("A must be a matrix with rows matching b")
    if fs.dimension is not None and A.shape[1] != fs.dimension:
        raise ValueError("A columns must match the set dimension")
    At = np.ascontiguousarray(A.T)
    b_proj = A @ (np.linalg.pinv(A) @ b)

    def value(x: Array) -> float:
        r = A @ x - b
        return 0.5 * float(r @ r)

    def gradient(x: Array) -> Array:
        return At @ (A @ x - b)

    L = estimate_lipschitz_quadratic(A)
    if L <= 0.0:
        raise ValueError("A must be nonzero")
    xstar = _minimal_norm_in_slice(A, b_proj, fs)
    fstar = value(xstar)
    if label is None:
        label = f"rankdef_lsq({A.shape[0]}x{A.shape[1]})"
    problem = Problem(
        objective=Objective(value, gradient, L),
        feasible_set=fs,
        known_fstar=fstar,
        known_xstar_n=xstar,
    )
    return GeneratedProblem(
        problem=problem,
        label=label,
        analytic_L=L,
        analytic_xstar_n=xstar,
        analytic_fstar=fstar,
        dstar_description="{x in D : A x = proj_range(A)(b)}",
    )


_LABEL_RE = re.compile(r"^([a-z_]+)\((\d+)\)$")
_PROBLEM_CACHE: dict[str, GeneratedProblem] = {}


def bundled_labels() -> tuple[str, ...]:
    return (
        "illposed_box(dim)",
        "illposed_simplex(dim)",
        "rankdef_box(2)",
        "rankdef_simplex(3)",
        "wellposed_box(2)",
        "wellposed_simplex(3)",
    )


def bundled_problem(label: str) -> GeneratedProblem:
    """Label -> GeneratedProblem, memoized so oracle runs happen once."""
    cached = _PROBLEM_CACHE.get(label)
    if cached is not None:
        return cached
    m = _LABEL_RE.match(label)
    if m is None:
        raise ConfigError(f"problem_label: cannot parse {label!r}")
    name, dim = m.group(1), int(m.group(2))
    box2 = lambda: BoxSet(-np.ones(2), np.ones(2)).to_feasible_set()
    if name == "illposed_box":
        gp = make_illposed_box(dim)
    elif name == "illposed_simplex":
        gp = make_illposed_simplex(dim)
    elif name == "rankdef_box" and dim == 2:
        gp = make_rankdef_lsq(
            np.array([[1.0, 1.0], [0.0, 0.0]]), np.array([1.0, 0.0]), box2(), label
        )
    elif name == "rankdef_simplex" and dim == 3:
        gp = make_rankdef_lsq(
            np.array([[1.0, -1.0, 0.0], [0.0, 0.0, 0.0]]),
            np.zeros(2),
            SimplexSet(3).to_feasible_set(),
            label,
        )
    elif name == "wellposed_box" and dim == 2:
        gp = make_rankdef_lsq(
            np.diag([2.0, 1.0]), np.array([0.6, 0.4]), box2(), label
        )
    elif name == "wellposed_simplex" and dim == 3:
        gp = make_rankdef_lsq(
            np.eye(3), np.array([0.5, 0.3, 0.2]), SimplexSet(3).to_feasible_set(), label
        )
    else:
        raise ConfigError(f"problem_label: unknown label {label!r}")
    _PROBLEM_CACHE[label] = gp
    return gp


def default_start(gp: GeneratedProblem, method: str) -> Array:
    """Vertex start for LMO methods, projected origin otherwise."""
    fs = gp.problem.feasible_set
    if method in ("cgm", "cgrm"):
        if fs.lmo_fn is not None:
            return fs.lmo_fn(np.ones(fs.dimension))
    if fs.project_fn is not None and fs.dimension is not None:
        return fs.project_fn(np.zeros(fs.dimension))
    if fs.lmo_fn is not None and fs.dimension is not None:
        return fs.lmo_fn(np.ones(fs.dimension))
    raise ConfigError("x0: no default start available for this set")


def bound_constants(
    method: str, sched: GeometricSchedule, consts: MethodConstants, xstar_norm: float
) -> tuple[float, float]:
    """The (C1, C2) pair of the complexity bound for the given method."""
    s = 1.0 + 2.0 * sched.sigma
    e0 = sched.epsilon0
    if method == "gprm":
        C1 = 2.0 * (consts.Lprime + 1.0) ** 2 * e0**s + 0.5 * e0 * xstar_norm**2
    elif method == "cgrm":
        C1 = e0**s + 0.5 * e0 * xstar_norm**2
    else:
        raise ValueError("bound applies to gprm and cgrm only")
    C2 = C1 / (consts.beta * consts.gamma * e0 ** (2.0 * (1.0 + sched.sigma)))
    return C1, C2


def theoretical_bound(
    method: str,
    sched: GeometricSchedule,
    consts: MethodConstants,
    xstar_norm: float,
    alpha: float,
) -> float:
    """Closed-form upper bound on N(alpha) for the two-level methods.

    N(alpha) <= C2 ((C1/alpha)^(1+2 sigma) - 1) / (nu (1 - nu^(1+2 sigma))),
    with C1 method-specific and C2 = C1 / (beta gamma eps0^(2(1+sigma))).
    alpha >= C1 needs no outer iterations at all, so the bound is 0 there.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    C1, C2 = bound_constants(method, sched, consts, xstar_norm)
    if alpha >= C1:
        return 0.0
    s = 1.0 + 2.0 * sched.sigma
    return C2 * ((C1 / alpha) ** s - 1.0) / (sched.nu * (1.0 - sched.nu**s))


@dataclass(frozen=True)
class ComplexityReport:
    """Measured N(alpha) on a grid, with the matching theoretical bound."""

    alpha_grid: tuple[float, ...]
    measured_N: tuple[int, ...]
    attained: tuple[bool, ...]
    fitted_exponent: float
    bound_N: tuple[float, ...] = ()
    C1: float = math.nan
    C2: float = math.nan


def _fit_exponent(alpha_grid, measured, attained) -> float:
    xs, ys = [], []
    for a, n, ok in zip(alpha_grid, measured, attained):
        if ok and n >= 1:
            xs.append(math.log(1.0 / a))
            ys.append(math.log(float(n)))
    if len(xs) < 2:
        return math.nan
    return float(np.polyfit(np.asarray(xs), np.asarray(ys), 1)[0])


def measure_complexity(
    trace: SolverTrace,
    fstar: float,
    alpha_grid=DEFAULT_ALPHA_GRID,
    value_fn: Optional[Callable[[Array], float]] = None,
) -> ComplexityReport:
    """Count inner iterations N(alpha) for each accuracy on the grid.

    N(alpha) sums the inner counts through the last level l with
    Delta(w^l) >= alpha; if even the final record has Delta >= alpha the
    grid point is unattained (total count stored, excluded from the
    exponent fit).  Delta values come from the trace records, or from
    value_fn(w_l) - fstar when a value function is supplied.

    Parameters
    ----------
    trace : SolverTrace
        Must carry per-level Delta records (problem had known f*).
    fstar : real
        Optimal value, used only with value_fn.
    alpha_grid : decreasing positive reals
    value_fn : callable, optional
        Recompute Delta from the stored points instead of trusting records.
    """
    grid = tuple(float(a) for a in alpha_grid)
    if any(a <= 0.0 for a in grid) or any(
        grid[i] <= grid[i + 1] for i in range(len(grid) - 1)
    ):
        raise ValueError("alpha_grid must be positive and strictly decreasing")
    recs = [r for r in trace.outer_records if r.l >= 1]
    if not recs:
        raise ValueError("trace has no iteration records")
    if value_fn is not None:
        deltas = [float(value_fn(r.w_l)) - fstar for r in recs]
    else:
        deltas = [r.delta_wl for r in recs]
        if any(d is None for d in deltas):
            raise ValueError("trace lacks Delta records; pass value_fn")
    cums = [r.cum_inner for r in recs]
    measured, attained = [], []
    for a in grid:
        if deltas[-1] >= a:
            measured.append(cums[-1])
            attained.append(False)
            continue
        line = 0
        for i, d in enumerate(deltas):
            if d >= a:
                line = cums[i]
        measured.append(line)
        attained.append(True)
    return ComplexityReport(
        alpha_grid=grid,
        measured_N=tuple(int(n) for n in measured),
        attained=tuple(attained),
        fitted_exponent=_fit_exponent(grid, measured, attained),
    )


def with_bounds(
    report: ComplexityReport,
    method: str,
    sched: GeometricSchedule,
    consts: MethodConstants,
    xstar_norm: float,
) -> ComplexityReport:
    """Attach bound_N, C1, C2 to a measured report."""
    C1, C2 = bound_constants(method, sched, consts, xstar_norm)
    bounds = tuple(
        theoretical_bound(method, sched, consts, xstar_norm, a)
        for a in report.alpha_grid
    )
    return dataclasses.replace(report, bound_N=bounds, C1=C1, C2=C2)


@dataclass(frozen=True)
class ExperimentConfig:
    """One solver run, fully determined.

    Field names are exactly the keys accepted in config files.  Schedule
    fields are method-specific: (epsilon0, nu, sigma) for gprm/cgrm, tau
    for iterreg, lam for gpm, theta_k for cgm; the rest are ignored by
    methods that do not use them.
    """

    problem_label: str
    method: str
    epsilon0: float = 1.0
    nu: float = 0.5
    sigma: float = 0.5
    tau: float = 0.25
    lam: Optional[float] = None
    theta_k: Optional[float] = None
    beta: float = 0.5
    theta: float = 0.5
    epsilon_min: float = 1e-6
    max_outer: int = 60
    max_inner_per_l: int = 10**6
    max_linesearch_m: int = 60
    max_iter: int = 10_000
    seed: int = 0
    x0: Optional[tuple[float, ...]] = None
    output_path: Optional[str] = None


def _validate_config(cfg: ExperimentConfig) -> list[str]:
    errors = []
    if cfg.method not in METHODS:
        errors.append(f"method: must be one of {METHODS}")
    if not (np.isfinite(cfg.epsilon0) and cfg.epsilon0 > 0.0):
        errors.append("epsilon0: must be positive")
    if not (0.0 < cfg.nu < 1.0):
        errors.append("nu: must lie in (0, 1)")
    if not (0.0 < cfg.sigma <= 1.0):
        errors.append("sigma: must lie in (0, 1]")
    if not (0.0 < cfg.tau < 0.5):
        errors.append("tau: must lie in (0, 0.5)")
    if not (0.0 < cfg.beta < 1.0):
        errors.append("beta: must lie in (0, 1)")
    if not (0.0 < cfg.theta < 1.0):
        errors.append("theta: must lie in (0, 1)")
    if cfg.epsilon_min <= 0.0:
        errors.append("epsilon_min: must be positive")
    for name in ("max_outer", "max_inner_per_l", "max_linesearch_m", "max_iter"):
        if getattr(cfg, name) <= 0:
            errors.append(f"{name}: must be positive")
    if cfg.lam is not None and cfg.lam <= 0.0:
        errors.append("lam: must be positive")
    if cfg.theta_k is not None and cfg.theta_k <= 0.0:
        errors.append("theta_k: must be positive")
    if not isinstance(cfg.seed, int):
        errors.append("seed: must be an integer")
    return errors


def solver_constants(cfg: ExperimentConfig, gp: GeneratedProblem, x0: Array) -> Optional[MethodConstants]:
    """MethodConstants for the configured two-level method, else None."""
    if cfg.method == "gprm":
        return gprm_constants(gp.problem.objective.lipschitz_L, cfg.epsilon0, cfg.beta, cfg.theta)
    if cfg.method == "cgrm":
        return cgrm_constants(gp.problem, cfg.epsilon0, x0, cfg.beta, cfg.theta)
    return None


def run_experiment(cfg: ExperimentConfig) -> SolverTrace:
    """Validate, build, run, and (when output_path is set) serialize.

    Raises ConfigError before touching the solver if any field is out of
    its mandated interval; writes the CSV trace and its JSON sidecar next
    to each other at output_path.
    """
    errors = _validate_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))
    gp = bundled_problem(cfg.problem_label)
    L = gp.problem.objective.lipschitz_L
    # baseline steps default to 1/L once the problem fixes L
    lam = cfg.lam if cfg.lam is not None else 1.0 / L
    theta_k = cfg.theta_k if cfg.theta_k is not None else 1.0 / L
    if cfg.method == "gpm" and lam * L >= 2.0:
        raise ConfigError("lam: must satisfy lam < 2/L")
    if cfg.method == "cgm" and theta_k * L >= 2.0:
        raise ConfigError("theta_k: must satisfy theta_k < 2/L")
    if cfg.x0 is not None:
        x0 = as_vector(np.asarray(cfg.x0, dtype=np.float64))
        if gp.problem.feasible_set.dimension is not None and x0.shape[0] != gp.problem.feasible_set.dimension:
            raise ConfigError("x0: wrong dimension for the problem")
    else:
        x0 = default_start(gp, cfg.method)

    stop = StopPolicy(cfg.epsilon_min, cfg.max_outer, cfg.max_inner_per_l, cfg.max_linesearch_m)
    sched = GeometricSchedule(cfg.epsilon0, cfg.nu, cfg.sigma)
    consts = solver_constants(cfg, gp, x0)
    if cfg.method == "gpm":
        trace = run_gpm(gp.problem, lam, x0, cfg.max_iter)
    elif cfg.method == "cgm":
        trace = run_cgm(gp.problem, theta_k, x0, cfg.max_iter)
    elif cfg.method == "iterreg":
        trace = run_iterreg(gp.problem, IterRegSchedule(cfg.tau), x0, cfg.max_iter)
    elif cfg.method == "gprm":
        trace = run_gprm(gp.problem, sched, consts, x0, stop)
    else:
        trace = run_cgrm(gp.problem, sched, consts, x0, stop)

    if cfg.output_path is not None:
        write_trace_csv(trace, cfg.output_path)
        write_sidecar(cfg, gp, trace, consts, sidecar_path(cfg.output_path))
    return trace


TRACE_HEADER = ("l", "epsilon_l", "delta_l", "N_l", "delta_wl", "dist_xstar", "cum_inner")


def _cell(v) -> str:
    if v is None:
        return ""
    # repr of a Python float is its shortest round-trip decimal form
    return repr(float(v))


def write_trace_csv(trace: SolverTrace, path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for r in trace.outer_records:
            writer.writerow(
                [str(r.l), _cell(r.epsilon_l), _cell(r.delta_l), str(r.N_l),
                 _cell(r.delta_wl), _cell(r.dist_xstar), str(r.cum_inner)]
            )


def read_trace_csv(path: str) -> list[dict]:
    """Rows of the trace CSV with numeric fields parsed back (None for empty)."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != list(TRACE_HEADER):
            raise ValueError(f"unexpected trace header in {path}")
        for raw in reader:
            rows.append(
                {
                    "l": int(raw["l"]),
                    "epsilon_l": float(raw["epsilon_l"]) if raw["epsilon_l"] else None,
                    "delta_l": float(raw["delta_l"]) if raw["delta_l"] else None,
                    "N_l": int(raw["N_l"]),
                    "delta_wl": float(raw["delta_wl"]) if raw["delta_wl"] else None,
                    "dist_xstar": float(raw["dist_xstar"]) if raw["dist_xstar"] else None,
                    "cum_inner": int(raw["cum_inner"]),
                }
            )
    return rows


def sidecar_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".json"


def write_sidecar(
    cfg: ExperimentConfig,
    gp: GeneratedProblem,
    trace: SolverTrace,
    consts: Optional[MethodConstants],
    path: str,
) -> None:
    """JSON companion to the CSV: full config, derived constants, counters."""
    constants: dict = {"beta": cfg.beta, "theta": cfg.theta, "nu": cfg.nu, "sigma": cfg.sigma}
    if consts is not None:
        sched = GeometricSchedule(cfg.epsilon0, cfg.nu, cfg.sigma)
        xnorm = float(np.linalg.norm(gp.analytic_xstar_n))
        C1, C2 = bound_constants(cfg.method, sched, consts, xnorm)
        constants.update(gamma=consts.gamma, Lprime=consts.Lprime, C1=C1, C2=C2)
    else:
        constants.update(gamma=None, Lprime=None, C1=None, C2=None)
    payload = {
        "config": dataclasses.asdict(cfg),
        "problem": {
            "label": gp.label,
            "analytic_L": gp.analytic_L,
            "analytic_fstar": gp.analytic_fstar,
            "analytic_xstar_n": [float(v) for v in gp.analytic_xstar_n],
            "dstar_description": gp.dstar_description,
        },
        "constants": constants,
        "counters": trace.counters.as_dict(),
        "min_observed_lambda": (
            trace.min_observed_lambda if math.isfinite(trace.min_observed_lambda) else None
        ),
        "outer_levels": len([r for r in trace.outer_records if r.l >= 1]),
    }
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
