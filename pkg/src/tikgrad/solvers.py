"""First-order methods under test, instrumented with per-run traces.

Five methods share the container types here:

* run_gpm       fixed-step projected gradient (baseline, weak convergence)
* run_iterreg   single-loop iteratively regularized projected gradient
* run_gprm      two-level regularized gradient projection
* run_cgm       conditional gradient with the analytic step rule (baseline)
* run_cgrm      two-level regularized conditional gradient

The two-level methods run an inner Armijo loop on the perturbed objective
phi_eps_l until a displacement (gprm) or duality-gap (cgrm) test signals
that the current level is solved to accuracy delta_l, then shrink eps.
Traces record one row per outer level (or per iteration for the single-loop
baselines), the first few inner iterates for certificate checks, and the
smallest accepted line-search multiplier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    Array,
    LineSearchFailure,
    OracleCounters,
    Problem,
    RunawayInnerLoop,
    as_vector,
)
from .regularization import GeometricSchedule, IterRegSchedule, PerturbedObjective

__all__ = [
    "DEFAULT_BETA",
    "DEFAULT_THETA",
    "MethodConstants",
    "StopPolicy",
    "OuterRecord",
    "InnerSample",
    "SolverTrace",
    "gprm_constants",
    "cgrm_constants",
    "armijo_search",
    "run_gpm",
    "run_iterreg",
    "run_gprm",
    "run_cgm",
    "run_cgrm",
]

DEFAULT_BETA = 0.5
DEFAULT_THETA = 0.5


@dataclass(frozen=True)
class MethodConstants:
    """Line-search parameters and the derived step lower bound gamma.

    gamma is the theoretical floor for every accepted Armijo multiplier:
      gradient projection:    gamma = min{1, theta * 2(1-beta) / L'}
      conditional gradient:   gamma = min{theta, 2(1-beta)/(L' B^2), 1/(L'' B)}
    Build instances through gprm_constants / cgrm_constants so the formula
    matches the method.
    """

    beta: float
    theta: float
    gamma: float
    Lprime: float
    Ldoubleprime: Optional[float] = None
    B: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise ValueError("beta must lie in (0, 1)")
        if not (0.0 < self.theta < 1.0):
            raise ValueError("theta must lie in (0, 1)")
        if not (np.isfinite(self.gamma) and self.gamma > 0.0):
            raise ValueError("gamma must be positive")
        if not (np.isfinite(self.Lprime) and self.Lprime > 0.0):
            raise ValueError("Lprime must be positive")


def gprm_constants(
    lipschitz_L: float,
    epsilon0: float,
    beta: float = DEFAULT_BETA,
    theta: float = DEFAULT_THETA,
) -> MethodConstants:
    """Constants for the gradient-projection variant: L' = L + eps0."""
    Lprime = lipschitz_L + epsilon0
    gamma = min(1.0, theta * 2.0 * (1.0 - beta) / Lprime)
    return MethodConstants(beta=beta, theta=theta, gamma=gamma, Lprime=Lprime)


def cgrm_constants(
    problem: Problem,
    epsilon0: float,
    w0: Array,
    beta: float = DEFAULT_BETA,
    theta: float = DEFAULT_THETA,
) -> MethodConstants:
    """Constants for the conditional-gradient variant.

    The gap bound mu <= L'' B uses the start point w0 as its reference:
    L'' = ||f'(w0)|| + eps0 ||w0|| + L' B.  Any feasible reference is valid;
    w0 keeps the constants deterministic per run.
    """
    B = problem.feasible_set.diameter_B
    if B is None:
        raise ValueError("conditional-gradient constants need diameter_B")
    w0 = as_vector(w0)
    Lprime = problem.objective.lipschitz_L + epsilon0
    gnorm = float(np.linalg.norm(problem.objective.gradient_fn(w0)))
    Ldoubleprime = gnorm + epsilon0 * float(np.linalg.norm(w0)) + Lprime * B
    gamma = min(
        theta,
        2.0 * (1.0 - beta) / (Lprime * B * B),
        1.0 / (Ldoubleprime * B),
    )
    return MethodConstants(
        beta=beta, theta=theta, gamma=gamma, Lprime=Lprime, Ldoubleprime=Ldoubleprime, B=B
    )


@dataclass(frozen=True)
class StopPolicy:
    """When to halt loops that the underlying theory lets run forever."""

    epsilon_min: float = 1e-6
    max_outer: int = 60
    max_inner_per_l: int = 10**6
    max_linesearch_m: int = 60

    def __post_init__(self):
        if self.epsilon_min <= 0.0 or self.max_outer <= 0:
            raise ValueError("epsilon_min and max_outer must be positive")
        if self.max_inner_per_l <= 0 or self.max_linesearch_m <= 0:
            raise ValueError("iteration caps must be positive")


@dataclass
class OuterRecord:
    """One completed outer level (or one iteration of a single-loop method)."""

    l: int
    epsilon_l: Optional[float]
    delta_l: Optional[float]
    N_l: int
    w_l: Array
    phi_gap: Optional[float] = None
    delta_wl: Optional[float] = None
    dist_xstar: Optional[float] = None
    cum_inner: int = 0


@dataclass
class InnerSample:
    """An early inner iterate kept for certificate checks."""

    level: int
    k: int
    epsilon: float
    x: Array
    y: Array
    mu: Optional[float] = None
    lam: Optional[float] = None


@dataclass
class SolverTrace:
    method: str
    outer_records: list[OuterRecord]
    counters: OracleCounters
    min_observed_lambda: float = math.inf
    inner_samples: list[InnerSample] = field(default_factory=list)
    mu_history: Optional[list[float]] = None

    @property
    def final_point(self) -> Array:
        if not self.outer_records:
            raise ValueError("trace has no records")
        return self.outer_records[-1].w_l


def _armijo(
    phi_value: Callable[[Array], float],
    x: Array,
    d: Array,
    beta: float,
    theta: float,
    quad_coeff: float,
    cap: Optional[float],
    max_m: int,
    phi_at_x: Optional[float] = None,
) -> tuple[int, float, Array, float, int]:
    """Shared backtracking core.

    Trial point is x + theta^m * d, or x + theta^m * cap * d when a unit-step
    cap is given (then powers with theta^m * cap > 1 are skipped unevaluated).
    Returns (m, theta^m, accepted point, its phi value, number of trial
    evaluations).
    """
    if phi_at_x is None:
        phi_at_x = phi_value(x)
    step = 1.0
    trials = 0
    for m in range(max_m + 1):
        if cap is None or step * cap <= 1.0:
            t = step if cap is None else step * cap
            x_new = x + t * d
            val = phi_value(x_new)
            trials += 1
            if val <= phi_at_x - beta * step * quad_coeff:
                return m, step, x_new, val, trials
        step *= theta
    raise LineSearchFailure(
        f"no sufficient decrease within {max_m} backtracking steps; "
        "gradient or Lipschitz data is suspect"
    )


def armijo_search(
    phi: PerturbedObjective,
    x: Array,
    d: Array,
    beta: float,
    theta: float,
    quad_coeff: float,
    cap_condition: Optional[float] = None,
    max_m: int = 60,
) -> tuple[int, float]:
    """Smallest m with phi(trial_m) <= phi(x) - beta * theta^m * quad_coeff.

    quad_coeff is ||d||^2 for gradient-projection steps and mu^2 for
    conditional-gradient steps; cap_condition, when given, is the gap mu and
    additionally requires theta^m * mu <= 1 (trial point x + theta^m mu d).
    Returns (m, theta^m).
    """
    if not (0.0 < beta < 1.0 and 0.0 < theta < 1.0):
        raise ValueError("beta and theta must lie in (0, 1)")
    d = np.asarray(d, dtype=np.float64)
    if not np.any(d):
        raise ValueError("direction d must be nonzero")
    m, lam, _, _, _ = _armijo(
        phi.value, np.asarray(x, dtype=np.float64), d, beta, theta, quad_coeff,
        cap_condition, max_m,
    )
    return m, lam


def _require_feasible(problem: Problem, x: Array, who: str) -> Array:
    x = as_vector(x)
    fs = problem.feasible_set
    if fs.membership_fn is not None and not fs.contains(x, 1e-10):
        raise ValueError(f"{who} is not feasible at tolerance 1e-10")
    return x


def _deltaf(problem: Problem, x: Array) -> Optional[float]:
    if problem.known_fstar is None:
        return None
    return float(problem.objective.value_fn(x)) - problem.known_fstar


def _dist_xstar(problem: Problem, x: Array) -> Optional[float]:
    if problem.known_xstar_n is None:
        return None
    return float(np.linalg.norm(x - problem.known_xstar_n))


def run_gpm(problem: Problem, lam: float, x0: Array, max_iter: int) -> SolverTrace:
    """Projected gradient with a fixed step, x <- P(x - lam * f'(x)).

    Requires 0 < lam < 2/L.  Converges in objective value but the iterates
    may stall at any minimizer, not the minimal-norm one; that failure mode
    is exactly what the regularized methods exist to fix.
    """
    L = problem.objective.lipschitz_L
    if not (lam > 0.0 and lam * L < 2.0):
        raise ValueError("need 0 < lam < 2/L")
    project = problem.feasible_set.project_fn
    if project is None:
        raise ValueError("run_gpm needs a projection oracle")
    x = _require_feasible(problem, x0, "x0")
    grad = problem.objective.gradient_fn
    counters = OracleCounters()
    records = [
        OuterRecord(0, None, None, 0, x.copy(), delta_wl=_deltaf(problem, x),
                    dist_xstar=_dist_xstar(problem, x), cum_inner=0)
    ]
    for k in range(1, max_iter + 1):
        g = grad(x)
        counters.gradient_evals += 1
        x = project(x - lam * g)
        counters.projections += 1
        counters.inner_iterations += 1
        records.append(
            OuterRecord(k, None, None, 1, x.copy(), delta_wl=_deltaf(problem, x),
                        dist_xstar=_dist_xstar(problem, x), cum_inner=k)
        )
    return SolverTrace("gpm", records, counters, min_observed_lambda=lam)


def run_iterreg(problem: Problem, sched: IterRegSchedule, x0: Array, max_iter: int) -> SolverTrace:
    """Iteratively regularized projected gradient, single loop.

    x <- P(x - lambda_k (f'(x) + eps_k x)) with the schedule's decaying
    lambda_k and eps_k.  Converges to the minimal-norm solution without an
    outer loop, at the cost of having no complexity guarantee.
    """
    project = problem.feasible_set.project_fn
    if project is None:
        raise ValueError("run_iterreg needs a projection oracle")
    x = _require_feasible(problem, x0, "x0")
    grad = problem.objective.gradient_fn
    counters = OracleCounters()
    records = [
        OuterRecord(0, None, None, 0, x.copy(), delta_wl=_deltaf(problem, x),
                    dist_xstar=_dist_xstar(problem, x), cum_inner=0)
    ]
    min_lam = math.inf
    for k in range(max_iter):
        lam_k, eps_k = sched.params(k)
        g = grad(x) + eps_k * x
        counters.gradient_evals += 1
        x = project(x - lam_k * g)
        counters.projections += 1
        counters.inner_iterations += 1
        min_lam = min(min_lam, lam_k)
        records.append(
            OuterRecord(k + 1, eps_k, None, 1, x.copy(), delta_wl=_deltaf(problem, x),
                        dist_xstar=_dist_xstar(problem, x), cum_inner=k + 1)
        )
    return SolverTrace("iterreg", records, counters, min_observed_lambda=min_lam)


def run_gprm(
    problem: Problem,
    sched: GeometricSchedule,
    consts: MethodConstants,
    w0: Array,
    stop: Optional[StopPolicy] = None,
    samples_per_level: int = 4,
) -> SolverTrace:
    """Two-level regularized gradient projection.

    Outer level l solves min phi_eps_l over D approximately: the inner loop
    takes unit-step projected-gradient candidates y = P(x - phi'(x)) and
    Armijo-damped steps along d = y - x until ||x - y|| <= delta_l, then
    hands the better of x and y (ties to y) to the next level as its warm
    start.  With the geometric schedule the handoff points track the
    Tikhonov path and converge to the minimal-norm solution.

    Parameters
    ----------
    problem : Problem
        Needs a projection oracle.
    sched : GeometricSchedule
        Supplies (eps_l, delta_l); sched.epsilon0 must match the epsilon0
        baked into consts.Lprime.
    consts : MethodConstants
        From gprm_constants.
    w0 : array
        Feasible start.
    stop : StopPolicy, optional
        Halts when eps_l < epsilon_min or l > max_outer.
    samples_per_level : int
        How many early inner iterates of each level to keep on the trace.
    """
    stop = stop if stop is not None else StopPolicy()
    project = problem.feasible_set.project_fn
    if project is None:
        raise ValueError("run_gprm needs a projection oracle")
    if consts.Lprime < problem.objective.lipschitz_L:
        raise ValueError("consts.Lprime is below the objective's Lipschitz constant")
    w = _require_feasible(problem, w0, "w0")
    base_value = problem.objective.value_fn
    grad = problem.objective.gradient_fn
    beta, theta, max_m = consts.beta, consts.theta, stop.max_linesearch_m

    counters = OracleCounters()
    records: list[OuterRecord] = []
    samples: list[InnerSample] = []
    min_lambda = math.inf
    cum_inner = 0
    l = 1
    while True:
        eps, delta = sched.params(l)
        if eps < stop.epsilon_min or l > stop.max_outer:
            break

        def phi_val(v: Array, _e: float = eps) -> float:
            return float(base_value(v)) + 0.5 * _e * float(v @ v)

        x = w
        phi_x: Optional[float] = None
        N_l = 0
        level_samples = 0
        while True:
            g = grad(x) + eps * x
            counters.gradient_evals += 1
            y = project(x - g)
            counters.projections += 1
            d = y - x
            dn2 = float(d @ d)
            sampled = level_samples < samples_per_level
            if sampled:
                samples.append(InnerSample(l, N_l, eps, x.copy(), y.copy()))
                level_samples += 1
            if math.sqrt(dn2) <= delta:
                # handoff test fired: keep the better perturbed value, ties to y
                w = y if phi_val(y) <= phi_val(x) else x
                break
            if N_l >= stop.max_inner_per_l:
                raise RunawayInnerLoop(
                    f"level {l} exceeded {stop.max_inner_per_l} inner iterations"
                )
            m, lam, x, phi_x, trials = _armijo(
                phi_val, x, d, beta, theta, dn2, None, max_m, phi_x
            )
            counters.linesearch_trials += trials
            if lam < min_lambda:
                min_lambda = lam
            if sampled:
                samples[-1].lam = lam
            N_l += 1
        counters.inner_iterations += N_l
        cum_inner += N_l
        records.append(
            OuterRecord(l, eps, delta, N_l, w.copy(), delta_wl=_deltaf(problem, w),
                        dist_xstar=_dist_xstar(problem, w), cum_inner=cum_inner)
        )
        l += 1
    return SolverTrace("gprm", records, counters, min_observed_lambda=min_lambda,
                       inner_samples=samples)


def run_cgm(problem: Problem, theta_k: float, x0: Array, max_iter: int) -> SolverTrace:
    """Conditional gradient with the analytic step lambda = min{1, theta_k beta_k}.

    beta_k = -<f'(x), d>/||d||^2 measures how far the unconstrained minimum
    along the vertex direction lies; theta_k must stay below 2/L for the C/k
    value rate.  Stops early if the LMO reproduces the current iterate.
    """
    L = problem.objective.lipschitz_L
    if not (theta_k > 0.0 and theta_k * L < 2.0):
        raise ValueError("need 0 < theta_k < 2/L")
    fs = problem.feasible_set
    if fs.lmo_fn is None or fs.diameter_B is None:
        raise ValueError("run_cgm needs an LMO over a bounded set")
    lmo = fs.lmo_fn
    x = _require_feasible(problem, x0, "x0")
    grad = problem.objective.gradient_fn
    counters = OracleCounters()
    records = [
        OuterRecord(0, None, None, 0, x.copy(), delta_wl=_deltaf(problem, x),
                    dist_xstar=_dist_xstar(problem, x), cum_inner=0)
    ]
    min_lam = math.inf
    for k in range(1, max_iter + 1):
        g = grad(x)
        counters.gradient_evals += 1
        y = lmo(g)
        counters.lmo_calls += 1
        d = y - x
        if not np.any(d):
            break
        dn2 = float(d @ d)
        beta_k = -float(g @ d) / dn2
        lam = min(1.0, theta_k * beta_k)
        x = x + lam * d
        counters.inner_iterations += 1
        min_lam = min(min_lam, lam)
        records.append(
            OuterRecord(k, None, None, 1, x.copy(), delta_wl=_deltaf(problem, x),
                        dist_xstar=_dist_xstar(problem, x), cum_inner=k)
        )
    return SolverTrace("cgm", records, counters, min_observed_lambda=min_lam)


def run_cgrm(
    problem: Problem,
    sched: GeometricSchedule,
    consts: MethodConstants,
    w0: Array,
    stop: Optional[StopPolicy] = None,
    samples_per_level: int = 4,
) -> SolverTrace:
    """Two-level regularized conditional gradient.

    Inner loop on level l: take the LMO vertex y for phi'_eps_l(x), form the
    duality gap mu = -<phi'(x), y - x>, and stop the level once mu <= delta_l
    (the gap upper-bounds the perturbed optimality gap, so this certifies
    level accuracy); otherwise move x + theta^m mu (y - x) with the Armijo
    power m, capped so the multiplier never exceeds 1 and iterates stay
    inside the set.  The handoff point is x itself, not the vertex.
    """
    stop = stop if stop is not None else StopPolicy()
    fs = problem.feasible_set
    if fs.lmo_fn is None:
        raise ValueError("run_cgrm needs an LMO")
    if fs.diameter_B is None:
        raise ValueError("run_cgrm needs diameter_B")
    if consts.Lprime < problem.objective.lipschitz_L:
        raise ValueError("consts.Lprime is below the objective's Lipschitz constant")
    lmo = fs.lmo_fn
    w = _require_feasible(problem, w0, "w0")
    base_value = problem.objective.value_fn
    grad = problem.objective.gradient_fn
    beta, theta, max_m = consts.beta, consts.theta, stop.max_linesearch_m

    counters = OracleCounters()
    records: list[OuterRecord] = []
    samples: list[InnerSample] = []
    mu_history: list[float] = []
    min_lambda = math.inf
    cum_inner = 0
    l = 1
    while True:
        eps, delta = sched.params(l)
        if eps < stop.epsilon_min or l > stop.max_outer:
            break

        def phi_val(v: Array, _e: float = eps) -> float:
            return float(base_value(v)) + 0.5 * _e * float(v @ v)

        x = w
        phi_x: Optional[float] = None
        N_l = 0
        level_samples = 0
        while True:
            g = grad(x) + eps * x
            counters.gradient_evals += 1
            y = lmo(g)
            counters.lmo_calls += 1
            d = y - x
            mu = -float(g @ d)
            mu_history.append(mu)
            sampled = level_samples < samples_per_level
            if sampled:
                samples.append(InnerSample(l, N_l, eps, x.copy(), y.copy(), mu=mu))
                level_samples += 1
            if mu <= delta:
                w = x
                break
            if N_l >= stop.max_inner_per_l:
                raise RunawayInnerLoop(
                    f"level {l} exceeded {stop.max_inner_per_l} inner iterations"
                )
            m, lam, x, phi_x, trials = _armijo(
                phi_val, x, d, beta, theta, mu * mu, mu, max_m, phi_x
            )
            counters.linesearch_trials += trials
            if lam < min_lambda:
                min_lambda = lam
            if sampled:
                samples[-1].lam = lam
            N_l += 1
        counters.inner_iterations += N_l
        cum_inner += N_l
        records.append(
            OuterRecord(l, eps, delta, N_l, w.copy(), delta_wl=_deltaf(problem, w),
                        dist_xstar=_dist_xstar(problem, w), cum_inner=cum_inner)
        )
        l += 1
    return SolverTrace("cgrm", records, counters, min_observed_lambda=min_lambda,
                       inner_samples=samples, mu_history=mu_history)
