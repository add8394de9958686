"""Tikhonov perturbation, regularization schedules, and the path oracle.

The perturbed objective phi_eps(x) = f(x) + 0.5 * eps * ||x||^2 is strongly
convex for eps > 0 and has a unique constrained minimizer z(eps).  As eps
decreases, z(eps) traces a path that converges to the minimal-norm solution
of the original problem.  tikhonov_solve computes points on this path to
high accuracy and serves as the ground-truth oracle for every solver test;
it deliberately uses a plain fixed-step projected-gradient loop so that it
shares no code with the solvers it certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import Array, OracleFailure, Problem, Objective, as_vector

__all__ = [
    "PerturbedObjective",
    "GeometricSchedule",
    "IterRegSchedule",
    "TikhonovRecord",
    "PathCheckReport",
    "perturbed_value",
    "schedule_params",
    "iterreg_params",
    "tikhonov_solve",
    "tikhonov_path",
    "path_check",
]


@dataclass(frozen=True, eq=False)
class PerturbedObjective:
    """View of a base objective with a quadratic Tikhonov term folded in.

    epsilon is the weight actually applied; epsilon0 is the largest weight of
    the surrounding schedule and fixes the uniform gradient Lipschitz bound
    L' = L + epsilon0 used by step-size rules across all levels.
    """

    base: Objective
    epsilon: float
    epsilon0: float

    def __post_init__(self):
        if not (np.isfinite(self.epsilon0) and self.epsilon0 > 0.0):
            raise ValueError("epsilon0 must be positive")
        if not (0.0 <= self.epsilon <= self.epsilon0):
            raise ValueError("need 0 <= epsilon <= epsilon0")

    @property
    def lipschitz_Lprime(self) -> float:
        return self.base.lipschitz_L + self.epsilon0

    def value(self, x: Array) -> float:
        return float(self.base.value_fn(x)) + 0.5 * self.epsilon * float(x @ x)

    def gradient(self, x: Array) -> Array:
        return self.base.gradient_fn(x) + self.epsilon * x


def perturbed_value(p: PerturbedObjective, x: Array) -> float:
    """f(x) + 0.5 * epsilon * ||x||^2 for the perturbation p."""
    return p.value(x)


@dataclass(frozen=True)
class GeometricSchedule:
    """Outer-level rule eps_l = nu^l * eps0, delta_l = eps_l^(1 + sigma).

    delta_l / eps_l = eps_l^sigma -> 0, which is exactly the coupling the
    two-level solvers need for their handoff tests to stay meaningful.
    """

    epsilon0: float = 1.0
    nu: float = 0.5
    sigma: float = 0.5

    def __post_init__(self):
        if not (np.isfinite(self.epsilon0) and self.epsilon0 > 0.0):
            raise ValueError("epsilon0 must be positive")
        if not (0.0 < self.nu < 1.0):
            raise ValueError("nu must lie in (0, 1)")
        if not (0.0 < self.sigma <= 1.0):
            raise ValueError("sigma must lie in (0, 1]")

    def params(self, l: int) -> tuple[float, float]:
        if l < 0:
            raise ValueError("level index must be non-negative")
        eps = self.epsilon0 * self.nu**l
        return eps, eps ** (1.0 + self.sigma)


@dataclass(frozen=True)
class IterRegSchedule:
    """Single-loop rule lambda_k = (k+1)^(-1/2), eps_k = (k+1)^(-tau).

    tau in (0, 1/2) keeps lambda_k / eps_k -> 0 while sum(lambda_k * eps_k)
    diverges, the combination required for iterative regularization.
    """

    tau: float = 0.25

    def __post_init__(self):
        if not (0.0 < self.tau < 0.5):
            raise ValueError("tau must lie in (0, 0.5)")

    def params(self, k: int) -> tuple[float, float]:
        if k < 0:
            raise ValueError("iteration index must be non-negative")
        return (k + 1.0) ** -0.5, (k + 1.0) ** -self.tau


def schedule_params(schedule: GeometricSchedule, l: int) -> tuple[float, float]:
    """(eps_l, delta_l) for outer level l."""
    return schedule.params(l)


def iterreg_params(schedule: IterRegSchedule, k: int) -> tuple[float, float]:
    """(lambda_k, eps_k) for iteration k."""
    return schedule.params(k)


@dataclass(frozen=True, eq=False)
class TikhonovRecord:
    """A certified point on the regularization path.

    residual is the fixed-point gap ||z - P(z - grad phi_eps(z))|| with unit
    internal step; anything above 1e-10 is not accepted as ground truth.
    """

    epsilon: float
    z: Array
    residual: float

    def __post_init__(self):
        if not (0.0 <= self.residual <= 1e-10):
            raise ValueError("residual exceeds the certification threshold 1e-10")


def tikhonov_solve(
    problem: Problem,
    epsilon: float,
    tol: float = 1e-11,
    x0: Optional[Array] = None,
    max_iter: int = 10_000_000,
) -> TikhonovRecord:
    """Minimize phi_eps over the feasible set to fixed-point residual <= tol.

    Runs projected gradient with the safe constant step 1/(L + eps) until the
    unit-step residual ||x - P(x - grad phi_eps(x))|| drops below tol.  The
    residual scaled by the step is monotone in the step length, so the damped
    per-iteration displacement gives a certified trigger for the unit-step
    check without extra projections.

    Parameters
    ----------
    problem : Problem
        Must carry a projection oracle.
    epsilon : float
        Positive Tikhonov weight.
    tol : float
        Residual target, restricted to [1e-12, 1e-10] so that every returned
        record qualifies as ground truth.
    x0 : array, optional
        Warm start; projected onto the set before use.  Defaults to P(0).
    max_iter : int
        Hard cap; exceeding it raises OracleFailure, which usually means the
        declared Lipschitz constant is wrong.
    """
    if not (np.isfinite(epsilon) and epsilon > 0.0):
        raise ValueError("epsilon must be positive")
    if not (1e-12 <= tol <= 1e-10):
        raise ValueError("tol must lie in [1e-12, 1e-10]")
    project = problem.feasible_set.project_fn
    if project is None:
        raise ValueError("tikhonov_solve needs a projection oracle")

    if x0 is None:
        if problem.feasible_set.dimension is None:
            raise ValueError("pass x0 explicitly: the feasible set has no dimension hint")
        x = project(np.zeros(problem.feasible_set.dimension))
    else:
        x = project(as_vector(x0))

    grad = problem.objective.gradient_fn
    step = 1.0 / (problem.objective.lipschitz_L + epsilon)

    for k in range(max_iter):
        g = grad(x) + epsilon * x
        y = project(x - step * g)
        moved = float(np.linalg.norm(x - y))
        # ||x - P(x - s g)|| / s is non-increasing in s, so moved <= step*tol
        # certifies the unit-step residual; the periodic check catches early
        # satisfaction that the damped trigger would miss.
        if moved <= step * tol or k % 64 == 0:
            residual = float(np.linalg.norm(x - project(x - g)))
            if residual <= tol:
                return TikhonovRecord(epsilon=epsilon, z=x, residual=residual)
        x = y
    raise OracleFailure(
        f"no convergence within {max_iter} iterations at eps={epsilon!r}; "
        "check the objective's lipschitz_L"
    )


def tikhonov_path(
    problem: Problem,
    epsilons: Sequence[float],
    tol: float = 1e-11,
) -> list[TikhonovRecord]:
    """Solve along a grid of weights, warm-starting each solve at the last z."""
    records: list[TikhonovRecord] = []
    x: Optional[Array] = None
    for eps in epsilons:
        rec = tikhonov_solve(problem, float(eps), tol=tol, x0=x)
        records.append(rec)
        x = rec.z
    return records


@dataclass(frozen=True)
class PathCheckReport:
    """Outcome of the three pairwise path inequalities for 0 <= mu < eta.

    Each slack is (left side) - (right side); the check passes when the slack
    is at most the allowed tolerance.
    """

    value_decrease_ok: bool
    optimal_value_ok: bool
    norm_monotone_ok: bool
    value_decrease_slack: float
    optimal_value_slack: float
    norm_monotone_slack: float

    @property
    def all_ok(self) -> bool:
        return self.value_decrease_ok and self.optimal_value_ok and self.norm_monotone_ok


def path_check(
    problem: Problem,
    mu: float,
    eta: float,
    tol: float = 1e-8,
    oracle_tol: float = 1e-11,
    z_mu: Optional[Array] = None,
    z_eta: Optional[Array] = None,
) -> PathCheckReport:
    """Verify the comparison inequalities between path points z(mu) and z(eta).

    For 0 <= mu < eta the path satisfies
      f(z(eta)) - f(z(mu))          <=  0.5 * eta * (||z(mu)||^2 - ||z(eta)||^2)
      phi*_eta  - phi*_mu           <=  0.5 * (eta - mu) * ||z(mu)||^2
      ||z(eta)||                    <=  ||z(mu)||
    where phi*_eps is the optimal perturbed value.  mu = 0 refers to the
    minimal-norm solution and requires known_xstar_n on the problem.  Points
    may be passed in to reuse cached oracle output; otherwise they are
    computed here at oracle_tol.
    """
    if not (0.0 <= mu < eta):
        raise ValueError("need 0 <= mu < eta")
    value = problem.objective.value_fn

    if z_mu is None:
        if mu == 0.0:
            if problem.known_xstar_n is None:
                raise ValueError("mu = 0 needs known_xstar_n as the path limit")
            z_mu = problem.known_xstar_n
        else:
            z_mu = tikhonov_solve(problem, mu, tol=oracle_tol).z
    if z_eta is None:
        z_eta = tikhonov_solve(problem, eta, tol=oracle_tol, x0=z_mu).z

    f_mu = float(value(z_mu))
    f_eta = float(value(z_eta))
    nsq_mu = float(z_mu @ z_mu)
    nsq_eta = float(z_eta @ z_eta)

    s_value = (f_eta - f_mu) - 0.5 * eta * (nsq_mu - nsq_eta)
    phi_mu = f_mu + 0.5 * mu * nsq_mu
    phi_eta = f_eta + 0.5 * eta * nsq_eta
    s_opt = (phi_eta - phi_mu) - 0.5 * (eta - mu) * nsq_mu
    s_norm = float(np.sqrt(nsq_eta)) - float(np.sqrt(nsq_mu))

    return PathCheckReport(
        value_decrease_ok=s_value <= tol,
        optimal_value_ok=s_opt <= tol,
        norm_monotone_ok=s_norm <= tol,
        value_decrease_slack=s_value,
        optimal_value_slack=s_opt,
        norm_monotone_slack=s_norm,
    )
