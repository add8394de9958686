"""Projection and LMO oracles: frozen examples, brute-force cross-checks,
and the randomized invariant suites.

The brute-force helpers here share no code with the oracles: projections are
checked against dense grid minimization of ||x - q||, LMOs against grid or
vertex enumeration of <g, q>.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tikgrad.oracles import (
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

BOX01 = BoxSet(np.zeros(2), np.ones(2))
BOX_SYM3 = BoxSet(-np.ones(3), np.ones(3))
UNIT_BALL = BallSet(np.zeros(2), 1.0)
SIMPLEX3 = SimplexSet(3)


def _ball_boundary(ball, n=200_001):
    angles = np.linspace(0.0, 2.0 * np.pi, n)
    return ball.center + ball.radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _simplex_grid(n=1001):
    t = np.linspace(0.0, 1.0, n)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    keep = t1 + t2 <= 1.0 + 1e-15
    return np.stack([t1[keep], t2[keep], 1.0 - t1[keep] - t2[keep]], axis=1)


# ---------------------------------------------------------------- projections

def test_project_box_examples():
    assert_allclose(project_box(np.array([2.0, -1.0]), BOX01), [1.0, 0.0])
    assert_allclose(project_box(np.array([0.5, 0.5]), BOX01), [0.5, 0.5])
    assert_allclose(
        project_box(np.array([3.0, 0.5, -2.0]), BOX_SYM3), [1.0, 0.5, -1.0]
    )


def test_project_ball_examples():
    assert_allclose(project_ball(np.array([3.0, 4.0]), UNIT_BALL), [0.6, 0.8])
    assert_allclose(project_ball(np.array([0.1, 0.0]), UNIT_BALL), [0.1, 0.0])
    ball = BallSet(np.ones(2), 1.0)
    want = 1.0 + np.sqrt(2.0) / 2.0
    got = project_ball(np.array([2.0, 2.0]), ball)
    assert_allclose(got, [want, want], rtol=1e-14)
    # independent check: no boundary point is closer
    x = np.array([2.0, 2.0])
    best = np.min(np.linalg.norm(_ball_boundary(ball) - x, axis=1))
    assert np.linalg.norm(x - got) <= best + 1e-9


def test_project_simplex_examples():
    assert_allclose(
        project_simplex(np.array([0.5, 0.5, 0.5]), SIMPLEX3), np.full(3, 1.0 / 3.0)
    )
    assert_allclose(project_simplex(np.array([1.0, 0.0, 0.0]), SIMPLEX3), [1.0, 0.0, 0.0])
    x = np.array([0.9, 0.6, -0.5])
    got = project_simplex(x, SIMPLEX3)
    assert_allclose(got, [0.65, 0.35, 0.0], atol=1e-12)
    # grid over the simplex cannot beat the threshold solution
    grid = _simplex_grid()
    best = np.min(np.sum((grid - x) ** 2, axis=1))
    assert float((got - x) @ (got - x)) <= best + 1e-5


# ------------------------------------------------------------------- LMOs

def test_lmo_box_examples():
    assert_allclose(lmo_box(np.array([1.0, -1.0]), BOX01), [0.0, 1.0])
    # zero components tie; the rule picks the lower bound
    assert_allclose(lmo_box(np.zeros(2), BOX01), [0.0, 0.0])
    assert_allclose(lmo_box(np.array([-2.0, 3.0, 0.5]), BOX_SYM3), [1.0, -1.0, -1.0])


def test_lmo_ball_examples():
    assert_allclose(lmo_ball(np.array([3.0, 4.0]), UNIT_BALL), [-0.6, -0.8])
    assert_allclose(lmo_ball(np.zeros(2), UNIT_BALL), UNIT_BALL.center)
    ball = BallSet(np.array([2.0, 2.0]), 0.5)
    g = np.array([1.0, 0.0])
    got = lmo_ball(g, ball)
    assert_allclose(got, [1.5, 2.0], rtol=1e-14)
    best = np.min(_ball_boundary(ball) @ g)
    assert float(g @ got) <= best + 1e-9


def test_lmo_simplex_examples():
    assert_allclose(lmo_simplex(np.array([0.2, -0.5, 0.1]), SIMPLEX3), [0.0, 1.0, 0.0])
    # ties go to the smallest index
    assert_allclose(lmo_simplex(np.ones(3), SIMPLEX3), [1.0, 0.0, 0.0])
    g = np.array([-5.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    got = lmo_simplex(g, SIMPLEX3)
    assert_allclose(got, [1.0, 0.0, 0.0])
    vertex_values = [g[i] for i in range(3)]
    assert float(g @ got) == min(vertex_values)


# ------------------------------------------------------- randomized invariants

def _cases(rng):
    lower = rng.uniform(-2.0, 0.0, 3)
    return [
        ("box", BoxSet(lower, lower + rng.uniform(0.5, 2.0, 3)), project_box, lmo_box),
        ("ball", BallSet(rng.uniform(-1.0, 1.0, 2), float(rng.uniform(0.5, 2.0))),
         project_ball, lmo_ball),
        ("simplex", SimplexSet(4), project_simplex, lmo_simplex),
    ]


def _feasible(kind, obj, rng):
    if kind == "box":
        return rng.uniform(obj.lower, obj.upper)
    if kind == "ball":
        v = rng.standard_normal(2)
        v *= obj.radius * rng.uniform() ** 0.5 / np.linalg.norm(v)
        return obj.center + v
    return rng.dirichlet(np.ones(obj.dimension))


def test_projection_idempotent_and_member():
    rng = np.random.default_rng(12345)
    for kind, obj, project, _ in _cases(rng):
        dim = obj.dimension
        for _ in range(100):
            x = 3.0 * rng.standard_normal(dim)
            p = project(x, obj)
            assert obj.contains(p, 1e-10)
            assert np.linalg.norm(project(p, obj) - p) <= 1e-12


def test_projection_nonexpansive():
    rng = np.random.default_rng(23456)
    for kind, obj, project, _ in _cases(rng):
        dim = obj.dimension
        for _ in range(100):
            x = 3.0 * rng.standard_normal(dim)
            y = 3.0 * rng.standard_normal(dim)
            lhs = np.linalg.norm(project(x, obj) - project(y, obj))
            assert lhs <= np.linalg.norm(x - y) + 1e-12


def test_projection_variational_inequality():
    """<x - P(x), q - P(x)> <= 0 for every feasible q."""
    rng = np.random.default_rng(34567)
    for kind, obj, project, _ in _cases(rng):
        dim = obj.dimension
        for _ in range(100):
            x = 3.0 * rng.standard_normal(dim)
            p = project(x, obj)
            for _ in range(50):
                q = _feasible(kind, obj, rng)
                assert float((x - p) @ (q - p)) <= 1e-10


def test_lmo_optimality():
    rng = np.random.default_rng(45678)
    for kind, obj, _, lmo in _cases(rng):
        dim = obj.dimension
        for _ in range(100):
            g = rng.standard_normal(dim)
            y = lmo(g, obj)
            assert obj.contains(y, 1e-10)
            for _ in range(50):
                q = _feasible(kind, obj, rng)
                assert float(g @ y) <= float(g @ q) + 1e-10


def test_lmo_returns_extreme_points():
    rng = np.random.default_rng(56789)
    box = BoxSet(np.array([-1.0, 0.0, 2.0]), np.array([1.0, 3.0, 5.0]))
    simplex = SimplexSet(5)
    for _ in range(100):
        g = rng.standard_normal(3)
        y = lmo_box(g, box)
        at_bound = (np.abs(y - box.lower) <= 1e-12) | (np.abs(y - box.upper) <= 1e-12)
        assert at_bound.all()
        h = rng.standard_normal(5)
        v = lmo_simplex(h, simplex)
        assert np.sum(v) == 1.0 and np.count_nonzero(v) == 1


# -------------------------------------------------------------------- wiring

def test_to_feasible_set_wiring():
    box = BoxSet(np.zeros(2), np.array([1.0, 2.0]))
    fs = box.to_feasible_set()
    assert fs.dimension == 2
    assert_allclose(fs.diameter_B, np.sqrt(5.0))
    assert fs.contains(np.array([0.5, 0.5]), 1e-10)
    assert not fs.contains(np.array([1.5, 0.5]), 1e-10)
    assert_allclose(fs.project_fn(np.array([-1.0, 3.0])), [0.0, 2.0])
    assert_allclose(fs.lmo_fn(np.array([1.0, -1.0])), [0.0, 2.0])

    ball = BallSet(np.zeros(2), 2.0)
    fsb = ball.to_feasible_set()
    assert fsb.dimension == 2 and fsb.diameter_B == 4.0

    simplex = SimplexSet(3)
    fss = simplex.to_feasible_set()
    assert fss.dimension == 3
    assert_allclose(fss.diameter_B, np.sqrt(2.0))
    assert fss.contains(np.full(3, 1.0 / 3.0), 1e-10)
    assert not fss.contains(np.array([0.5, 0.5, 0.5]), 1e-10)


def test_shape_validation():
    with pytest.raises(ValueError):
        BoxSet(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        BallSet(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        SimplexSet(0)
