"""Shared fixtures: tiny hand-built problems reused across test modules."""

import numpy as np
import pytest

from tikgrad.core import Objective, Problem
from tikgrad.oracles import BallSet, BoxSet


@pytest.fixture(scope="session")
def ball_linear():
    """min <(1,0), x> over the unit ball at the origin."""
    c = np.array([1.0, 0.0])
    obj = Objective(lambda x: float(c @ x), lambda x: c.copy(), 1.0)
    return Problem(obj, BallSet(np.zeros(2), 1.0).to_feasible_set())


@pytest.fixture(scope="session")
def box12_zero():
    """f identically zero on the box [1,2]^2; minimal-norm point is (1,1)."""
    obj = Objective(lambda x: 0.0, lambda x: np.zeros_like(x), 1.0)
    fs = BoxSet(np.ones(2), np.full(2, 2.0)).to_feasible_set()
    return Problem(obj, fs, known_fstar=0.0, known_xstar_n=np.ones(2))
