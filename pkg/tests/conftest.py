"""Shared fixtures: the expensive eigensolves and reference solves are
session-scoped so the suite pays for each of them once."""

import numpy as np
import pytest

from fracspec.forward import solve_forward
from fracspec.fraccalc import Signal
from fracspec.oracle import solve_l1
from fracspec.sturm import Potential, eigen_solve


@pytest.fixture(scope="session")
def pot_minus_one():
    return Potential.constant(-1.0, 200)


@pytest.fixture(scope="session")
def spec_m1_64(pot_minus_one):
    return eigen_solve(pot_minus_one, 64, refine=3)


@pytest.fixture(scope="session")
def spec_m1_10(pot_minus_one):
    return eigen_solve(pot_minus_one, 10, refine=3)


@pytest.fixture(scope="session")
def g_square():
    """g(t) = t^2 on [0, 1] with M = 400 steps."""
    return Signal.from_callable(lambda t: t * t, 1.0, 400)


@pytest.fixture(scope="session")
def crossval_case():
    """Cross-validation reference: p = -(1+x), alpha = 0.5, g = t^2 on the
    pinned grids (J = 200, M = 400, N = 64), solved both ways."""
    p = Potential.from_callable(lambda x: -(1.0 + x), 200)
    g = Signal.from_callable(lambda t: t * t, 1.0, 400)
    spec = eigen_solve(p, 64, refine=3)
    return {
        "p": p,
        "g": g,
        "spec": spec,
        "u": solve_forward(spec, 0.5, g, tail_tol=1e-1),
        "u_l1": solve_l1(p, 0.5, g, 200),
    }


def rel_l2_gap(a: np.ndarray, b: np.ndarray, dt: float) -> float:
    num = np.sqrt(np.trapezoid((a - b) ** 2, dx=dt))
    den = np.sqrt(np.trapezoid(b**2, dx=dt))
    return float(num / den)
