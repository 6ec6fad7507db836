import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quadlab.forms import named_form
from quadlab.lattices import make_affine_lattice


@pytest.fixture
def q0():
    return named_form("q0")


@pytest.fixture
def golden():
    return named_form("golden")


@pytest.fixture
def z2():
    return make_affine_lattice(np.eye(2))


@pytest.fixture
def golden_slope_lattice():
    phi = (1 + np.sqrt(5.0)) / 2.0
    return make_affine_lattice(np.array([[1.0, 0.0], [phi, 1.0]]))


def random_sl2(rng, scale=1.0):
    """A random det-1 matrix via a random shear/rotation/stretch product."""
    theta = rng.uniform(0, 2 * np.pi)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    t = np.exp(rng.uniform(-scale, scale))
    shear = np.array([[1.0, rng.uniform(-2, 2)], [0.0, 1.0]])
    return rot @ np.diag([t, 1.0 / t]) @ shear
