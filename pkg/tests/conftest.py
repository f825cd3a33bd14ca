import numpy as np
import pytest

from equiaffine.generator import GeneratorInput, generate
from equiaffine.surfaces import ExprSurface


@pytest.fixture(scope='session')
def saddle():
    return ExprSurface.parse('u;v;u*v')


@pytest.fixture(scope='session')
def paraboloid():
    return ExprSurface.parse('u;v;u^2+v^2')


@pytest.fixture(scope='session')
def sin_grid():
    """l(v) = sin v, f(v) = v^2, fine enough for the grid mode checks."""
    return generate(GeneratorInput('sin(v)', 'v^2', u_range=(-1, 1),
                                   v_range=(-0.5, 0.5), nu=9, nv=201))


@pytest.fixture(scope='session')
def cosh_grid():
    """l(v) = 9, f(v) = 0."""
    return generate(GeneratorInput('9', '0', u_range=(-1, 1),
                                   v_range=(-0.5, 0.5), nu=9, nv=401))


@pytest.fixture(scope='session')
def cubic_grid():
    """l(v) = 0, f(v) = 6, the graph of z = xy - 2y^3."""
    return generate(GeneratorInput('0', '6', u_range=(-1, 1),
                                   v_range=(-1, 1), nu=41, nv=41))


@pytest.fixture
def uv():
    return np.linspace(-1, 1, 11), np.linspace(-0.5, 0.5, 13)
