import numpy as np
import pytest

from sgstab import orthopoly


@pytest.fixture(scope="session")
def uniform():
    return orthopoly.uniform_density()


@pytest.fixture(scope="session")
def beta32():
    return orthopoly.beta_density(3.0, 2.0)


@pytest.fixture(scope="session")
def uniform_rule(uniform):
    return orthopoly.quadrature_new(uniform, 20)


@pytest.fixture(scope="session")
def beta_rule(beta32):
    return orthopoly.quadrature_new(beta32, 20)


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
