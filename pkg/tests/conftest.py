import numpy as np
import pytest

from coskew.experiments import DEFAULT_SEED
from coskew.marginals import (
    exponential,
    laplace,
    standard_normal,
    student_t,
    uniform01,
)
from coskew.samples import SeedSpec


@pytest.fixture
def seed():
    return SeedSpec(DEFAULT_SEED, 0)


@pytest.fixture
def normal3():
    return (standard_normal(),) * 3


@pytest.fixture
def exp3():
    return (exponential(1.0),) * 3


@pytest.fixture
def all_marginals():
    return [standard_normal(), uniform01(), laplace(), student_t(5), exponential(1.0)]


@pytest.fixture
def symmetric_marginals():
    return [standard_normal(), uniform01(), laplace(), student_t(5)]


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
