import math

import pytest

from ddebounds import ddesim, maps
from ddebounds.ddesim import DdeProblem


@pytest.fixture(scope="session")
def wright2():
    return maps.wright_exp(2.0)


@pytest.fixture(scope="session")
def mg():
    return maps.mackey_glass_hill(2.0, 20.0)


@pytest.fixture(scope="session")
def mg_cls(mg):
    return maps.classify(mg)


@pytest.fixture(scope="session")
def wright2_cls(wright2):
    return maps.classify(wright2, (-5.0, 5.0))


@pytest.fixture(scope="session")
def mg_traj_tau1(mg):
    problem = DdeProblem(a=1.0, tau=1.0, feedback=mg, history=0.3)
    return ddesim.integrate(problem, 300.0, 100)


@pytest.fixture(scope="session")
def mg_traj_tau10(mg):
    problem = DdeProblem(a=1.0, tau=10.0, feedback=mg, history=0.5)
    return ddesim.integrate(problem, 500.0, 200)


@pytest.fixture(scope="session")
def wright_y_traj():
    return ddesim.simulate_wright_y(2.0, 0.5, T=60.0, m_steps=100)


def f_minus1_closed(r: float) -> float:
    """F(-1) = -1 + exp(-1 + r + e^-r), the closed form used as an oracle."""
    return -1.0 + math.exp(-1.0 + r + math.exp(-r))
