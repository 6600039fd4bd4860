import numpy as np
import pytest

from expcascade.income import IncomeVector, assign_deciles
from expcascade.network import PerceptionGraph


def make_incomes(values):
    values = np.asarray(values, dtype=float)
    return IncomeVector(incomes=values, deciles=assign_deciles(values))


def make_graph(links, rho=0.0):
    links = np.asarray(links, dtype=np.int64)
    return PerceptionGraph(n=links.shape[0], k=links.shape[1], rho=rho, out_links=links)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
