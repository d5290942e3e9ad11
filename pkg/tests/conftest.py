import numpy as np
import pytest

from tnare.bench import gen_synthetic
from tnare.pencil import PalindromicPencil, TNareProblem

U = np.finfo(float).eps / 2


def scalar_problem():
    """x = 1, w = 0.5, b = 1, d = 2 planted: a = 1.5, c = -2.5."""
    return TNareProblem([[1.5]], [[1.0]], [[-2.5]], [[2.0]])


def nongraph_problem():
    """M = [[0, 1], [2, 0]]: stable subspace span{e2} is not a graph."""
    return TNareProblem([[2.0]], [[0.0]], [[0.0]], [[1.0]])


def well_conditioned(n, seed):
    """Problem with planted stabilizing solution and spectral radius <= 0.7."""
    return gen_synthetic(n, 1.0, seed)


def random_pencil(n, rng):
    return PalindromicPencil(rng.standard_normal((2 * n, 2 * n)))


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def match_multisets(a, b):
    """Max relative distance after greedy nearest matching."""
    a = list(np.asarray(a, complex))
    worst = 0.0
    for z in np.asarray(b, complex):
        d = [abs(z - w) / max(abs(z), 1.0) for w in a]
        j = int(np.argmin(d))
        worst = max(worst, d[j])
        a.pop(j)
    return worst


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
