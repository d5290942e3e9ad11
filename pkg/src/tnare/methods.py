"""Name-based access to every solver."""

from .antitri import palqz_solve, qz_solve
from .contour import DEFAULT_LOG2_NODES, int_solve
from .iterative import (cr1_solve, cr2_solve, da_solve, newton_solve,
                        pda_solve)

__all__ = ["METHODS", "BENCH_METHODS", "solve"]

METHODS = ("qz", "palqz", "da", "pda", "cr1", "cr2", "int", "newton")
#: the seven methods compared by the benchmark suites
BENCH_METHODS = ("qz", "palqz", "da", "cr1", "cr2", "pda", "int")


def solve(p, method, eps=None, maxit=None, k=None, **extra):
    """Run ``method`` on problem ``p``.

    ``eps``/``maxit`` apply to the iterative methods, ``k`` (log2 of the
    node count) to ``int``; unused options are ignored.
    """
    it = {}
    if eps is not None:
        it["eps"] = eps
    if maxit is not None:
        it["maxit"] = maxit
    if method == "qz":
        return qz_solve(p)
    if method == "palqz":
        return palqz_solve(p, **extra)
    if method == "da":
        return da_solve(p, **it)
    if method == "pda":
        return pda_solve(p, **it)
    if method == "cr1":
        return cr1_solve(p, **it)
    if method == "cr2":
        return cr2_solve(p, **it)
    if method == "newton":
        return newton_solve(p, extra.get("X0"), **it)
    if method == "int":
        return int_solve(p, DEFAULT_LOG2_NODES if k is None else k)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
