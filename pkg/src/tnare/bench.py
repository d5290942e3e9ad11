"""Test problems, experiment suites and the swap-timing benchmark.

Random streams come from :func:`numpy.random.default_rng` (PCG64); each
generator splits its seed with :class:`numpy.random.SeedSequence` so that
the individual matrices use independent streams. Normal variates use
numpy's ziggurat transform.
"""

import csv
from dataclasses import dataclass, field, asdict
import io
import time

import numpy as np

from .antitri import (AntitriangularForm, antitriangular_mask,
                      reorder_antitriangular, stable_first)
from .errors import GenerationFailed, TNareError
from .methods import BENCH_METHODS, solve
from .pencil import TNareProblem, forward_error, residual

__all__ = [
    "gen_example1", "gen_example2", "gen_synthetic", "synthetic_problem",
    "gen_random_antitriangular", "ProblemSpec", "ResultRow", "ResultTable",
    "make_problem", "run_suite", "examples_suite", "synthetic_suite",
    "swap_benchmark", "MAX_LOG2_NODES",
]

#: node-count cap for the contour solver inside suites (2^24 nodes)
MAX_LOG2_NODES = 24


def _bidiag(n, d, u):
    return d * np.eye(n) + u * np.eye(n, k=1)


def gen_example1(n=10):
    """Small well-conditioned bidiagonal problem.

    ``A = bidiag(-1, -1)``, ``D = bidiag(4, -1)``, ``E`` like ``A`` with
    ``E[n-1, n-1] = -0.9``; ``B = -A / ||A||_F``, ``C = E / ||E||_F``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    A = _bidiag(n, -1.0, -1.0)
    D = _bidiag(n, 4.0, -1.0)
    E = A.copy()
    E[-1, -1] = -0.9
    return TNareProblem(A, -A / np.linalg.norm(A, "fro"),
                        E / np.linalg.norm(E, "fro"), D)


def laplacian_2d(side):
    """Five-point finite-difference Laplacian on a ``side x side`` grid."""
    T = 2 * np.eye(side) - np.eye(side, k=1) - np.eye(side, k=-1)
    I = np.eye(side)
    return np.kron(I, T) + np.kron(T, I)


def gen_example2(side, seed=0):
    """``A = D`` = 2-D Laplacian (n = side^2), ``B, C`` uniform on [0, 1)."""
    if side < 2:
        raise ValueError("side must be at least 2")
    L = laplacian_2d(side)
    n = side * side
    sb, sc = np.random.SeedSequence(seed).spawn(2)
    B = np.random.default_rng(sb).random((n, n))
    C = np.random.default_rng(sc).random((n, n))
    return TNareProblem(L, B, C, L.copy())


def synthetic_problem(X, B, D, W):
    """Problem with planted solution ``X`` and ``A - B X = (D^T - B^T X) W``.

    ``A = B X + (D^T - B^T X) W`` and ``C = -(D X + X^T A - X^T B X)``, so
    ``R(X) = 0`` and ``alpha(z) = (D^T - B^T X)(W + z I)``: the
    eigenvalues associated with ``X`` are ``-eig(W)``.
    """
    X, B, D, W = (np.atleast_2d(np.asarray(m, dtype=float)) for m in (X, B, D, W))
    A = B @ X + (D.T - B.T @ X) @ W
    C = -(D @ X + X.T @ A - X.T @ B @ X)
    return TNareProblem(A, B, C, D)


def gen_synthetic(n, sigma, seed=0, max_tries=10, kappa_max=1e6):
    """Random problem with a planted stabilizing solution.

    ``W`` has eigenvalues ``1/(1+sigma)`` and ``n-1`` values uniform in
    ``[0.1, 0.7]``, so the pencil has the reciprocal pair
    ``-1/(1+sigma), -(1+sigma)`` at distance ~sigma from the unit circle.

    Returns
    -------
    (TNareProblem, ndarray)
        The problem and its exact solution.

    Raises
    ------
    GenerationFailed
        If ``D^T - B^T X`` stays ill-conditioned over ``max_tries`` draws.
    """
    if n < 1 or not sigma > 0:
        raise ValueError("need n >= 1 and sigma > 0")
    streams = np.random.SeedSequence(seed).spawn(max_tries)
    for ss in streams:
        rng = np.random.default_rng(ss)
        X = rng.standard_normal((n, n))
        B = rng.standard_normal((n, n))
        D = rng.standard_normal((n, n)) + 3 * np.eye(n)
        ev = np.concatenate([[1 / (1 + sigma)], rng.uniform(0.1, 0.7, n - 1)])
        T = np.diag(ev) + np.triu(0.1 * rng.standard_normal((n, n)), 1)
        Qo, _ = np.linalg.qr(rng.standard_normal((n, n)))
        W = Qo @ T @ Qo.T
        if np.linalg.cond(D.T - B.T @ X) <= kappa_max:
            return synthetic_problem(X, B, D, W), X
    raise GenerationFailed(f"no well-conditioned draw in {max_tries} tries")


def gen_random_antitriangular(n2, seed=0):
    """Antitriangular matrix with standard normal entries where
    ``i + j >= n2 - 1`` (0-based), wrapped with ``U = I``."""
    if n2 % 2:
        raise ValueError("size must be even")
    N = np.random.default_rng(seed).standard_normal((n2, n2))
    N[antitriangular_mask(n2)] = 0.0
    return AntitriangularForm(np.eye(n2, dtype=complex), N.astype(complex))


# -- suites ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    """Named problem: ``generator`` in example1 | example2 | synthetic | file."""

    name: str
    generator: str
    params: dict = field(default_factory=dict)


def make_problem(spec):
    """Build ``(problem, exact solution or None)`` from a :class:`ProblemSpec`."""
    g, prm = spec.generator, spec.params
    if g == "example1":
        return gen_example1(prm.get("n", 10)), None
    if g == "example2":
        return gen_example2(prm.get("side", 18), prm.get("seed", 0)), None
    if g == "synthetic":
        return gen_synthetic(prm.get("n", 3), prm["sigma"], prm.get("seed", 0))
    if g == "file":
        from .pencil import load_problem
        return load_problem(prm["path"]), None
    raise ValueError(f"unknown generator {g!r}")


@dataclass
class ResultRow:
    problem: str
    method: str
    res: float | None
    err: float | None
    iterations: int | None
    wall_ms: float
    status: str


class ResultTable(list):
    """List of :class:`ResultRow` with CSV and markdown rendering."""

    columns = ("problem", "method", "res", "err", "iterations", "wall_ms", "status")

    def to_csv(self, path=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self:
            d = asdict(r)
            w.writerow(["" if d[c] is None else
                        (f"{d[c]:.6e}" if isinstance(d[c], float) else d[c])
                        for c in self.columns])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_markdown(self):
        def fmt(v, c):
            if v is None:
                return "-"
            if c == "wall_ms":
                return f"{v:.1f}"
            return f"{v:.3e}" if isinstance(v, float) else str(v)
        lines = ["| " + " | ".join(self.columns) + " |",
                 "|" + "---|" * len(self.columns)]
        for r in self:
            d = asdict(r)
            lines.append("| " + " | ".join(fmt(d[c], c) for c in self.columns) + " |")
        return "\n".join(lines)

    def get(self, problem, method):
        for r in self:
            if r.problem == problem and r.method == method:
                return r
        raise KeyError((problem, method))


def _run_one(p, method, eps, maxit, k):
    t0 = time.perf_counter()
    try:
        rep = solve(p, method, eps=eps, maxit=maxit, k=k)
        status = "ok"
    except TNareError as exc:
        rep, status = None, type(exc).__name__
    return rep, status, 1e3 * (time.perf_counter() - t0)


def run_suite(specs, methods=BENCH_METHODS, eps=None, maxit=None, out=None,
              int_k=None, max_log2_nodes=MAX_LOG2_NODES):
    """Run every method on every problem and tabulate the outcomes.

    The contour solver uses ``int_k`` nodes (log2) when given, otherwise
    the doubling count of ``da`` on the same problem; it is skipped when
    that exceeds ``max_log2_nodes``. ``err`` is measured against the
    planted solution for synthetic problems and against the ``palqz``
    solution otherwise. Failures are recorded, never raised.
    """
    table = ResultTable()
    methods = list(methods)
    for spec in specs:
        p, xref = make_problem(spec)
        reports = {}
        order = sorted(methods, key=lambda m: {"palqz": 0, "da": 1}.get(m, 2))
        rows = {}
        for m in order:
            k = None
            if m == "int":
                k = int_k
                if k is None:
                    da = reports.get("da") or _run_one(p, "da", eps, maxit, None)[0]
                    k = da.iterations if da is not None else None
                if k is None or k > max_log2_nodes:
                    rows[m] = ResultRow(spec.name, m, None, None, k, 0.0,
                                        "skipped: too many nodes" if k else
                                        "skipped: no node count")
                    continue
            rep, status, ms = _run_one(p, m, eps, maxit, k)
            reports[m] = rep
            rows[m] = (rep, status, ms)
        ref = xref
        if ref is None and reports.get("palqz") is not None:
            ref = reports["palqz"].X
        for m in methods:
            r = rows[m]
            if isinstance(r, ResultRow):
                table.append(r)
                continue
            rep, status, ms = r
            if rep is None:
                table.append(ResultRow(spec.name, m, None, None, None, ms, status))
                continue
            err = None
            if ref is not None and np.linalg.norm(ref) > 0:
                err = forward_error(rep.X, ref)
            table.append(ResultRow(spec.name, m, residual(p, rep.X), err,
                                   rep.iterations, ms, status))
    if out is not None:
        table.to_csv(out)
    return table


def examples_suite(seed=0, include_large=False):
    """Example 1 (n=10) and Example 2a (n=324); 2b (n=784) on request."""
    specs = [ProblemSpec("example1", "example1", {"n": 10}),
             ProblemSpec("example2a", "example2", {"side": 18, "seed": seed})]
    if include_large:
        specs.append(ProblemSpec("example2b", "example2", {"side": 28, "seed": seed}))
    return specs


def synthetic_suite(seed=0, sigmas=(1e-5, 1e-10), n=3):
    return [ProblemSpec(f"synthetic-{s:g}", "synthetic",
                        {"n": n, "sigma": s, "seed": seed}) for s in sigmas]


# -- swap timing -------------------------------------------------------------------

def _warm_up():
    reorder_antitriangular(gen_random_antitriangular(8, 0))


def swap_benchmark(sizes, reps=5, seed=0, check=True):
    """Time the reordering of random antitriangular pencils.

    Returns a list of dicts with keys ``n, mean_time_s, mean_swaps`` plus
    ``certified`` (stable-first certificate held in every run) and
    ``max_congruence_error`` (relative to ``||N||_2``) when ``check``.
    JIT compilation is triggered before any timing.
    """
    rows = []
    if reps <= 0:
        return rows
    _warm_up()
    seeds = np.random.SeedSequence(seed)
    for n2 in sizes:
        if n2 % 2:
            raise ValueError("sizes must be even")
        times, swaps, cert, cong = [], [], True, 0.0
        for ss in seeds.spawn(reps):
            F = gen_random_antitriangular(n2, ss)
            t0 = time.perf_counter()
            G = reorder_antitriangular(F)
            times.append(time.perf_counter() - t0)
            swaps.append(G.swaps)
            if check:
                cert &= stable_first(G.N)
                N0 = F.N
                cong = max(cong, G.congruence_error(N0) / np.linalg.norm(N0, 2))
        row = {"n": n2, "mean_time_s": float(np.mean(times)),
               "mean_swaps": float(np.mean(swaps))}
        if check:
            row.update(certified=bool(cert), max_congruence_error=cong)
        rows.append(row)
    return rows
