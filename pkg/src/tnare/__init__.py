"""Solvers for the T-Riccati equation ``D X + X^T A - X^T B X + C = 0``.

Every method computes (implicitly or explicitly) the stable deflating
subspace of the T-palindromic pencil ``M + z M^T`` with
``M = [[C, D], [A, -B]]``.
"""

from .errors import (TNareError, NumericallySingular, SingularPencil,
                     NotAGraphSubspace, ZeroReference, ReciprocalSpectrum,
                     SharedSpectrum, SelectionNotReciprocalFree,
                     CriticalEigenvalue, Breakdown, InitBreakdown, NoConvergence,
                     KernelDimensionMismatch, NodeSingular, RankAmbiguous,
                     GenerationFailed)
from .pencil import (TNareProblem, PalindromicPencil, SolveReport, build_M,
                     build_dual, pencil_spectrum, is_noncritical, residual,
                     forward_error, alpha_spectrum, solution_from_basis,
                     load_problem, save_problem)
from .antitri import (AntitriangularForm, block_antitriangularize,
                      reorder_antitriangular, palqz_solve, qz_solve,
                      t_sylvester_solve, coupled_sylvester_solve)
from .iterative import (cr1_solve, cr2_solve, da_solve, pda_solve,
                        newton_solve, dual_solve)
from .contour import int_solve, trapezoid_projector
from .analysis import (ConditionReport, check_critical_cond1, check_critical_grid,
                       check_existence_sufficient, check_existence_necessary,
                       check_all)
from .bench import (gen_example1, gen_example2, gen_synthetic,
                    gen_random_antitriangular, run_suite, swap_benchmark)
from .methods import METHODS, BENCH_METHODS, solve

__version__ = "0.1.0"

__all__ = [
    "TNareError", "NumericallySingular", "SingularPencil", "NotAGraphSubspace",
    "ZeroReference", "ReciprocalSpectrum", "SharedSpectrum",
    "SelectionNotReciprocalFree", "CriticalEigenvalue", "Breakdown",
    "InitBreakdown", "NoConvergence", "KernelDimensionMismatch", "NodeSingular",
    "RankAmbiguous", "GenerationFailed",
    "TNareProblem", "PalindromicPencil", "SolveReport", "build_M", "build_dual",
    "pencil_spectrum", "is_noncritical", "residual", "forward_error",
    "alpha_spectrum", "solution_from_basis", "load_problem", "save_problem",
    "AntitriangularForm", "block_antitriangularize", "reorder_antitriangular",
    "palqz_solve", "qz_solve", "t_sylvester_solve", "coupled_sylvester_solve",
    "cr1_solve", "cr2_solve", "da_solve", "pda_solve", "newton_solve",
    "dual_solve", "int_solve", "trapezoid_projector", "ConditionReport",
    "check_critical_cond1", "check_critical_grid", "check_existence_sufficient",
    "check_existence_necessary", "check_all", "gen_example1", "gen_example2",
    "gen_synthetic", "gen_random_antitriangular", "run_suite", "swap_benchmark",
    "METHODS", "BENCH_METHODS", "solve",
]
