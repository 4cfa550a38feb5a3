from .eig import (InputError, eigenvalues_symmetric, jacobi_eigenvalues,
                  lapack_eigenvalues, min_eigenvalue)
from .lp import (FEAS_TOL, OPT_TOL, LpInputError, LpProblem, LpSolution,
                 SolverFailure, solve_lp)
from .quad import AccuracyError, integrate
from .special import DomainError, beta, log_beta

__all__ = [
    "AccuracyError", "DomainError", "FEAS_TOL", "InputError", "LpInputError",
    "LpProblem", "LpSolution", "OPT_TOL", "SolverFailure", "beta",
    "eigenvalues_symmetric", "integrate", "jacobi_eigenvalues",
    "lapack_eigenvalues", "log_beta", "min_eigenvalue", "solve_lp",
]
