from .adapter import (
    Budget,
    ModelVerificationError,
    SolveResult,
    SolverError,
    SolverOutputError,
    SolverProcessError,
    evaluate,
    solve,
    solve_external,
    solve_internal,
    solve_pysat,
)
from .cdcl import SAT, UNKNOWN, UNSAT, CdclSolver

__all__ = [
    "Budget",
    "CdclSolver",
    "ModelVerificationError",
    "SAT",
    "SolveResult",
    "SolverError",
    "SolverOutputError",
    "SolverProcessError",
    "UNKNOWN",
    "UNSAT",
    "evaluate",
    "solve",
    "solve_external",
    "solve_internal",
    "solve_pysat",
]
