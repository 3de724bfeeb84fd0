"""SAT-based synthesis of compact controllers for FOND planning problems."""

from .core import ActionGroup, Atom, ContractError, FondProblem, Mode, Outcome, build_problem, relaxation
from .encoder import EncodeOptions, VarMap, encode
from .policy import Controller, build_product, decode, simulate
from .verifier import Verdict, verify

__version__ = "0.1.0"

__all__ = [
    "ActionGroup",
    "Atom",
    "ContractError",
    "Controller",
    "EncodeOptions",
    "FondProblem",
    "Mode",
    "Outcome",
    "VarMap",
    "Verdict",
    "build_problem",
    "build_product",
    "decode",
    "encode",
    "relaxation",
    "simulate",
    "verify",
]
