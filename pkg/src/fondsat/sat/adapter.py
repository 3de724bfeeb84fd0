"""Uniform solving contract: internal CDCL, external DIMACS processes, pysat."""

from __future__ import annotations

import os
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Sequence

from ..cnf import Cnf, emit_dimacs
from .cdcl import SAT, UNKNOWN, UNSAT, CdclSolver


class SolverError(RuntimeError):
    """Base class for external solver failures."""


class SolverProcessError(SolverError):
    pass


class SolverOutputError(SolverError):
    pass


class ModelVerificationError(SolverError):
    pass


@dataclass
class Budget:
    max_conflicts: int | None = None
    max_seconds: float | None = None


@dataclass
class SolveResult:
    status: str
    model: list[int] | None = None
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def assignment(self) -> list[bool]:
        """Index-by-variable truth values (index 0 unused)."""
        if self.model is None:
            raise ValueError("no model")
        out = [False] * (len(self.model) + 1)
        for lit in self.model:
            if lit > 0:
                out[lit] = True
        return out


def evaluate(cnf: Cnf, model: Sequence[int]) -> bool:
    """True iff ``model`` (signed literals over every variable) satisfies ``cnf``."""
    value: dict[int, bool] = {}
    for lit in model:
        value[abs(lit)] = lit > 0
    missing = [v for v in range(1, cnf.num_vars + 1) if v not in value]
    if missing:
        raise ValueError(f"incomplete model: {len(missing)} unassigned variables, e.g. {missing[:5]}")
    for c in cnf.clauses:
        if not any(value[abs(l)] == (l > 0) for l in c):
            return False
    return True


def solve_internal(cnf: Cnf, budget: Budget | None = None, seed: int = 0) -> SolveResult:
    budget = budget or Budget()
    t0 = time.perf_counter()
    if cnf.trivially_unsat:
        return SolveResult(UNSAT, None, {"time": 0.0, "decisions": 0, "conflicts": 0})
    solver = CdclSolver(cnf.num_vars, cnf.clauses, seed=seed)
    status, model = solver.solve(budget.max_conflicts, budget.max_seconds)
    stats = dict(solver.stats)
    stats["time"] = time.perf_counter() - t0
    return SolveResult(status, model, stats)


def _parse_competition_output(text: str, num_vars: int, returncode: int) -> tuple[str, list[int] | None]:
    status = None
    lits: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            elif word in ("UNKNOWN", "INDETERMINATE"):
                status = UNKNOWN
            else:
                raise SolverOutputError(f"unrecognised status line {line!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise SolverOutputError(f"bad literal {tok!r} in value line") from None
                if lit != 0:
                    if abs(lit) > num_vars:
                        raise SolverOutputError(f"literal {lit} exceeds variable count")
                    lits.append(lit)
        else:
            raise SolverOutputError(f"unparsable solver output line {line!r}")
    if status is None:
        if returncode == 10:
            status = SAT
        elif returncode == 20:
            status = UNSAT
        else:
            raise SolverOutputError("no status line in solver output")
    if returncode in (10, 20) and status != {10: SAT, 20: UNSAT}[returncode]:
        raise SolverOutputError(f"exit code {returncode} contradicts status {status}")
    if status != SAT:
        return status, None
    value = {abs(l): l for l in lits}
    model = [value.get(v, -v) for v in range(1, num_vars + 1)]
    return status, model


def solve_external(cnf: Cnf, solver_cmd: str | Sequence[str], budget: Budget | None = None) -> SolveResult:
    """Run ``solver_cmd <dimacs>`` and parse SAT-competition style output.

    Models are completed (missing variables default to false) and always
    re-checked against ``cnf``.
    """
    budget = budget or Budget()
    cmd = [solver_cmd] if isinstance(solver_cmd, str) else list(solver_cmd)
    t0 = time.perf_counter()
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(emit_dimacs(cnf))
        try:
            proc = subprocess.run(
                [*cmd, path], capture_output=True, text=True, timeout=budget.max_seconds
            )
        except subprocess.TimeoutExpired:
            return SolveResult(UNKNOWN, None, {"time": time.perf_counter() - t0, "timeout": True})
        except OSError as exc:
            raise SolverProcessError(f"cannot run {cmd[0]}: {exc}") from exc
    finally:
        os.unlink(path)
    if proc.returncode not in (0, 10, 20):
        raise SolverProcessError(f"solver exited with code {proc.returncode}: {proc.stderr.strip()[:200]}")
    status, model = _parse_competition_output(proc.stdout, cnf.num_vars, proc.returncode)
    if status == SAT and not evaluate(cnf, model):
        raise ModelVerificationError("external solver returned a model that violates the formula")
    return SolveResult(status, model, {"time": time.perf_counter() - t0})


def solve_pysat(cnf: Cnf, name: str = "minisat22", budget: Budget | None = None) -> SolveResult:
    """Solve with a pysat backend; the model is re-verified like external ones."""
    from pysat.solvers import Solver

    budget = budget or Budget()
    t0 = time.perf_counter()
    if cnf.trivially_unsat:
        return SolveResult(UNSAT, None, {"time": 0.0})
    with Solver(name=name, bootstrap_with=cnf.clauses) as s:
        if budget.max_conflicts is not None:
            s.conf_budget(budget.max_conflicts)
            res = s.solve_limited()
        else:
            res = s.solve()
        if res is None:
            return SolveResult(UNKNOWN, None, {"time": time.perf_counter() - t0})
        if not res:
            return SolveResult(UNSAT, None, {"time": time.perf_counter() - t0})
        raw = s.get_model() or []
    value = {abs(l): l for l in raw}
    model = [value.get(v, -v) for v in range(1, cnf.num_vars + 1)]
    if not evaluate(cnf, model):
        raise ModelVerificationError("pysat returned a model that violates the formula")
    return SolveResult(SAT, model, {"time": time.perf_counter() - t0})


def solve(cnf: Cnf, solver: str = "internal", budget: Budget | None = None, seed: int = 0) -> SolveResult:
    """Dispatch on a solver spec: ``internal``, ``cmd:<path>`` or ``pysat[:<name>]``."""
    if solver == "internal":
        return solve_internal(cnf, budget, seed)
    if solver.startswith("cmd:"):
        return solve_external(cnf, solver[4:].split(), budget)
    if solver == "pysat" or solver.startswith("pysat:"):
        return solve_pysat(cnf, solver[6:] or "minisat22", budget)
    raise ValueError(f"unknown solver {solver!r}")
