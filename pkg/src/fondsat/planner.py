"""Iterative deepening over the controller size k."""

from __future__ import annotations

import logging
import multiprocessing
import time
from dataclasses import asdict, dataclass, field

from .core import FondProblem, Mode
from .encoder import EncodeOptions, effective_mode, encode
from .policy import Controller, DecodeError, decode, empty_controller
from .sat import Budget, solve
from .verifier import Verdict, verify

log = logging.getLogger(__name__)

SOLVED = "solved"
EXHAUSTED = "exhaustedK"
TIMEOUT = "timeout"
VERIFY_FAILED = "verificationFailed"


@dataclass
class PlanRequest:
    mode: Mode = Mode.STRONG_CYCLIC
    start_k: int = 2
    max_k: int = 20
    max_seconds: float | None = None
    per_k_seconds: float | None = None
    max_conflicts: int | None = None
    solver: str = "internal"
    use_optimized7: bool = True
    symmetry_breaking: bool = True
    amo: str = "pairwise"
    include_reverse13: bool = True
    verify: bool = True
    seed: int = 0
    parallel: int = 1

    def __post_init__(self):
        self.mode = Mode.parse(self.mode)
        if not 2 <= self.start_k <= self.max_k:
            raise ValueError(f"need 2 <= start_k <= max_k, got {self.start_k}, {self.max_k}")
        if self.parallel < 1:
            raise ValueError("parallel must be at least 1")

    def encode_options(self, mode: Mode) -> EncodeOptions:
        return EncodeOptions(
            mode=mode,
            use_optimized7=self.use_optimized7,
            symmetry_breaking=self.symmetry_breaking,
            amo=self.amo,
            include_reverse13=self.include_reverse13,
        )


@dataclass
class KRecord:
    k: int
    vars: int
    clauses: int
    result: str
    conflicts: int | None = None
    decisions: int | None = None
    seconds: float = 0.0


@dataclass
class PlanReport:
    status: str
    mode: Mode
    requested_mode: Mode
    k: int | None = None
    per_k: list[KRecord] = field(default_factory=list)
    controller: Controller | None = None
    verdict: Verdict | None = None
    note: str = ""
    seconds: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status == SOLVED

    def to_dict(self, P: FondProblem, timings: bool = False) -> dict:
        """Report content; wall times only with ``timings`` so runs can be diffed."""
        per_k = []
        for r in self.per_k:
            d = asdict(r)
            if not timings:
                d.pop("seconds")
            per_k.append(d)
        out = {
            "problem": P.name,
            "status": self.status,
            "mode": self.mode.value,
            "requestedMode": self.requested_mode.value,
            "k": self.k,
            "controllerSize": self.controller.size if self.controller else None,
            "perK": per_k,
            "verdict": self.verdict.to_dict() if self.verdict else None,
            "note": self.note,
        }
        if timings:
            out["seconds"] = self.seconds
        return out


def _solve_k(P: FondProblem, k: int, opts: EncodeOptions, solver: str, budget: Budget, seed: int):
    t0 = time.perf_counter()
    cnf, vm = encode(P, k, opts)
    res = solve(cnf, solver, budget, seed)
    rec = KRecord(
        k,
        cnf.num_vars,
        len(cnf.clauses),
        res.status,
        res.stats.get("conflicts"),
        res.stats.get("decisions"),
        time.perf_counter() - t0,
    )
    return rec, res.model, vm


def _finish(P: FondProblem, req: PlanRequest, report: PlanReport, model, vm) -> PlanReport:
    try:
        c = decode(model, vm, P)
    except DecodeError as exc:
        report.status = VERIFY_FAILED
        report.note = f"decode failed: {exc}"
        return report
    report.controller = c
    report.status = SOLVED
    if req.verify:
        report.verdict = verify(P, c, report.mode)
        if not report.verdict.valid:
            report.status = VERIFY_FAILED
            report.note = "decoded controller failed verification"
    return report


def plan(P: FondProblem, req: PlanRequest | None = None) -> PlanReport:
    req = req or PlanRequest()
    t0 = time.perf_counter()
    mode = effective_mode(P, req.mode)
    report = PlanReport(EXHAUSTED, mode, req.mode)
    if mode is not req.mode:
        report.note = "no unfair actions; planned in strong-cyclic mode"
        log.warning(report.note)

    if P.is_goal(P.initial_state):
        report.status = SOLVED
        report.k = 2
        report.controller = empty_controller()
        report.note = "initial state satisfies the goal"
        if req.verify:
            report.verdict = verify(P, report.controller, mode)
        report.seconds = time.perf_counter() - t0
        return report

    opts = req.encode_options(mode)
    if req.parallel > 1:
        return _plan_parallel(P, req, report, opts, t0)

    for k in range(req.start_k, req.max_k + 1):
        remaining = None
        if req.max_seconds is not None:
            remaining = req.max_seconds - (time.perf_counter() - t0)
            if remaining <= 0:
                report.status = TIMEOUT
                break
        limit = min(x for x in (remaining, req.per_k_seconds, float("inf")) if x is not None)
        budget = Budget(req.max_conflicts, None if limit == float("inf") else limit)
        rec, model, vm = _solve_k(P, k, opts, req.solver, budget, req.seed)
        report.per_k.append(rec)
        log.info("k=%d vars=%d clauses=%d %s (%.2fs)", k, rec.vars, rec.clauses, rec.result, rec.seconds)
        if rec.result == "sat":
            report.k = k
            _finish(P, req, report, model, vm)
            break
        if rec.result == "unknown":
            report.status = TIMEOUT
            break
    report.seconds = time.perf_counter() - t0
    return report


def _plan_parallel(P: FondProblem, req: PlanRequest, report: PlanReport, opts: EncodeOptions, t0: float) -> PlanReport:
    """Solve ``req.parallel`` consecutive k values at a time; the first SAT answer wins."""
    budget = Budget(req.max_conflicts, req.per_k_seconds)
    ks = list(range(req.start_k, req.max_k + 1))
    ctx = multiprocessing.get_context("spawn")
    with ctx.Pool(req.parallel) as pool:
        pending = {k: pool.apply_async(_solve_k, (P, k, opts, req.solver, budget, req.seed)) for k in ks[: req.parallel]}
        nxt = req.parallel
        while pending:
            if req.max_seconds is not None and time.perf_counter() - t0 > req.max_seconds:
                report.status = TIMEOUT
                pool.terminate()
                break
            done = [k for k, fut in pending.items() if fut.ready()]
            if not done:
                time.sleep(0.01)
                continue
            for k in sorted(done):
                rec, model, vm = pending.pop(k).get()
                report.per_k.append(rec)
                if rec.result == "sat":
                    report.k = k
                    report.note = (report.note + "; " if report.note else "") + f"parallel portfolio: k={k} answered first"
                    pool.terminate()
                    _finish(P, req, report, model, vm)
                    pending.clear()
                    break
                if rec.result == "unknown":
                    report.status = TIMEOUT
                if nxt < len(ks):
                    k2 = ks[nxt]
                    nxt += 1
                    pending[k2] = pool.apply_async(_solve_k, (P, k2, opts, req.solver, budget, req.seed))
    report.per_k.sort(key=lambda r: r.k)
    report.seconds = time.perf_counter() - t0
    return report
