"""Command line entry point ``fondsat``.

Exit codes: 0 solved or valid, 1 no solution within budget, 2 input error,
3 internal error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analysis import analyze
from .benchgen import DomainRecipe, RecipeError, generate, list_domains
from .cnf import emit_dimacs
from .core import ContractError, FondProblem, Mode
from .encoder import EncodeOptions, encode
from .grounded import GroundedFormatError, load_grounded, write_grounded
from .pddl import PddlError, load_pddl
from .planner import EXHAUSTED, SOLVED, TIMEOUT, PlanRequest, plan
from .policy import dump_controller, index_chooser, load_controller, random_chooser, simulate
from .sat import SolverError
from .verifier import verify

EXIT_OK, EXIT_NOSOL, EXIT_INPUT, EXIT_INTERNAL, EXIT_VERIFY = 0, 1, 2, 3, 4

log = logging.getLogger("fondsat")


class InputError(Exception):
    pass


def load_problem(paths: list[str]) -> FondProblem:
    """One path: grounded file. Two paths: PDDL domain and problem."""
    try:
        texts = [Path(p).read_text() for p in paths]
    except OSError as exc:
        raise InputError(str(exc)) from exc
    if len(texts) == 1:
        return load_grounded(texts[0])
    if len(texts) == 2:
        return load_pddl(texts[0], texts[1])
    raise InputError("expected a grounded file or a domain and a problem file")


def _mode(text: str) -> Mode:
    try:
        return Mode.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown mode {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("inputs", nargs="+", help="grounded file, or domain and problem PDDL files")
    p.add_argument("--mode", type=_mode, default=Mode.STRONG_CYCLIC, help="strong-cyclic | strong | dual")


def _write(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def cmd_plan(args) -> int:
    P = load_problem(args.inputs)
    req = PlanRequest(
        mode=args.mode,
        start_k=args.start_k,
        max_k=args.max_k,
        max_seconds=args.max_seconds,
        per_k_seconds=args.per_k_seconds,
        solver=args.solver,
        use_optimized7=not args.basic7,
        symmetry_breaking=not args.no_symmetry,
        amo=args.amo,
        include_reverse13=not args.no_reverse13,
        verify=not args.no_verify,
        seed=args.seed,
        parallel=args.parallel,
    )
    report = plan(P, req)
    for r in report.per_k:
        print(f"k={r.k} vars={r.vars} clauses={r.clauses} {r.result} {r.seconds:.2f}s")
    out = Path(args.out) if args.out else None
    _write(out, "report.json", json.dumps(report.to_dict(P), indent=2) + "\n")
    _write(out, "timings.json", json.dumps(report.to_dict(P, timings=True), indent=2) + "\n")
    if report.controller is not None:
        _write(out, "controller.json", dump_controller(P, report.controller))
    size = report.controller.size if report.controller else None
    print(f"status={report.status} mode={report.mode.value} k={report.k} size={size} ({report.seconds:.2f}s)")
    if report.note:
        print(f"note: {report.note}")
    if report.status == SOLVED:
        return EXIT_OK
    if report.status in (EXHAUSTED, TIMEOUT):
        return EXIT_NOSOL
    return EXIT_VERIFY


def cmd_verify(args) -> int:
    P = load_problem(args.inputs)
    try:
        c = load_controller(P, Path(args.controller).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"bad controller file: {exc}") from exc
    verdict = verify(P, c, args.mode)
    print(json.dumps(verdict.to_dict(P), indent=2))
    return EXIT_OK if verdict.valid else EXIT_VERIFY


def cmd_simulate(args) -> int:
    P = load_problem(args.inputs)
    try:
        c = load_controller(P, Path(args.controller).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"bad controller file: {exc}") from exc
    chooser = {"random": random_chooser(args.seed), "first": index_chooser(0), "last": index_chooser(-1)}[args.chooser]
    traj = simulate(P, c, chooser, args.steps)
    for v, b in zip(traj.vertices, traj.outcomes):
        print(f"node {v[0]} {P.describe(v[1])} -> {P.groups[b.group].name} [{b.name}]")
    last = traj.vertices[-1]
    print(f"node {last[0]} {P.describe(last[1])}")
    print(f"status={traj.status} steps={len(traj)}")
    return EXIT_OK if traj.status == "goal" else EXIT_NOSOL


def cmd_analyze(args) -> int:
    P = load_problem(args.inputs)
    sys.stdout.write(analyze(P, cap=args.cap).to_text())
    return EXIT_OK


def _parse_params(items: list[str]) -> dict[str, int]:
    out = {}
    for it in items:
        key, sep, val = it.partition("=")
        if not sep:
            raise InputError(f"parameter {it!r} is not key=value")
        try:
            out[key] = int(val)
        except ValueError:
            raise InputError(f"parameter {key} needs an integer, got {val!r}") from None
    return out


def cmd_gen(args) -> int:
    if args.list:
        for name, info in list_domains().items():
            ps = ", ".join(f"{k}={p.default} [{p.low}..{p.high}] {p.doc}" for k, p in info.params.items())
            print(f"{name}: {info.doc} ({ps})")
        return EXIT_OK
    if not args.name:
        raise InputError("gen needs a domain name (or --list)")
    recipe = DomainRecipe(args.name, _parse_params(args.param))
    dom, prob = generate(recipe)
    out = Path(args.out or ".")
    _write(out, "domain.pddl", dom)
    _write(out, "problem.pddl", prob)
    if args.grounded:
        _write(out, "problem.fond", write_grounded(load_pddl(dom, prob)))
    print(f"wrote {recipe.label()} to {out}")
    return EXIT_OK


def cmd_encode(args) -> int:
    P = load_problem(args.inputs)
    opts = EncodeOptions(
        mode=args.mode,
        use_optimized7=not args.basic7,
        symmetry_breaking=not args.no_symmetry,
        amo=args.amo,
        include_reverse13=not args.no_reverse13,
    )
    cnf, vm = encode(P, args.k, opts)
    text = emit_dimacs(cnf, vm.names() if not args.no_comments else None)
    if args.out:
        out = Path(args.out)
        _write(out, "formula.cnf", text)
        _write(out, "varmap.tsv", vm.sidecar())
        print(f"k={args.k} vars={cnf.num_vars} clauses={len(cnf.clauses)} written to {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _encoding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--basic7", action="store_true", help="use the unoptimized frame clauses")
    p.add_argument("--no-symmetry", action="store_true", help="omit symmetry-breaking clauses")
    p.add_argument("--no-reverse13", action="store_true", help="omit the reverse goal-distance clauses")
    p.add_argument("--amo", choices=("pairwise", "ladder"), default="pairwise")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fondsat", description="SAT-based FOND planner")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="synthesize a controller by iterative deepening on k")
    _common(p)
    p.add_argument("--start-k", type=int, default=2)
    p.add_argument("--max-k", type=int, default=20)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--per-k-seconds", type=float, default=None)
    p.add_argument("--solver", default="internal", help="internal | cmd:<path> | pysat[:name]")
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", type=int, default=1, help="k values solved concurrently")
    p.add_argument("--out", default=None, help="directory for report.json and controller.json")
    _encoding_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="check a controller file")
    _common(p)
    p.add_argument("--controller", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run a controller against a chooser")
    _common(p)
    p.add_argument("--controller", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--chooser", choices=("random", "first", "last"), default="random")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="explicit solvability, L_m and misleading plans")
    _common(p)
    p.add_argument("--cap", type=int, default=1000)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="write a benchmark instance")
    p.add_argument("name", nargs="?")
    p.add_argument("--param", action="append", default=[], help="key=value, repeatable")
    p.add_argument("--out", default=None)
    p.add_argument("--grounded", action="store_true", help="also write the grounded file")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="emit the CNF for one k")
    _common(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--out", default=None, help="directory for formula.cnf and varmap.tsv")
    p.add_argument("--no-comments", action="store_true")
    _encoding_flags(p)
    p.set_defaults(func=cmd_encode)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, PddlError, GroundedFormatError, RecipeError, ContractError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
