import random
import stat
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fondsat.cnf import Cnf, DimacsError, emit_dimacs, parse_dimacs
from fondsat.sat import (
    Budget,
    ModelVerificationError,
    SolverOutputError,
    SolverProcessError,
    evaluate,
    solve,
    solve_external,
    solve_internal,
)
from fondsat.sat.cdcl import luby
from oracles import random_cnf, truth_table_sat
from problems import coin_flip

ROOT = Path(__file__).resolve().parents[1]


def cnf_of(clauses, num_vars=None):
    c = Cnf()
    c.num_vars = num_vars if num_vars is not None else max((abs(l) for cl in clauses for l in cl), default=0)
    for cl in clauses:
        c.add(cl)
    return c


def php(pigeons, holes):
    var = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p in range(pigeons):
            for q in range(p + 1, pigeons):
                clauses.append([-var(p, h), -var(q, h)])
    return cnf_of(clauses, pigeons * holes)


# -- DIMACS ----------------------------------------------------------------


def test_emit_empty():
    assert emit_dimacs(Cnf()) == "p cnf 0 0\n"


def test_emit_unit():
    assert emit_dimacs(cnf_of([[1]])) == "p cnf 1 1\n1 0\n"


def test_emit_names_as_comments():
    text = emit_dimacs(cnf_of([[1, -2]]), [None, "x", "y"])
    assert text.splitlines()[:2] == ["c 1 x", "c 2 y"]


def test_parse_errors():
    with pytest.raises(DimacsError):
        parse_dimacs("1 2 0\n")
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 2 1\n1 x 0\n")


@given(seed=st.integers(0, 10**6))
def test_dimacs_round_trip(seed):
    n, clauses = random_cnf(random.Random(seed))
    c = cnf_of(clauses, n)
    back = parse_dimacs(emit_dimacs(c))
    assert back.num_vars == n and back.clauses == c.clauses


def test_tags_and_families():
    c = Cnf()
    c.add([1], "7'")
    c.add([2], "7''")
    c.add([1, 2], "13rev")
    c.add([3], "sym")
    assert c.tag_counts()["7'"] == 1
    assert c.families() == {"7", "13"}


def test_empty_clause_marks_unsat():
    c = cnf_of([[1]])
    c.add([])
    assert c.trivially_unsat
    assert solve_internal(c).status == "unsat"


# -- internal solver -------------------------------------------------------


def test_unit_sat():
    res = solve_internal(cnf_of([[1]]))
    assert res.sat and res.model == [1]


def test_contradiction_unsat():
    assert solve_internal(cnf_of([[1], [-1]])).status == "unsat"


def test_pigeonhole_unsat():
    c = php(4, 3)
    assert not truth_table_sat(c.num_vars, c.clauses)
    assert solve_internal(c).status == "unsat"


def test_pigeonhole_fits():
    res = solve_internal(php(3, 3))
    assert res.sat and evaluate(php(3, 3), res.model)


def test_conflict_budget_gives_unknown():
    res = solve_internal(php(7, 6), Budget(max_conflicts=5))
    assert res.status == "unknown"


def test_luby_prefix():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


@given(seed=st.integers(0, 10**6), solver_seed=st.integers(0, 5))
def test_internal_matches_truth_table(seed, solver_seed):
    n, clauses = random_cnf(random.Random(seed))
    c = cnf_of(clauses, n)
    res = solve_internal(c, seed=solver_seed)
    assert res.sat == truth_table_sat(n, clauses)
    if res.sat:
        assert evaluate(c, res.model)


# -- evaluate --------------------------------------------------------------


def test_evaluate_cases():
    c = cnf_of([[1], [-2, 3]])
    res = solve_internal(c)
    assert evaluate(c, res.model)
    assert not evaluate(c, [-1] + res.model[1:])
    assert evaluate(Cnf(), [])
    with pytest.raises(ValueError):
        evaluate(c, [1])


# -- external solvers ------------------------------------------------------


def fake_solver(tmp_path: Path, body: str) -> str:
    script = tmp_path / "fake.py"
    script.write_text("import sys\n" + body)
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    return f"{sys.executable} {script}"


def test_external_conforming_solver():
    c = cnf_of([[1, 2], [-1], [2, 3]])
    res = solve(c, f"cmd:{sys.executable} {ROOT / 'scripts' / 'dimacs_solver.py'}")
    assert res.sat and evaluate(c, res.model)
    res = solve(cnf_of([[1], [-1]]), f"cmd:{sys.executable} {ROOT / 'scripts' / 'dimacs_solver.py'}")
    assert res.status == "unsat"


def test_external_garbage_output(tmp_path):
    cmd = fake_solver(tmp_path, "print('hello there')\nsys.exit(10)\n")
    with pytest.raises(SolverOutputError):
        solve_external(cnf_of([[1]]), cmd.split())


def test_external_bogus_model(tmp_path):
    cmd = fake_solver(tmp_path, "print('s SATISFIABLE')\nprint('v -1 0')\nsys.exit(10)\n")
    with pytest.raises(ModelVerificationError):
        solve_external(cnf_of([[1]]), cmd.split())


def test_external_exit_code_contradiction(tmp_path):
    cmd = fake_solver(tmp_path, "print('s UNSATISFIABLE')\nsys.exit(10)\n")
    with pytest.raises(SolverOutputError):
        solve_external(cnf_of([[1]]), cmd.split())


def test_external_crash(tmp_path):
    cmd = fake_solver(tmp_path, "sys.exit(3)\n")
    with pytest.raises(SolverProcessError):
        solve_external(cnf_of([[1]]), cmd.split())


def test_external_missing_binary():
    with pytest.raises(SolverProcessError):
        solve_external(cnf_of([[1]]), ["/nonexistent/solver"])


def test_external_timeout(tmp_path):
    cmd = fake_solver(tmp_path, "import time\ntime.sleep(10)\n")
    res = solve_external(cnf_of([[1]]), cmd.split(), Budget(max_seconds=0.5))
    assert res.status == "unknown"


def test_external_model_completion(tmp_path):
    # a solver may omit variables; they default to false before re-checking
    cmd = fake_solver(tmp_path, "print('s SATISFIABLE')\nprint('v 1 0')\nsys.exit(10)\n")
    res = solve_external(cnf_of([[1], [-2]]), cmd.split())
    assert res.model == [1, -2]


def test_unknown_solver_spec():
    with pytest.raises(ValueError):
        solve(cnf_of([[1]]), "magic")


def test_pysat_backend_models_verified():
    pytest.importorskip("pysat")
    from fondsat.encoder import encode

    cnf, _ = encode(coin_flip(), 2)
    for name in ("minisat22", "cadical153", "glucose4"):
        res = solve(cnf, f"pysat:{name}")
        assert res.sat and evaluate(cnf, res.model)
