#!/usr/bin/env python3
"""Competition-style DIMACS solver: ``dimacs_solver.py FILE``.

Prints ``s SATISFIABLE`` / ``s UNSATISFIABLE`` and ``v`` lines, exiting
10 or 20. Uses pysat when installed and the bundled CDCL solver otherwise,
so ``fondsat plan --solver cmd:scripts/dimacs_solver.py`` works anywhere.
"""

import sys

from fondsat.cnf import parse_dimacs


def main(path: str) -> int:
    with open(path) as fh:
        cnf = parse_dimacs(fh.read())
    try:
        from pysat.solvers import Solver
    except ImportError:
        from fondsat.sat import solve_internal

        res = solve_internal(cnf)
        sat, model = res.sat, res.model
    else:
        with Solver(name="cadical153", bootstrap_with=cnf.clauses) as s:
            sat = s.solve()
            model = s.get_model() if sat else None
    if not sat:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    print("v " + " ".join(map(str, model or [])) + " 0")
    return 10


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
