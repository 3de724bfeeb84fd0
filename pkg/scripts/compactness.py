#!/usr/bin/env python3
"""Controller size against reachable product size on tireworldLine(m).

    python scripts/compactness.py --max-m 7
"""

import argparse
import json
from pathlib import Path

from fondsat.analysis import reachable_states
from fondsat.benchgen import DomainRecipe, load_recipe
from fondsat.planner import PlanRequest, plan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-m", type=int, default=2)
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--solver", default="internal")
    ap.add_argument("--out", type=Path, default=Path("results/compactness.json"))
    args = ap.parse_args()
    rows = []
    print(f"{'m':>3} {'k':>3} {'size':>5} {'product':>8} {'states':>7} {'2^(m-2)':>8} {'sec':>7}")
    for m in range(args.min_m, args.max_m + 1):
        P = load_recipe(DomainRecipe("tireworldLine", {"m": m}))
        rep = plan(P, PlanRequest(max_k=2 * m + 2, solver=args.solver))
        row = {
            "m": m,
            "k": rep.k,
            "size": rep.controller.size if rep.controller else None,
            "productVertices": rep.verdict.vertices if rep.verdict else None,
            "reachableStates": len(reachable_states(P)),
            "bound": 2 ** (m - 2),
            "seconds": round(rep.seconds, 2),
        }
        rows.append(row)
        print(" ".join(f"{row[c]!s:>{w}}" for c, w in zip(row, (3, 3, 5, 8, 7, 8, 7))))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(rows, indent=2) + "\n")


if __name__ == "__main__":
    main()
