#!/usr/bin/env python3
"""L_m, shortest weak plan and misleading-plan counts for every recipe default.

    python scripts/robustness_table.py --cap 1000
"""

import argparse
import json
from pathlib import Path

from fondsat.analysis import analyze
from fondsat.benchgen import DomainRecipe, list_domains, load_recipe


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cap", type=int, default=1000)
    ap.add_argument("--out", type=Path, default=Path("results/robustness.json"))
    args = ap.parse_args()
    table = {}
    for name in list_domains():
        r = DomainRecipe(name)
        rep = analyze(load_recipe(r), cap=args.cap)
        table[r.label()] = rep.to_dict()
        print(f"{r.label():40s} Lm={rep.lm} weak={rep.shortest_weak_plan} misleading={rep.misleading_exists} ({rep.misleading_count})")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(table, indent=2) + "\n")


if __name__ == "__main__":
    main()
