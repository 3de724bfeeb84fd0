"""Clause database with per-clause provenance tags, and DIMACS I/O."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DimacsError(ValueError):
    pass


@dataclass
class Cnf:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)
    # set when an empty clause was added; the formula is trivially UNSAT
    trivially_unsat: bool = False

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, lits: Iterable[int], tag: str = "") -> None:
        clause = list(dict.fromkeys(lits))
        if not clause:
            self.trivially_unsat = True
        self.clauses.append(clause)
        self.tags.append(tag)

    def __len__(self) -> int:
        return len(self.clauses)

    def tag_counts(self) -> Counter:
        return Counter(self.tags)

    def families(self) -> set[str]:
        """Leading clause-family numbers present (``7'`` and ``7''`` count as 7)."""
        out = set()
        for t in set(self.tags):
            digits = ""
            for ch in t:
                if ch.isdigit():
                    digits += ch
                else:
                    break
            if digits:
                out.add(digits)
        return out


def emit_dimacs(cnf: Cnf, names: Sequence[str] | None = None) -> str:
    """DIMACS text; ``names[v]`` (1-based) become ``c`` comment lines."""
    out = []
    if names:
        for v in range(1, cnf.num_vars + 1):
            if v < len(names) and names[v]:
                out.append(f"c {v} {names[v]}")
    out.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for c in cnf.clauses:
        out.append(" ".join(map(str, c)) + " 0" if c else "0")
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> Cnf:
    cnf = Cnf()
    header = None
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            cnf.num_vars = header[0]
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                cnf.add(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsError(f"line {lineno}: literal {lit} exceeds declared {header[0]} vars")
                current.append(lit)
    if current:
        cnf.add(current)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if len(cnf.clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(cnf.clauses)}")
    return cnf
