"""Line-oriented grounded problem format.

::

    fond 1
    name <problem-name>
    atoms <N>
    <atom name>                      (N lines, ids 0..N-1 in order)
    init <id> <id> ...
    goal <id> <id> ...
    group <name> fair|unfair <K>
    outcome <label> pre <id>... add <id>... del <id>...   (K lines)

Names never contain whitespace.  Blank lines and lines starting with ``#``
are ignored.  ``pre``/``add``/``del`` keywords are always present, possibly
followed by no ids.
"""

from __future__ import annotations

from .core import ActionGroup, Atom, ContractError, FondProblem, Outcome


class GroundedFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def write_grounded(p: FondProblem) -> str:
    out = ["fond 1", f"name {p.name}", f"atoms {len(p.atoms)}"]
    out.extend(a.name for a in p.atoms)
    out.append(" ".join(["init", *map(str, sorted(p.init))]))
    out.append(" ".join(["goal", *map(str, sorted(p.goal))]))
    for g in p.groups:
        out.append(f"group {g.name} {'fair' if g.fair else 'unfair'} {len(g.outcomes)}")
        for oid in g.outcomes:
            o = p.outcomes[oid]
            out.append(
                " ".join(
                    ["outcome", o.name, "pre", *map(str, sorted(o.pre)),
                     "add", *map(str, sorted(o.add)), "del", *map(str, sorted(o.delete))]
                )
            )
    return "\n".join(out) + "\n"


def load_grounded(text: str) -> FondProblem:
    lines = [
        (i, ln.strip())
        for i, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    pos = 0

    def next_line(expect: str | None = None):
        nonlocal pos
        if pos >= len(lines):
            raise GroundedFormatError(
                f"unexpected end of file{f', expected {expect!r}' if expect else ''}",
                lines[-1][0] + 1 if lines else 1,
            )
        ln = lines[pos]
        pos += 1
        if expect is not None and ln[1].split()[0] != expect:
            raise GroundedFormatError(f"expected {expect!r}", ln[0])
        return ln

    def ints(tokens, lineno, n_atoms):
        try:
            vals = [int(t) for t in tokens]
        except ValueError as exc:
            raise GroundedFormatError(f"bad atom id ({exc})", lineno) from None
        for v in vals:
            if not 0 <= v < n_atoms:
                raise GroundedFormatError(f"atom id {v} not in atom table", lineno)
        return vals

    lineno, ln = next_line("fond")
    if ln.split() != ["fond", "1"]:
        raise GroundedFormatError("unsupported header (want 'fond 1')", lineno)
    name = "problem"
    lineno, ln = next_line()
    if ln.split()[0] == "name":
        parts = ln.split()
        if len(parts) != 2:
            raise GroundedFormatError("malformed name line", lineno)
        name = parts[1]
        lineno, ln = next_line()
    parts = ln.split()
    if parts[0] != "atoms" or len(parts) != 2 or not parts[1].isdigit():
        raise GroundedFormatError("expected 'atoms N'", lineno)
    n_atoms = int(parts[1])
    atoms = []
    for i in range(n_atoms):
        lineno, ln = next_line()
        if len(ln.split()) != 1:
            raise GroundedFormatError("atom names must not contain whitespace", lineno)
        atoms.append(Atom(i, ln))
    lineno, ln = next_line("init")
    init = ints(ln.split()[1:], lineno, n_atoms)
    lineno, ln = next_line("goal")
    goal = ints(ln.split()[1:], lineno, n_atoms)

    groups: list[ActionGroup] = []
    outcomes: list[Outcome] = []
    while pos < len(lines):
        lineno, ln = next_line("group")
        parts = ln.split()
        if len(parts) != 4 or parts[2] not in ("fair", "unfair") or not parts[3].isdigit():
            raise GroundedFormatError("expected 'group NAME fair|unfair K'", lineno)
        gid = len(groups)
        k = int(parts[3])
        if k < 1:
            raise GroundedFormatError("a group needs at least one outcome", lineno)
        oids = []
        pre_ref = None
        for _ in range(k):
            olineno, oln = next_line("outcome")
            toks = oln.split()
            try:
                ip, ia, idl = toks.index("pre"), toks.index("add"), toks.index("del")
            except ValueError:
                raise GroundedFormatError("outcome line needs pre/add/del sections", olineno) from None
            if not (ip == 2 and ip < ia < idl):
                raise GroundedFormatError("outcome sections out of order", olineno)
            pre = frozenset(ints(toks[ip + 1:ia], olineno, n_atoms))
            add = frozenset(ints(toks[ia + 1:idl], olineno, n_atoms))
            dele = frozenset(ints(toks[idl + 1:], olineno, n_atoms))
            if pre_ref is None:
                pre_ref = pre
            elif pre != pre_ref:
                raise GroundedFormatError("sibling outcomes must share preconditions", olineno)
            oid = len(outcomes)
            try:
                outcomes.append(Outcome(oid, gid, toks[1], pre, add, dele))
            except ContractError as exc:
                raise GroundedFormatError(str(exc), olineno) from None
            oids.append(oid)
        groups.append(ActionGroup(gid, parts[1], tuple(oids), pre_ref, parts[2] == "fair"))
    try:
        return FondProblem(tuple(atoms), frozenset(init), frozenset(goal), tuple(groups), tuple(outcomes), name)
    except ContractError as exc:
        raise GroundedFormatError(str(exc), lines[-1][0]) from None
