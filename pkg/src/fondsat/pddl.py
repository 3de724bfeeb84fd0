"""Parser and grounder for the FOND PDDL subset with ``oneof`` effects.

Supported: ``:strips``, ``:typing``, ``:non-deterministic``, ``:equality``
(static ``=`` tests in preconditions only).  Effects are a conjunction of
literals and ``oneof`` nodes whose branches are literals or conjunctions of
literals.  Problems may carry an ``(:unfair schema ...)`` block naming the
schemas whose ground groups are unfair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import ActionGroup, Atom, FondProblem, Outcome

SUPPORTED_REQUIREMENTS = {":strips", ":typing", ":non-deterministic", ":equality"}


class PddlError(Exception):
    """Base class; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class PddlSyntaxError(PddlError):
    pass


class UnsupportedConstruct(PddlError):
    pass


class PddlSemanticError(PddlError):
    pass


# -- s-expressions ---------------------------------------------------------


class Sym(str):
    line: int = 0
    col: int = 0


class SList(list):
    line: int = 0
    col: int = 0


def _pos(x):
    return getattr(x, "line", None), getattr(x, "col", None)


def read_sexp(text: str) -> SList:
    """Read a single top-level s-expression, lower-casing symbols."""
    stack: list[SList] = []
    result = None
    line, col = 1, 0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 0
            i += 1
            continue
        col += 1
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "(":
            node = SList()
            node.line, node.col = line, col
            if stack:
                stack[-1].append(node)
            elif result is not None:
                raise PddlSyntaxError("trailing content after top-level expression", line, col)
            stack.append(node)
            i += 1
        elif ch == ")":
            if not stack:
                raise PddlSyntaxError("unbalanced ')'", line, col)
            done = stack.pop()
            if not stack:
                result = done
            i += 1
        else:
            start, scol = i, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
            col = scol + (i - start) - 1
            tok = Sym(text[start:i].lower())
            tok.line, tok.col = line, scol
            if not stack:
                raise PddlSyntaxError(f"token {tok!r} outside any expression", line, scol)
            stack[-1].append(tok)
    if stack:
        raise PddlSyntaxError("unexpected end of input: missing ')'", stack[-1].line, stack[-1].col)
    if result is None:
        raise PddlSyntaxError("empty input", 1, 1)
    return result


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    pred: str
    args: tuple[str, ...]
    positive: bool = True


@dataclass
class ActionSchema:
    name: str
    params: list[tuple[str, str]]
    pre: list[Literal]
    equalities: list[tuple[str, str, bool]]
    common: list[Literal]
    oneofs: list[list[list[Literal]]]

    def outcome_effects(self) -> list[list[Literal]]:
        """Effect literal lists, one per outcome, in ordinal order."""
        if not self.oneofs:
            return [list(self.common)]
        out = []
        for combo in itertools.product(*self.oneofs):
            lits = list(self.common)
            for branch in combo:
                lits.extend(branch)
            out.append(lits)
        return out


@dataclass
class DomainAst:
    name: str
    requirements: list[str]
    types: dict[str, str | None]
    constants: dict[str, str]
    predicates: dict[str, list[tuple[str, str]]]
    actions: list[ActionSchema]

    def is_subtype(self, t: str, of: str) -> bool:
        seen = set()
        while t is not None and t not in seen:
            if t == of:
                return True
            seen.add(t)
            t = self.types.get(t)
        return of == "object"


@dataclass
class ProblemAst:
    name: str
    domain: str
    objects: dict[str, str]
    init: list[tuple[str, tuple[str, ...]]]
    goal: list[tuple[str, tuple[str, ...]]]
    unfair: list[str] = field(default_factory=list)


# -- parsing ---------------------------------------------------------------


def _expect_list(x, what: str) -> SList:
    if not isinstance(x, list):
        raise PddlSyntaxError(f"expected {what}, got {x!r}", *_pos(x))
    return x


def _typed_list(items, what: str, var: bool) -> list[tuple[str, str | None]]:
    """Parse ``a b - t c`` into [(a, t), (b, t), (c, None)]."""
    out: list[tuple[str, str | None]] = []
    pending: list[Sym] = []
    i = 0
    while i < len(items):
        tok = items[i]
        if isinstance(tok, list):
            raise UnsupportedConstruct(f"unsupported type expression in {what}", *_pos(tok))
        if tok == "-":
            if i + 1 >= len(items) or isinstance(items[i + 1], list):
                raise PddlSyntaxError(f"missing type after '-' in {what}", *_pos(tok))
            t = items[i + 1]
            if not pending:
                raise PddlSyntaxError(f"type {t!r} with no names in {what}", *_pos(tok))
            out.extend((p, str(t)) for p in pending)
            pending = []
            i += 2
            continue
        if var and not tok.startswith("?"):
            raise PddlSyntaxError(f"expected variable in {what}, got {tok!r}", *_pos(tok))
        pending.append(tok)
        i += 1
    out.extend((p, None) for p in pending)
    return out


def _parse_atom(x, where: str) -> tuple[str, tuple[str, ...]]:
    x = _expect_list(x, f"atom in {where}")
    if not x or isinstance(x[0], list):
        raise PddlSyntaxError(f"malformed atom in {where}", *_pos(x))
    for a in x[1:]:
        if isinstance(a, list):
            raise PddlSyntaxError(f"nested term in atom {x[0]!r}", *_pos(a))
    return str(x[0]), tuple(str(a) for a in x[1:])


def _parse_effect_literal(x, where: str) -> Literal:
    x = _expect_list(x, f"literal in {where}")
    if x and x[0] == "not":
        if len(x) != 2:
            raise PddlSyntaxError("'not' takes one argument", *_pos(x))
        pred, args = _parse_atom(x[1], where)
        return Literal(pred, args, False)
    if x and x[0] in ("when", "forall", "increase", "decrease", "assign"):
        raise UnsupportedConstruct(f"'{x[0]}' effects are unsupported", *_pos(x))
    if x and x[0] in ("and", "oneof"):
        raise PddlSyntaxError(f"unexpected '{x[0]}' where a literal is required", *_pos(x))
    pred, args = _parse_atom(x, where)
    return Literal(pred, args, True)


def _parse_branch(x, where: str) -> list[Literal]:
    x = _expect_list(x, f"oneof branch in {where}")
    if x and x[0] == "oneof":
        raise UnsupportedConstruct("nested oneof unsupported", *_pos(x))
    if x and x[0] == "and":
        out = []
        for c in x[1:]:
            c = _expect_list(c, "literal")
            if c and c[0] == "oneof":
                raise UnsupportedConstruct("nested oneof unsupported", *_pos(c))
            if c and c[0] == "and":
                out.extend(_parse_branch(c, where))
            else:
                out.append(_parse_effect_literal(c, where))
        return out
    return [_parse_effect_literal(x, where)]


def _parse_effect(x, where: str) -> tuple[list[Literal], list[list[list[Literal]]]]:
    x = _expect_list(x, f"effect of {where}")
    common: list[Literal] = []
    oneofs: list[list[list[Literal]]] = []

    def visit(node):
        node = _expect_list(node, f"effect of {where}")
        if node and node[0] == "and":
            for c in node[1:]:
                visit(c)
        elif node and node[0] == "oneof":
            if len(node) < 2:
                raise PddlSyntaxError("oneof needs at least one branch", *_pos(node))
            oneofs.append([_parse_branch(b, where) for b in node[1:]])
        else:
            common.append(_parse_effect_literal(node, where))

    visit(x)
    return common, oneofs


def _parse_precondition(x, where: str):
    pre: list[Literal] = []
    eqs: list[tuple[str, str, bool]] = []

    def visit(node):
        node = _expect_list(node, f"precondition of {where}")
        if not node:
            return
        head = node[0]
        if head == "and":
            for c in node[1:]:
                visit(c)
        elif head == "=":
            if len(node) != 3:
                raise PddlSyntaxError("'=' takes two arguments", *_pos(node))
            eqs.append((str(node[1]), str(node[2]), True))
        elif head == "not":
            if len(node) != 2:
                raise PddlSyntaxError("'not' takes one argument", *_pos(node))
            inner = _expect_list(node[1], "negated condition")
            if inner and inner[0] == "=":
                eqs.append((str(inner[1]), str(inner[2]), False))
            else:
                raise UnsupportedConstruct("negative preconditions are unsupported", *_pos(node))
        elif head in ("or", "imply", "exists", "forall", "when"):
            raise UnsupportedConstruct(f"'{head}' in preconditions is unsupported", *_pos(node))
        else:
            pred, args = _parse_atom(node, where)
            pre.append(Literal(pred, args))

    visit(x)
    return pre, eqs


def parse_domain(text: str) -> DomainAst:
    root = read_sexp(text)
    if len(root) < 2 or root[0] != "define":
        raise PddlSyntaxError("domain must start with (define", *_pos(root))
    head = _expect_list(root[1], "(domain NAME)")
    if len(head) != 2 or head[0] != "domain":
        raise PddlSyntaxError("expected (domain NAME)", *_pos(head))
    name = str(head[1])
    requirements: list[str] = []
    types: dict[str, str | None] = {"object": None}
    constants: dict[str, str] = {}
    predicates: dict[str, list[tuple[str, str]]] = {}
    actions: list[ActionSchema] = []
    for sec in root[2:]:
        sec = _expect_list(sec, "domain section")
        key = sec[0] if sec else None
        if key == ":requirements":
            for r in sec[1:]:
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedConstruct(f"requirement {r} is unsupported", *_pos(r))
                requirements.append(str(r))
        elif key == ":types":
            for t, parent in _typed_list(sec[1:], ":types", var=False):
                types[str(t)] = parent or "object"
        elif key == ":constants":
            for c, t in _typed_list(sec[1:], ":constants", var=False):
                constants[str(c)] = t or "object"
        elif key == ":predicates":
            for p in sec[1:]:
                p = _expect_list(p, "predicate declaration")
                if not p or isinstance(p[0], list):
                    raise PddlSyntaxError("malformed predicate declaration", *_pos(p))
                params = [(str(v), t or "object") for v, t in _typed_list(p[1:], str(p[0]), var=True)]
                predicates[str(p[0])] = params
        elif key == ":action":
            actions.append(_parse_action(sec))
        elif key in (":functions", ":derived", ":axiom", ":durative-action"):
            raise UnsupportedConstruct(f"{key} is unsupported", *_pos(sec))
        else:
            raise PddlSyntaxError(f"unknown domain section {key!r}", *_pos(sec))
    dom = DomainAst(name, requirements, types, constants, predicates, actions)
    _validate_domain(dom)
    return dom


def _parse_action(sec: SList) -> ActionSchema:
    if len(sec) < 2 or isinstance(sec[1], list):
        raise PddlSyntaxError("action needs a name", *_pos(sec))
    name = str(sec[1])
    fields: dict[str, object] = {}
    i = 2
    while i < len(sec):
        key = sec[i]
        if isinstance(key, list) or not key.startswith(":") or i + 1 >= len(sec):
            raise PddlSyntaxError(f"malformed action body of {name}", *_pos(key))
        fields[str(key)] = sec[i + 1]
        i += 2
    for k in fields:
        if k not in (":parameters", ":precondition", ":effect"):
            raise UnsupportedConstruct(f"action field {k} is unsupported", *_pos(sec))
    params_node = fields.get(":parameters", SList())
    params = [
        (str(v), t or "object")
        for v, t in _typed_list(_expect_list(params_node, "parameter list"), name, var=True)
    ]
    pre, eqs = _parse_precondition(fields.get(":precondition", SList()), name)
    common, oneofs = _parse_effect(fields.get(":effect", SList(["and"])), name)
    return ActionSchema(name, params, pre, eqs, common, oneofs)


def _validate_domain(d: DomainAst) -> None:
    for t, parent in d.types.items():
        if parent is not None and parent not in d.types:
            raise PddlSemanticError(f"type {t} has undeclared parent {parent}")
    for p, params in d.predicates.items():
        for _, t in params:
            if t not in d.types:
                raise PddlSemanticError(f"predicate {p} uses undeclared type {t}")
    for c, t in d.constants.items():
        if t not in d.types:
            raise PddlSemanticError(f"constant {c} has undeclared type {t}")
    names = set()
    for a in d.actions:
        if a.name in names:
            raise PddlSemanticError(f"duplicate action {a.name}")
        names.add(a.name)
        scope = dict(a.params)
        for v, t in a.params:
            if t not in d.types:
                raise PddlSemanticError(f"action {a.name} parameter {v} has undeclared type {t}")
        lits = list(a.pre) + list(a.common) + [l for o in a.oneofs for b in o for l in b]
        for lit in lits:
            if lit.pred not in d.predicates:
                raise PddlSemanticError(f"action {a.name} uses unknown predicate {lit.pred}")
            decl = d.predicates[lit.pred]
            if len(decl) != len(lit.args):
                raise PddlSemanticError(
                    f"action {a.name}: {lit.pred} expects {len(decl)} arguments, got {len(lit.args)}"
                )
            for arg, (_, t) in zip(lit.args, decl):
                if arg.startswith("?"):
                    if arg not in scope:
                        raise PddlSemanticError(f"action {a.name}: unbound variable {arg}")
                    if not (d.is_subtype(scope[arg], t) or d.is_subtype(t, scope[arg])):
                        raise PddlSemanticError(
                            f"action {a.name}: {arg} of type {scope[arg]} cannot fill {t} in {lit.pred}"
                        )
                elif arg not in d.constants:
                    raise PddlSemanticError(f"action {a.name}: unknown constant {arg}")
        for x, y, _ in a.equalities:
            for arg in (x, y):
                if arg.startswith("?") and arg not in scope:
                    raise PddlSemanticError(f"action {a.name}: unbound variable {arg} in '='")


def parse_problem(text: str) -> ProblemAst:
    root = read_sexp(text)
    if len(root) < 2 or root[0] != "define":
        raise PddlSyntaxError("problem must start with (define", *_pos(root))
    head = _expect_list(root[1], "(problem NAME)")
    if len(head) != 2 or head[0] != "problem":
        raise PddlSyntaxError("expected (problem NAME)", *_pos(head))
    name = str(head[1])
    domain = None
    objects: dict[str, str] = {}
    init: list[tuple[str, tuple[str, ...]]] = []
    goal: list[tuple[str, tuple[str, ...]]] = []
    unfair: list[str] = []
    for sec in root[2:]:
        sec = _expect_list(sec, "problem section")
        key = sec[0] if sec else None
        if key == ":domain":
            domain = str(sec[1])
        elif key == ":objects":
            for o, t in _typed_list(sec[1:], ":objects", var=False):
                objects[str(o)] = t
        elif key == ":init":
            for a in sec[1:]:
                a = _expect_list(a, "init atom")
                if a and a[0] == "not":
                    raise UnsupportedConstruct("negative init literals are unsupported", *_pos(a))
                init.append(_parse_atom(a, ":init"))
        elif key == ":goal":
            if len(sec) != 2:
                raise PddlSyntaxError("goal takes one formula", *_pos(sec))
            goal = _parse_goal(sec[1])
        elif key == ":unfair":
            unfair.extend(str(s) for s in sec[1:])
        elif key == ":requirements":
            for r in sec[1:]:
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedConstruct(f"requirement {r} is unsupported", *_pos(r))
        elif key in (":metric", ":constraints"):
            raise UnsupportedConstruct(f"{key} is unsupported", *_pos(sec))
        else:
            raise PddlSyntaxError(f"unknown problem section {key!r}", *_pos(sec))
    if domain is None:
        raise PddlSemanticError("problem lacks (:domain NAME)")
    return ProblemAst(name, domain, objects, init, goal, unfair)


def _parse_goal(x) -> list[tuple[str, tuple[str, ...]]]:
    x = _expect_list(x, "goal")
    if x and x[0] == "and":
        out = []
        for c in x[1:]:
            out.extend(_parse_goal(c))
        return out
    if x and x[0] in ("not", "or", "imply", "exists", "forall"):
        raise UnsupportedConstruct(f"'{x[0]}' in goals is unsupported (goals are positive)", *_pos(x))
    if not x:
        return []
    return [_parse_atom(x, ":goal")]


def parse(domain_text: str, problem_text: str) -> tuple[DomainAst, ProblemAst]:
    return parse_domain(domain_text), parse_problem(problem_text)


# -- grounding -------------------------------------------------------------


def _atom_name(pred: str, args: tuple[str, ...]) -> str:
    return f"{pred}({','.join(args)})" if args else pred


def ground(d: DomainAst, p: ProblemAst, prune_static: bool = True) -> FondProblem:
    """Ground every type-consistent schema instantiation.

    With ``prune_static`` (default), instantiations whose static
    preconditions are false in the initial state are dropped, and static
    atoms absent from init are left out of the atom table.  Both removals
    are semantics-preserving: such groups are never applicable.
    """
    if p.domain != d.name:
        raise PddlSemanticError(f"problem is for domain {p.domain}, not {d.name}")
    objects: dict[str, str] = dict(d.constants)
    typed = bool(set(d.types) - {"object"})
    for o, t in p.objects.items():
        if t is None:
            if typed:
                raise PddlSemanticError(f"untyped object {o}")
            t = "object"
        if t not in d.types:
            raise PddlSemanticError(f"object {o} has undeclared type {t}")
        objects[o] = t
    by_type: dict[str, list[str]] = {
        t: [o for o, ot in objects.items() if d.is_subtype(ot, t)] for t in d.types
    }

    fluents = set()
    for a in d.actions:
        for lit in a.common:
            fluents.add(lit.pred)
        for o in a.oneofs:
            for b in o:
                for lit in b:
                    fluents.add(lit.pred)
    static = set(d.predicates) - fluents

    def check_ground(pred, args, where):
        if pred not in d.predicates:
            raise PddlSemanticError(f"{where} atom with unknown predicate {pred}")
        decl = d.predicates[pred]
        if len(decl) != len(args):
            raise PddlSemanticError(f"{where} atom {pred} has wrong arity")
        for a, (_, t) in zip(args, decl):
            if a not in objects:
                raise PddlSemanticError(f"{where} atom {pred} uses unknown object {a}")
            if not d.is_subtype(objects[a], t):
                raise PddlSemanticError(f"{where} atom {pred}: {a} is not a {t}")

    for pred, args in p.init:
        check_ground(pred, args, "init")
    for pred, args in p.goal:
        check_ground(pred, args, "goal")
    init_set = {(pred, args) for pred, args in p.init}
    goal_set = {(pred, args) for pred, args in p.goal}

    atoms: list[Atom] = []
    index: dict[tuple[str, tuple[str, ...]], int] = {}
    for pred, params in d.predicates.items():
        for args in itertools.product(*(by_type[t] for _, t in params)):
            key = (pred, tuple(args))
            if pred in static and prune_static and key not in init_set and key not in goal_set:
                continue
            index[key] = len(atoms)
            atoms.append(Atom(len(atoms), _atom_name(pred, key[1])))

    unfair = set(p.unfair)
    unknown = unfair - {a.name for a in d.actions}
    if unknown:
        raise PddlSemanticError(f"unfair block names unknown schemas {sorted(unknown)}")

    groups: list[ActionGroup] = []
    outcomes: list[Outcome] = []
    for schema in d.actions:
        effects = schema.outcome_effects()
        for binding in _bindings(schema, by_type, static, init_set, prune_static):

            def resolve(lit: Literal):
                return (lit.pred, tuple(binding.get(a, a) for a in lit.args))

            pre = []
            ok = True
            for lit in schema.pre:
                key = resolve(lit)
                if key not in index:
                    ok = False
                    break
                pre.append(index[key])
            if not ok:
                continue
            gid = len(groups)
            pre_ids = frozenset(pre)
            oids = []
            for ordinal, lits in enumerate(effects, start=1):
                add, dele = set(), set()
                for lit in lits:
                    key = resolve(lit)
                    (add if lit.positive else dele).add(index[key])
                # delete-then-add: an atom both added and deleted ends up true
                dele -= add
                oid = len(outcomes)
                outcomes.append(
                    Outcome(oid, gid, f"{schema.name}#{ordinal}", pre_ids, frozenset(add), frozenset(dele))
                )
                oids.append(oid)
            args = tuple(binding[v] for v, _ in schema.params)
            groups.append(
                ActionGroup(gid, _atom_name(schema.name, args), tuple(oids), pre_ids, schema.name not in unfair)
            )

    init_ids = frozenset(index[k] for k in init_set if k in index)
    goal_ids = frozenset(index[k] for k in goal_set)
    return FondProblem(tuple(atoms), init_ids, goal_ids, tuple(groups), tuple(outcomes), p.name)


def _bindings(schema: ActionSchema, by_type, static, init_set, prune_static):
    """Backtracking enumeration of parameter bindings with early static checks."""
    params = schema.params
    checks_at: list[list] = [[] for _ in params]
    pos = {v: i for i, (v, _) in enumerate(params)}

    def last_var(args):
        idx = [pos[a] for a in args if a in pos]
        return max(idx) if idx else -1

    pre_static = [lit for lit in schema.pre if lit.pred in static] if prune_static else []
    ground_checks = []
    for lit in pre_static:
        i = last_var(lit.args)
        (checks_at[i] if i >= 0 else ground_checks).append(("lit", lit))
    for x, y, positive in schema.equalities:
        i = last_var((x, y))
        (checks_at[i] if i >= 0 else ground_checks).append(("eq", (x, y, positive)))

    binding: dict[str, str] = {}

    def holds(check) -> bool:
        kind, data = check
        if kind == "lit":
            return (data.pred, tuple(binding.get(a, a) for a in data.args)) in init_set
        x, y, positive = data
        return (binding.get(x, x) == binding.get(y, y)) == positive

    if not all(holds(c) for c in ground_checks):
        return

    def rec(i):
        if i == len(params):
            yield dict(binding)
            return
        v, t = params[i]
        for obj in by_type[t]:
            binding[v] = obj
            if all(holds(c) for c in checks_at[i]):
                yield from rec(i + 1)
        binding.pop(v, None)

    yield from rec(0)


def load_pddl(domain_text: str, problem_text: str, prune_static: bool = True) -> FondProblem:
    d, p = parse(domain_text, problem_text)
    return ground(d, p, prune_static=prune_static)
