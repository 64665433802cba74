"""
Existential polynomial systems for recognition and stretchability.

A :class:`PolySystem` is a list of declared real variables and named
constraints; every constraint is a tree of and/or/not over polynomial atoms
``P rel 0`` with integer coefficients. Systems are evaluated exactly and
serialized as SMT-LIB2 (logic QF_NRA) or canonical JSON.
"""

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from segrec.arrangement import LineArrangement, WiringDiagram, crossing_orders
from segrec.geom import Polyline, UnitSegment
from segrec.graphs import LabeledGraph, VertexLabel
from segrec.utilities import ParseError, dump_json, to_rational

EQ, GT, GE, NE = "=", ">", ">=", "!="
RELATIONS = (EQ, GT, GE, NE)
_SMT_RELATION = {EQ: "=", GT: ">", GE: ">=", NE: "distinct"}

Monomial = Tuple[Tuple[str, int], ...]
Terms = Tuple[Tuple[Monomial, int], ...]


class MissingVariable(ValueError):
    """Raised when an assignment does not cover every declared variable."""


@dataclass(frozen=True)
class Atom:
    """``sum(coeff * monomial) rel 0``."""

    terms: Terms
    rel: str

    def value(self, assignment: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for monomial, coeff in self.terms:
            term = Fraction(coeff)
            for var, exp in monomial:
                term *= assignment[var] ** exp
            total += term
        return total

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        v = self.value(assignment)
        return {EQ: v == 0, GT: v > 0, GE: v >= 0, NE: v != 0}[self.rel]

    def variables(self) -> Iterable[str]:
        for monomial, _ in self.terms:
            for var, _ in monomial:
                yield var


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        return all(a.holds(assignment) for a in self.args)


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        return any(a.holds(assignment) for a in self.args)


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        return not self.arg.holds(assignment)


Formula = Union[Atom, And, Or, Not]


@dataclass(frozen=True)
class Constraint:
    name: str
    formula: Formula


@dataclass(frozen=True)
class PolySystem:
    variables: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        declared = set(self.variables)
        for c in self.constraints:
            for atom in _atoms(c.formula):
                unknown = set(atom.variables()) - declared
                if unknown:
                    raise ValueError(
                        "Constraint {!r} mentions undeclared variable {!r}.".format(c.name, sorted(unknown)[0])
                    )


def _atoms(formula: Formula) -> Iterable[Atom]:
    if isinstance(formula, Atom):
        yield formula
    elif isinstance(formula, Not):
        yield from _atoms(formula.arg)
    else:
        for arg in formula.args:
            yield from _atoms(arg)


def atom_from_expr(expr: sympy.Expr, rel: str) -> Atom:
    """Canonical atom from a sympy expression with integer coefficients."""
    expr = sympy.expand(expr)
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    if not gens:
        value = sympy.Integer(expr)
        return Atom(((((), int(value)),) if value != 0 else ()), rel)
    poly = sympy.Poly(expr, *gens)
    terms = []
    for exps, coeff in poly.terms():
        if not coeff.is_integer:
            raise ValueError("Non-integer coefficient {} in {}.".format(coeff, expr))
        monomial = tuple((g.name, int(e)) for g, e in zip(gens, exps) if e)
        terms.append((monomial, int(coeff)))
    return Atom(tuple(sorted(terms)), rel)


_GENERIC = sympy.symbols("px py qx qy rx ry sx sy")


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _dot_between(x, a, b):
    return -((x[0] - a[0]) * (x[0] - b[0]) + (x[1] - a[1]) * (x[1] - b[1]))


@lru_cache(maxsize=None)
def _templates() -> Dict[str, Tuple[Tuple[Tuple[int, ...], int], ...]]:
    """Polynomial pieces of the segment intersection test over the generic
    endpoints p, q (first segment) and r, s (second segment)."""
    px, py, qx, qy, rx, ry, sx, sy = _GENERIC
    p, q, r, s = (px, py), (qx, qy), (rx, ry), (sx, sy)
    exprs = {
        "o1": _orient(p, q, r),
        "o2": _orient(p, q, s),
        "o3": _orient(r, s, p),
        "o4": _orient(r, s, q),
        "split12": -_orient(p, q, r) * _orient(p, q, s),
        "split34": -_orient(r, s, p) * _orient(r, s, q),
        "r_on_pq": _dot_between(r, p, q),
        "s_on_pq": _dot_between(s, p, q),
        "p_on_rs": _dot_between(p, r, s),
        "q_on_rs": _dot_between(q, r, s),
    }
    out = {}
    for name, expr in exprs.items():
        poly = sympy.Poly(sympy.expand(expr), *_GENERIC)
        out[name] = tuple((tuple(int(e) for e in exps), int(c)) for exps, c in poly.terms())
    return out


def _instantiate(name: str, names: Sequence[str], rel: str) -> Atom:
    terms = []
    for exps, coeff in _templates()[name]:
        monomial = tuple(sorted((names[i], e) for i, e in enumerate(exps) if e))
        terms.append((monomial, coeff))
    return Atom(tuple(sorted(terms)), rel)


def segment_intersection(names: Sequence[str]) -> Formula:
    """Closed-segment intersection over variables (px, py, qx, qy, rx, ry, sx, sy).

    Either segment may degenerate to a point; the collinear branch needs all
    four orientations to vanish so that such a point must lie on the other
    segment's line.
    """
    o = [_instantiate(k, names, NE) for k in ("o1", "o2", "o3", "o4")]
    proper = And(
        (_instantiate("split12", names, GE), _instantiate("split34", names, GE), Or(tuple(o)))
    )
    collinear = And(
        tuple(_instantiate(k, names, EQ) for k in ("o1", "o2", "o3", "o4"))
        + (Or(tuple(_instantiate(k, names, GE) for k in ("r_on_pq", "s_on_pq", "p_on_rs", "q_on_rs"))),)
    )
    return Or((proper, collinear))


def variable_base(v: VertexLabel) -> str:
    return str(v).replace(":", "_")


def unit_variables(v: VertexLabel) -> List[str]:
    base = variable_base(v)
    return [base + suffix for suffix in (".x1", ".y1", ".x2", ".y2")]


def polyline_variables(v: VertexLabel, k: int) -> List[str]:
    base = variable_base(v)
    return ["{}.{}{}".format(base, axis, i) for i in range(k + 2) for axis in ("x", "y")]


def _pair_names(u: VertexLabel, v: VertexLabel) -> str:
    return "{},{}".format(u, v)


def encode_unit(g: LabeledGraph) -> PolySystem:
    """Unit segment recognition of ``g`` as a polynomial system."""
    vertices = g.sorted_vertices()
    variables = [name for v in vertices for name in unit_variables(v)]
    constraints = []
    for v in vertices:
        x1, y1, x2, y2 = (sympy.Symbol(name) for name in unit_variables(v))
        constraints.append(
            Constraint("unit({})".format(v), atom_from_expr((x2 - x1) ** 2 + (y2 - y1) ** 2 - 1, EQ))
        )
    for u, v in itertools.combinations(vertices, 2):
        formula = segment_intersection(unit_variables(u) + unit_variables(v))
        if g.has_edge(u, v):
            constraints.append(Constraint("edge({})".format(_pair_names(u, v)), formula))
        else:
            constraints.append(Constraint("nonedge({})".format(_pair_names(u, v)), Not(formula)))
    return PolySystem(tuple(variables), tuple(constraints))


def encode_polyline(g: LabeledGraph, k: int) -> PolySystem:
    """k-bend polyline recognition of ``g``; no length constraints."""
    if k < 0:
        raise ValueError("k must be non-negative, got {!r}.".format(k))
    vertices = g.sorted_vertices()
    variables = [name for v in vertices for name in polyline_variables(v, k)]
    constraints = []
    for u, v in itertools.combinations(vertices, 2):
        nu, nv = polyline_variables(u, k), polyline_variables(v, k)
        pieces = [
            segment_intersection(nu[2 * i:2 * i + 4] + nv[2 * j:2 * j + 4])
            for i in range(k + 1)
            for j in range(k + 1)
        ]
        if g.has_edge(u, v):
            constraints.append(Constraint("edge({})".format(_pair_names(u, v)), Or(tuple(pieces))))
        else:
            constraints.append(
                Constraint("nonedge({})".format(_pair_names(u, v)), And(tuple(Not(p) for p in pieces)))
            )
    return PolySystem(tuple(variables), tuple(constraints))


def stretch_variables(n: int) -> List[str]:
    return [name for i in range(1, n + 1) for name in ("m{}".format(i), "b{}".format(i))]


def encode_stretchability(w: WiringDiagram) -> PolySystem:
    """Existence of a line arrangement with the crossing orders of ``w``.

    Line i is y = m_i x + b_i; labels follow ascending slope. The crossing
    of lines i and j lies at x = (b_j - b_i) / (m_i - m_j), and consecutive
    crossings along a line are compared after clearing denominators under
    both possible signs of the product of the denominators.
    """
    orders = crossing_orders(w)
    n = w.n
    m = {i: sympy.Symbol("m{}".format(i)) for i in range(1, n + 1)}
    b = {i: sympy.Symbol("b{}".format(i)) for i in range(1, n + 1)}
    constraints = []
    for i in range(1, n):
        constraints.append(Constraint("slope({}<{})".format(i, i + 1), atom_from_expr(m[i + 1] - m[i], GT)))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        constraints.append(Constraint("distinct({},{})".format(i, j), atom_from_expr(m[i] - m[j], NE)))
    for i in range(1, n + 1):
        for j, j2 in zip(orders[i], orders[i][1:]):
            num, num2 = b[j] - b[i], b[j2] - b[i]
            den, den2 = m[i] - m[j], m[i] - m[j2]
            formula = Or(
                (
                    And((atom_from_expr(den * den2, GT), atom_from_expr(num2 * den - num * den2, GT))),
                    And((atom_from_expr(-den * den2, GT), atom_from_expr(num * den2 - num2 * den, GT))),
                )
            )
            constraints.append(Constraint("order({}:{}<{})".format(i, j, j2), formula))
    return PolySystem(tuple(stretch_variables(n)), tuple(constraints))


def _check_assignment(system: PolySystem, assignment: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    missing = [v for v in system.variables if v not in assignment]
    if missing:
        raise MissingVariable("No value for variable {!r}.".format(missing[0]))
    return {v: to_rational(assignment[v]) for v in system.variables}


def evaluate(system: PolySystem, assignment: Mapping[str, Fraction]) -> bool:
    """Exact truth value of the system at ``assignment``."""
    values = _check_assignment(system, assignment)
    return all(c.formula.holds(values) for c in system.constraints)


def violated_constraints(system: PolySystem, assignment: Mapping[str, Fraction]) -> List[str]:
    values = _check_assignment(system, assignment)
    return [c.name for c in system.constraints if not c.formula.holds(values)]


def assignment_from_objects(objects: Mapping[VertexLabel, Union[UnitSegment, Polyline]]) -> Dict[str, Fraction]:
    """Variable values of a realization, matching encode_unit / encode_polyline."""
    out: Dict[str, Fraction] = {}
    for v, obj in objects.items():
        if isinstance(obj, UnitSegment):
            names = unit_variables(v)
            pts = obj.points
        else:
            names = polyline_variables(v, obj.bends)
            pts = obj.points
        coords = [c for pt in pts for c in (pt.x, pt.y)]
        out.update(zip(names, coords))
    return out


def assignment_from_lines(arrangement: LineArrangement) -> Dict[str, Fraction]:
    out = {}
    for i, line in arrangement.labelled().items():
        out["m{}".format(i)] = line.slope
        out["b{}".format(i)] = line.intercept
    return out


# SMT-LIB2

_SIMPLE_SYMBOL = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*")


def _symbol(name: str) -> str:
    return name if _SIMPLE_SYMBOL.fullmatch(name) else "|{}|".format(name)


def _int(value: int) -> str:
    return str(value) if value >= 0 else "(- {})".format(-value)


def _smt_term(monomial: Monomial, coeff: int) -> str:
    factors = [_symbol(var) for var, exp in monomial for _ in range(exp)]
    if coeff != 1 or not factors:
        factors.insert(0, _int(coeff))
    return factors[0] if len(factors) == 1 else "(* {})".format(" ".join(factors))


def _smt_poly(terms: Terms) -> str:
    if not terms:
        return "0"
    parts = [_smt_term(m, c) for m, c in terms]
    return parts[0] if len(parts) == 1 else "(+ {})".format(" ".join(parts))


def _smt_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return "({} {} 0)".format(_SMT_RELATION[f.rel], _smt_poly(f.terms))
    if isinstance(f, Not):
        return "(not {})".format(_smt_formula(f.arg))
    op = "and" if isinstance(f, And) else "or"
    if not f.args:
        return "true" if op == "and" else "false"
    return "({} {})".format(op, " ".join(_smt_formula(a) for a in f.args))


def emit_smtlib(system: PolySystem) -> str:
    """SMT-LIB2 text; each named constraint is one assert preceded by a
    comment carrying its name."""
    lines = ["(set-logic QF_NRA)"]
    lines += ["(declare-fun {} () Real)".format(_symbol(v)) for v in system.variables]
    for c in system.constraints:
        lines.append("; {}".format(c.name))
        lines.append("(assert {})".format(_smt_formula(c.formula)))
    lines += ["(check-sat)", "(get-model)"]
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|\|[^|]*\||[^\s()|;]+")


def _tokenize(text: str) -> List[Tuple[str, int, int]]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError("Unexpected character {!r}".format(text[pos]), line, col)
        tok = match.group(0)
        if not tok.isspace():
            tokens.append((tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = match.end()
    return tokens


@dataclass
class _Node:
    items: list
    line: int
    col: int


@dataclass
class _Comment:
    text: str


def _read_sexprs(tokens: List[Tuple[str, int, int]]) -> list:
    """Nested :class:`_Node` lists of (token, line, col) leaves; top-level
    comments are kept as :class:`_Comment` items."""
    stack: List[_Node] = [_Node([], 1, 1)]
    for tok, line, col in tokens:
        if tok == "(":
            stack.append(_Node([], line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("Unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].items.append(done)
        elif tok.startswith(";"):
            if len(stack) == 1:
                stack[-1].items.append(_Comment(tok[1:].strip()))
        else:
            stack[-1].items.append((tok, line, col))
    if len(stack) != 1:
        raise ParseError("Unclosed '('", stack[-1].line, stack[-1].col)
    return stack[0].items


def _atom_name(item) -> str:
    if isinstance(item, tuple):
        tok = item[0]
        return tok[1:-1] if tok.startswith("|") else tok
    raise ParseError("Expected a symbol", item.line, item.col)


def _arith(item, symbols: Dict[str, sympy.Symbol]) -> sympy.Expr:
    if isinstance(item, tuple):
        tok, line, col = item
        name = tok[1:-1] if tok.startswith("|") else tok
        if re.fullmatch(r"\d+", tok):
            return sympy.Integer(int(tok))
        if name in symbols:
            return symbols[name]
        raise ParseError("Unknown symbol {!r}".format(name), line, col)
    head = _atom_name(item.items[0]) if item.items else ""
    args = [_arith(a, symbols) for a in item.items[1:]]
    if head == "+":
        return sympy.Add(*args)
    if head == "*":
        return sympy.Mul(*args)
    if head == "-":
        return -args[0] if len(args) == 1 else args[0] - sympy.Add(*args[1:])
    raise ParseError("Unsupported arithmetic operator {!r}".format(head), item.line, item.col)


def _formula(item, symbols: Dict[str, sympy.Symbol]) -> Formula:
    if isinstance(item, tuple):
        tok, line, col = item
        if tok == "true":
            return And(())
        if tok == "false":
            return Or(())
        raise ParseError("Expected a formula, got {!r}".format(tok), line, col)
    head = _atom_name(item.items[0]) if item.items else ""
    rest = item.items[1:]
    if head == "and":
        return And(tuple(_formula(a, symbols) for a in rest))
    if head == "or":
        return Or(tuple(_formula(a, symbols) for a in rest))
    if head == "not":
        return Not(_formula(rest[0], symbols))
    relations = {"=": EQ, ">": GT, ">=": GE, "distinct": NE, "<": "<", "<=": "<="}
    if head in relations and len(rest) == 2:
        lhs, rhs = _arith(rest[0], symbols), _arith(rest[1], symbols)
        rel = relations[head]
        if rel == "<":
            return atom_from_expr(rhs - lhs, GT)
        if rel == "<=":
            return atom_from_expr(rhs - lhs, GE)
        return atom_from_expr(lhs - rhs, rel)
    raise ParseError("Unsupported formula head {!r}".format(head), item.line, item.col)


def read_smtlib(text: str) -> PolySystem:
    """Read the SMT-LIB2 subset written by :func:`emit_smtlib`."""
    items = _read_sexprs(_tokenize(text))
    variables: List[str] = []
    symbols: Dict[str, sympy.Symbol] = {}
    constraints = []
    pending_name: Optional[str] = None
    for item in items:
        if isinstance(item, _Comment):
            pending_name = item.text
            continue
        if isinstance(item, tuple):
            raise ParseError("Unexpected token {!r}".format(item[0]), item[1], item[2])
        head = _atom_name(item.items[0]) if item.items else ""
        if head == "declare-fun":
            if len(item.items) < 2:
                raise ParseError("declare-fun needs a name", item.line, item.col)
            name = _atom_name(item.items[1])
            variables.append(name)
            symbols[name] = sympy.Symbol(name)
        elif head == "assert":
            if len(item.items) != 2:
                raise ParseError("assert takes one formula", item.line, item.col)
            name = pending_name or "c{}".format(len(constraints))
            constraints.append(Constraint(name, _formula(item.items[1], symbols)))
            pending_name = None
        elif head in ("set-logic", "check-sat", "get-model", "set-info", "set-option"):
            continue
        else:
            raise ParseError("Unsupported command {!r}".format(head), item.line, item.col)
    return PolySystem(tuple(variables), tuple(constraints))


# JSON


def _formula_to_dict(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {
            "op": "atom",
            "rel": f.rel,
            "terms": [
                {"coeff": c, "monomial": [[var, exp] for var, exp in m]} for m, c in f.terms
            ],
        }
    if isinstance(f, Not):
        return {"op": "not", "arg": _formula_to_dict(f.arg)}
    return {"op": "and" if isinstance(f, And) else "or", "args": [_formula_to_dict(a) for a in f.args]}


def _formula_from_dict(data: dict) -> Formula:
    try:
        op = data["op"]
        if op == "atom":
            if data["rel"] not in RELATIONS:
                raise ParseError("Unknown relation {!r}.".format(data["rel"]))
            terms = tuple(
                sorted(
                    (tuple((str(var), int(exp)) for var, exp in t["monomial"]), int(t["coeff"]))
                    for t in data["terms"]
                )
            )
            return Atom(terms, data["rel"])
        if op == "not":
            return Not(_formula_from_dict(data["arg"]))
        if op in ("and", "or"):
            cls = And if op == "and" else Or
            return cls(tuple(_formula_from_dict(a) for a in data["args"]))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError("Malformed formula node {!r}: {}".format(data, e))
    raise ParseError("Unknown formula op {!r}.".format(data.get("op")))


def system_to_dict(system: PolySystem) -> dict:
    return {
        "variables": list(system.variables),
        "constraints": [{"name": c.name, "formula": _formula_to_dict(c.formula)} for c in system.constraints],
    }


def emit_json(system: PolySystem) -> str:
    """Canonical JSON with sorted keys."""
    return dump_json(system_to_dict(system))


def read_json(text: str) -> PolySystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("Invalid JSON: {}".format(e.msg), e.lineno, e.colno)
    try:
        variables = tuple(str(v) for v in data["variables"])
        constraints = tuple(
            Constraint(str(c["name"]), _formula_from_dict(c["formula"])) for c in data["constraints"]
        )
    except (KeyError, TypeError) as e:
        raise ParseError("Malformed polynomial system: missing {}".format(e))
    try:
        return PolySystem(variables, constraints)
    except ValueError as e:
        raise ParseError(str(e))
